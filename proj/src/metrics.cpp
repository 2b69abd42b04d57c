#include "lagbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lagbo/error.hpp"

namespace lagbo {

namespace {

void check_pair(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.empty()) throw Error(ErrorCode::EmptyInput, "metric needs at least one point");
  if (actual.size() != predicted.size())
    throw Error(ErrorCode::LengthMismatch, "actual and predicted lengths differ");
}

}  // namespace

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(actual.size()));
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += std::fabs(actual[i] - predicted[i]);
  return s / static_cast<double>(actual.size());
}

double smape_modified(std::span<const double> actual, std::span<const double> predicted, double epsilon,
                      SmapeForm form) {
  check_pair(actual, predicted);
  if (!(epsilon > 0.0)) throw Error(ErrorCode::DomainError, "epsilon must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double denom = std::max(std::fabs(actual[i]) + std::fabs(predicted[i]) + epsilon, 0.5 + epsilon);
    s += std::fabs(actual[i] - predicted[i]) / denom;
  }
  const double h = static_cast<double>(actual.size());
  return form == SmapeForm::Standard ? 100.0 * s / h : 100.0 * std::sqrt(s) / h;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);  // mean of positions i+1 .. j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

std::vector<double> arank(std::span<const double> actual, const std::vector<std::vector<double>>& predictions) {
  if (predictions.size() < 2) throw Error(ErrorCode::InvalidArgument, "ARank needs at least two models");
  if (actual.empty()) throw Error(ErrorCode::EmptyInput, "ARank needs at least one point");
  for (const auto& p : predictions)
    if (p.size() != actual.size()) throw Error(ErrorCode::LengthMismatch, "prediction length differs from actual");

  const std::size_t models = predictions.size();
  std::vector<double> sums(models, 0.0);
  std::vector<double> errors(models);
  for (std::size_t t = 0; t < actual.size(); ++t) {
    for (std::size_t k = 0; k < models; ++k) errors[k] = std::fabs(actual[t] - predictions[k][t]);
    const auto r = average_ranks(errors);
    for (std::size_t k = 0; k < models; ++k) sums[k] += r[k];
  }
  for (double& s : sums) s /= static_cast<double>(actual.size());
  return sums;
}

}  // namespace lagbo
