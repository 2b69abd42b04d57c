#include "lagbo/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lagbo/error.hpp"
#include "lagbo/metrics.hpp"
#include "lagbo/special_functions.hpp"

namespace lagbo {

ComparisonTable::ComparisonTable(std::vector<std::string> models, std::vector<std::string> datasets,
                                 std::vector<std::vector<double>> values)
    : models_(std::move(models)), datasets_(std::move(datasets)), values_(std::move(values)) {
  if (values_.size() != datasets_.size())
    throw Error(ErrorCode::LengthMismatch, "one row of values per dataset is required");
  for (const auto& row : values_) {
    if (row.size() != models_.size()) throw Error(ErrorCode::LengthMismatch, "one value per model is required");
    for (double v : row)
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "comparison values must be finite");
  }
  average_ranks_.assign(models_.size(), 0.0);
  for (const auto& row : values_) {
    ranks_.push_back(lagbo::average_ranks(row));
    for (std::size_t j = 0; j < models_.size(); ++j) average_ranks_[j] += ranks_.back()[j];
  }
  if (!values_.empty())
    for (double& r : average_ranks_) r /= static_cast<double>(values_.size());
}

FriedmanResult friedman(const ComparisonTable& table) {
  const double k = static_cast<double>(table.k());
  const double n = static_cast<double>(table.n());
  if (table.k() < 2) throw Error(ErrorCode::InsufficientData, "Friedman test needs at least two models");
  if (table.n() < 2) throw Error(ErrorCode::InsufficientData, "Friedman test needs at least two datasets");

  double sum_sq = 0.0;
  for (double r : table.average_ranks()) sum_sq += r * r;
  FriedmanResult out;
  out.chi2 = 12.0 * n / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
  if (std::fabs(out.chi2) < 1e-12) out.chi2 = 0.0;
  out.chi2_p = special::chi2_sf(out.chi2, k - 1.0);
  out.df1 = k - 1.0;
  out.df2 = (k - 1.0) * (n - 1.0);

  const double denom = n * (k - 1.0) - out.chi2;
  if (denom <= 1e-12 * n * (k - 1.0)) {
    out.degenerate = true;
    out.ff = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
    return out;
  }
  out.ff = (n - 1.0) * out.chi2 / denom;
  out.p_value = special::f_sf(out.ff, out.df1, out.df2);
  return out;
}

TwoStepResult hochberg(const ComparisonTable& table, std::string_view reference, double alpha) {
  const auto& models = table.models();
  const auto it = std::find(models.begin(), models.end(), reference);
  if (it == models.end()) throw Error(ErrorCode::UnknownReference, "reference model '" + std::string(reference) + "' not in table");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::DomainError, "alpha must be in (0, 1)");
  const auto ref = static_cast<std::size_t>(it - models.begin());

  TwoStepResult out;
  out.friedman = friedman(table);
  out.reference = std::string(reference);
  out.alpha = alpha;
  out.models = models;
  out.average_ranks = table.average_ranks();

  const double k = static_cast<double>(table.k());
  const double n = static_cast<double>(table.n());
  const double se = std::sqrt(k * (k + 1.0) / (6.0 * n));
  for (std::size_t j = 0; j < models.size(); ++j) {
    if (j == ref) continue;
    PostHocComparison c;
    c.model = models[j];
    c.z = (out.average_ranks[j] - out.average_ranks[ref]) / se;
    c.p_value = std::min(1.0, 2.0 * special::normal_sf(std::fabs(c.z)));
    out.comparisons.push_back(std::move(c));
  }

  std::vector<std::size_t> order(out.comparisons.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.comparisons[a].p_value < out.comparisons[b].p_value;
  });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto& c = out.comparisons[order[pos]];
    c.position = pos + 1;
    c.threshold = static_cast<double>(pos + 1) / k * alpha;
    c.reject = c.p_value < c.threshold;
  }
  return out;
}

}  // namespace lagbo
