#include "lagbo/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "lagbo/error.hpp"

namespace lagbo {

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  int year = 0;
  int month = 0;
  auto [p1, e1] = std::from_chars(text.data(), text.data() + 4, year);
  auto [p2, e2] = std::from_chars(text.data() + 5, text.data() + 7, month);
  if (e1 != std::errc{} || e2 != std::errc{} || p1 != text.data() + 4 || p2 != text.data() + 7)
    return std::nullopt;
  if (month < 1 || month > 12) return std::nullopt;
  return YearMonth{year, month};
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::plus_months(int n) const {
  const int idx = index() + n;
  return YearMonth{idx / 12, idx % 12 + 1};
}

Series::Series(std::vector<double> values, int period, std::optional<YearMonth> start)
    : values_(std::move(values)), period_(period), start_(start) {
  if (period_ < 1) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::NonFiniteValue, "value at index " + std::to_string(i) + " is not finite");
  }
}

Series Series::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > values_.size()) throw Error(ErrorCode::OutOfBounds, "slice exceeds series");
  std::optional<YearMonth> start;
  if (start_) start = start_->plus_months(static_cast<int>(offset));
  return Series(std::vector<double>(values_.begin() + offset, values_.begin() + offset + count),
                period_, start);
}

Series concat(const Series& head, const Series& tail) {
  std::vector<double> v(head.vec());
  v.insert(v.end(), tail.vec().begin(), tail.vec().end());
  return Series(std::move(v), head.period(), head.start());
}

NormStats NormStats::from(std::span<const double> values, NormSource source) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "cannot normalize an empty series");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi > *lo)) throw Error(ErrorCode::DegenerateRange, "series is constant");
  return NormStats{*lo, *hi, source};
}

SplitSeries split(const Series& series, const SplitSpec& spec) {
  if (spec.validation_len == 0 || spec.test_len == 0)
    throw Error(ErrorCode::InvalidArgument, "validation and test lengths must be positive");
  const std::size_t held = spec.validation_len + spec.test_len;
  if (series.size() <= held)
    throw Error(ErrorCode::SeriesTooShort, "length " + std::to_string(series.size()) +
                                               " leaves no training data for |V|+|Te| = " +
                                               std::to_string(held));
  const std::size_t n_train = series.size() - held;
  SplitSeries out;
  out.train = series.slice(0, n_train);
  out.validation = series.slice(n_train, spec.validation_len);
  out.test = series.slice(n_train + spec.validation_len, spec.test_len);
  out.norm = NormStats::from(out.train.values(), NormSource::TrainOnly);
  return out;
}

namespace {
void check_range(const NormStats& stats) {
  if (!(stats.max > stats.min)) throw Error(ErrorCode::DegenerateRange, "max must exceed min");
}
}  // namespace

std::vector<double> normalize(std::span<const double> values, const NormStats& stats) {
  check_range(stats);
  const double range = stats.max - stats.min;
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double y) { return (y - stats.min) / range; });
  return out;
}

std::vector<double> denormalize(std::span<const double> values, const NormStats& stats) {
  check_range(stats);
  const double range = stats.max - stats.min;
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double z) { return z * range + stats.min; });
  return out;
}

LagDataset make_lag_dataset(std::span<const double> values, std::size_t lag) {
  if (lag < 1) throw Error(ErrorCode::InvalidArgument, "lag must be at least 1");
  if (lag >= values.size())
    throw Error(ErrorCode::LagTooLarge, "lag " + std::to_string(lag) + " >= series length " +
                                            std::to_string(values.size()));
  LagDataset ds;
  ds.lag = lag;
  const std::size_t n = values.size() - lag;
  ds.inputs.reserve(n * lag);
  ds.targets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.inputs.insert(ds.inputs.end(), values.begin() + i, values.begin() + i + lag);
    ds.targets.push_back(values[i + lag]);
  }
  return ds;
}

Decomposition decompose(const Series& series) {
  const std::size_t p = static_cast<std::size_t>(series.period());
  const std::size_t n = series.size();
  if (n < 2 * p)
    throw Error(ErrorCode::SeriesTooShort, "decomposition needs at least two full seasons");
  const auto y = series.values();

  // Centered moving average: 2xp for even periods, plain p for odd.
  const std::size_t half = p / 2;
  std::vector<double> sums(p, 0.0);
  std::vector<std::size_t> counts(p, 0);
  for (std::size_t t = half; t + half < n; ++t) {
    double trend = 0.0;
    if (p % 2 == 0) {
      trend = 0.5 * (y[t - half] + y[t + half]);
      for (std::size_t j = t - half + 1; j < t + half; ++j) trend += y[j];
    } else {
      for (std::size_t j = t - half; j <= t + half; ++j) trend += y[j];
    }
    trend /= static_cast<double>(p);
    sums[t % p] += y[t] - trend;
    ++counts[t % p];
  }

  Decomposition d;
  d.seasonal.resize(p);
  double mean = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    d.seasonal[j] = sums[j] / static_cast<double>(counts[j]);
    mean += d.seasonal[j];
  }
  mean /= static_cast<double>(p);
  for (double& s : d.seasonal) s -= mean;

  std::vector<double> rest(n);
  for (std::size_t t = 0; t < n; ++t) rest[t] = y[t] - d.seasonal[t % p];
  d.deseasonalized = Series(std::move(rest), series.period(), series.start());
  return d;
}

std::vector<double> reseasonalize(std::span<const double> deseasonalized,
                                  const Decomposition& decomposition, std::size_t phase) {
  const std::size_t p = decomposition.seasonal.size();
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "empty seasonal component");
  std::vector<double> out(deseasonalized.size());
  for (std::size_t t = 0; t < out.size(); ++t)
    out[t] = deseasonalized[t] + decomposition.seasonal[(phase + t) % p];
  return out;
}

}  // namespace lagbo
