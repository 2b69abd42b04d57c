#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lagbo {

/// Year-month label of a monthly observation.
struct YearMonth {
  int year = 2000;
  int month = 1;  // 1..12

  /// Parses "YYYY-MM"; returns nullopt on malformed input.
  static std::optional<YearMonth> parse(std::string_view text);
  std::string str() const;
  int index() const { return year * 12 + (month - 1); }
  YearMonth plus_months(int n) const;

  friend bool operator==(const YearMonth&, const YearMonth&) = default;
};

/// Ordered univariate series. Values are always finite.
class Series {
 public:
  Series() = default;
  explicit Series(std::vector<double> values, int period = 12,
                  std::optional<YearMonth> start = std::nullopt);

  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  int period() const { return period_; }
  const std::optional<YearMonth>& start() const { return start_; }

  /// Contiguous sub-series [offset, offset + count); the start label is advanced accordingly.
  Series slice(std::size_t offset, std::size_t count) const;

 private:
  std::vector<double> values_;
  int period_ = 12;
  std::optional<YearMonth> start_;
};

/// Concatenates two series; `head`'s period and start label are kept.
Series concat(const Series& head, const Series& tail);

struct SplitSpec {
  std::size_t validation_len = 60;
  std::size_t test_len = 60;
};

enum class NormSource { TrainOnly, TrainPlusValidation };

struct NormStats {
  double min = 0.0;
  double max = 1.0;
  NormSource source = NormSource::TrainOnly;

  /// Min/max of `values`; throws DegenerateRange for a constant input.
  static NormStats from(std::span<const double> values, NormSource source);
};

struct SplitSeries {
  Series train;
  Series validation;
  Series test;
  NormStats norm;  // computed on `train`
};

SplitSeries split(const Series& series, const SplitSpec& spec);

std::vector<double> normalize(std::span<const double> values, const NormStats& stats);
std::vector<double> denormalize(std::span<const double> values, const NormStats& stats);

/// Supervised windows over a series: row i is values[i, i+lag), target i is values[i+lag].
struct LagDataset {
  std::size_t lag = 0;
  std::vector<double> inputs;   // row-major, rows() x lag
  std::vector<double> targets;  // rows()

  std::size_t rows() const { return targets.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(inputs).subspan(i * lag, lag);
  }
};

LagDataset make_lag_dataset(std::span<const double> values, std::size_t lag);

/// Classical additive decomposition; `seasonal[j]` is the index for positions
/// t with t % period == j, measured from the first observation.
struct Decomposition {
  std::vector<double> seasonal;
  Series deseasonalized;
};

Decomposition decompose(const Series& series);

/// Adds seasonal[(phase + t) % period] back onto each point.
std::vector<double> reseasonalize(std::span<const double> deseasonalized,
                                  const Decomposition& decomposition, std::size_t phase);

}  // namespace lagbo
