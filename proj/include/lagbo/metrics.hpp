#pragma once

#include <span>
#include <vector>

namespace lagbo {

double rmse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);

enum class SmapeForm {
  /// (100/h) * sum |y - yhat| / max(|y| + |yhat| + eps, 0.5 + eps)
  Standard,
  /// (100/h) * sqrt(sum |y - yhat| / max(...)), the square-root form.
  LiteralSqrt,
};

double smape_modified(std::span<const double> actual, std::span<const double> predicted,
                      double epsilon = 0.1, SmapeForm form = SmapeForm::Standard);

/// Ascending ranks with ties sharing the mean of their positions (1-based).
std::vector<double> average_ranks(std::span<const double> values);

/// Per-model mean rank of absolute forecast errors across time points.
/// `predictions[k]` is model k's forecast; returns one value in [1, M] per model.
std::vector<double> arank(std::span<const double> actual, const std::vector<std::vector<double>>& predictions);

struct MetricSet {
  double rmse = 0.0;
  double mae = 0.0;
  double smape = 0.0;
  double arank = 0.0;  // meaningful only within a multi-model comparison
};

}  // namespace lagbo
