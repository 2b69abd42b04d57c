#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace lagbo {

struct AdfResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t lag = 0;
  /// True when the interpolated p-value fell outside the table and was clamped
  /// to 0.01 or 0.99; the true value is then smaller or larger respectively.
  bool p_clamped = false;
};

/// Default augmented lag order trunc((T - 1)^(1/3)).
std::size_t adf_default_lag(std::size_t length);

/// Augmented Dickey-Fuller test with constant and linear trend.
/// Regresses diff(y)_t on y_{t-1}, 1, t and `lag` lagged differences; the
/// statistic is the t-ratio on y_{t-1}. The p-value is interpolated in the
/// tabulated Dickey-Fuller critical values (trend case) and clamped to [0.01, 0.99].
AdfResult adf_test(std::span<const double> series, std::optional<std::size_t> lag = std::nullopt);

}  // namespace lagbo
