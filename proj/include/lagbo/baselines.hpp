#pragma once

#include <cstddef>
#include <vector>

#include "lagbo/series.hpp"

namespace lagbo {

/// y_hat[T+h] = y[T + h - period * ceil(h / period)].
std::vector<double> seasonal_naive(const Series& history, std::size_t horizon);

struct HoltWintersParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  int period = 12;
};

struct HoltWintersFit {
  HoltWintersParams params;
  double in_sample_mse = 0.0;
  std::vector<double> forecasts;
};

/// One-step-ahead in-sample MSE of additive Holt-Winters at fixed parameters.
double holt_winters_mse(const Series& history, const HoltWintersParams& params);

/// Additive Holt-Winters with (alpha, beta, gamma) chosen on the grid
/// {0, 0.05, ..., 1}^3 by in-sample one-step MSE; ties go to the
/// lexicographically smallest triple.
HoltWintersFit holt_winters_fit_forecast(const Series& history, std::size_t horizon);

}  // namespace lagbo
