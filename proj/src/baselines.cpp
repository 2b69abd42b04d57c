#include "lagbo/baselines.hpp"

#include <cmath>
#include <limits>

#include "lagbo/error.hpp"

namespace lagbo {

namespace {

struct HwState {
  double level = 0.0;
  double trend = 0.0;
  std::vector<double> seasonal;  // seasonal[t % p] holds the latest index for that phase
  double sse = 0.0;
  std::size_t count = 0;
};

HwState run_holt_winters(std::span<const double> y, std::size_t p, double alpha, double beta, double gamma) {
  HwState s;
  double mean1 = 0.0;
  double mean2 = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    mean1 += y[i];
    mean2 += y[p + i];
  }
  mean1 /= static_cast<double>(p);
  mean2 /= static_cast<double>(p);
  s.level = mean1;
  s.trend = (mean2 - mean1) / static_cast<double>(p);
  s.seasonal.resize(p);
  for (std::size_t i = 0; i < p; ++i) s.seasonal[i] = y[i] - mean1;

  for (std::size_t t = p; t < y.size(); ++t) {
    const double season = s.seasonal[t % p];
    const double pred = s.level + s.trend + season;
    const double e = y[t] - pred;
    s.sse += e * e;
    ++s.count;
    const double prev_level = s.level;
    s.level = alpha * (y[t] - season) + (1.0 - alpha) * (s.level + s.trend);
    s.trend = beta * (s.level - prev_level) + (1.0 - beta) * s.trend;
    s.seasonal[t % p] = gamma * (y[t] - s.level) + (1.0 - gamma) * season;
  }
  return s;
}

void check_history(const Series& history) {
  const auto p = static_cast<std::size_t>(history.period());
  if (history.size() < 2 * p)
    throw Error(ErrorCode::SeriesTooShort, "Holt-Winters needs at least two full seasons");
}

}  // namespace

std::vector<double> seasonal_naive(const Series& history, std::size_t horizon) {
  const auto p = static_cast<std::size_t>(history.period());
  if (history.size() < p) throw Error(ErrorCode::SeriesTooShort, "seasonal naive needs one full season");
  const std::size_t n = history.size();
  std::vector<double> out(horizon);
  for (std::size_t h = 1; h <= horizon; ++h) {
    const std::size_t back = p * ((h + p - 1) / p);
    out[h - 1] = history[n + h - 1 - back];
  }
  return out;
}

double holt_winters_mse(const Series& history, const HoltWintersParams& params) {
  check_history(history);
  const auto s = run_holt_winters(history.values(), static_cast<std::size_t>(history.period()), params.alpha,
                                  params.beta, params.gamma);
  return s.sse / static_cast<double>(s.count);
}

HoltWintersFit holt_winters_fit_forecast(const Series& history, std::size_t horizon) {
  check_history(history);
  const auto p = static_cast<std::size_t>(history.period());
  const auto y = history.values();

  HoltWintersFit fit;
  fit.params.period = history.period();
  fit.in_sample_mse = std::numeric_limits<double>::infinity();
  constexpr int kSteps = 20;
  for (int a = 0; a <= kSteps; ++a) {
    for (int b = 0; b <= kSteps; ++b) {
      for (int g = 0; g <= kSteps; ++g) {
        const double alpha = a / static_cast<double>(kSteps);
        const double beta = b / static_cast<double>(kSteps);
        const double gamma = g / static_cast<double>(kSteps);
        const auto s = run_holt_winters(y, p, alpha, beta, gamma);
        const double mse = s.sse / static_cast<double>(s.count);
        // Strict improvement keeps the lexicographically smallest triple on ties.
        if (mse < fit.in_sample_mse) {
          fit.in_sample_mse = mse;
          fit.params = {alpha, beta, gamma, history.period()};
        }
      }
    }
  }

  const auto s = run_holt_winters(y, p, fit.params.alpha, fit.params.beta, fit.params.gamma);
  const std::size_t n = y.size();
  fit.forecasts.resize(horizon);
  for (std::size_t h = 1; h <= horizon; ++h)
    fit.forecasts[h - 1] = s.level + static_cast<double>(h) * s.trend + s.seasonal[(n + h - 1) % p];
  return fit;
}

}  // namespace lagbo
