#include <numbers>
#include <numeric>

#include "doctest.h"
#include "support.hpp"

#include "lagbo/baselines.hpp"

using namespace lagbo;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("seasonal naive copies the last season") {
  std::vector<double> y(36);
  std::iota(y.begin(), y.end(), 0.0);
  const Series s(y);
  const auto f12 = seasonal_naive(s, 12);
  for (std::size_t h = 0; h < 12; ++h) CHECK(f12[h] == y[24 + h]);

  const auto f13 = seasonal_naive(s, 13);
  CHECK(f13[12] == y[24]);

  const auto f60 = seasonal_naive(s, 60);
  for (std::size_t h = 0; h < 60; ++h) CHECK(f60[h] == y[24 + h % 12]);
}

TEST_CASE("seasonal naive needs one season") {
  lagbo::testing::expect_error(ErrorCode::SeriesTooShort,
                               [] { seasonal_naive(Series(std::vector<double>(11, 1.0)), 3); });
}

TEST_CASE("Holt-Winters on a constant series") {
  const auto fit = holt_winters_fit_forecast(Series(std::vector<double>(48, 17.0)), 24);
  for (double v : fit.forecasts) CHECK(v == doctest::Approx(17.0).epsilon(1e-9));
  CHECK(fit.in_sample_mse == doctest::Approx(0.0).scale(1e-9));
}

TEST_CASE("Holt-Winters follows a linear trend") {
  std::vector<double> y(72);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = 2.0 * static_cast<double>(t);
  const auto fit = holt_winters_fit_forecast(Series(y), 12);
  const double slope = (fit.forecasts[11] - fit.forecasts[0]) / 11.0;
  CHECK(std::abs(slope - 2.0) < 0.1);
}

TEST_CASE("Holt-Winters tracks an exact-period sinusoid") {
  std::vector<double> y(120), truth(12);
  auto f = [](std::size_t t) { return 50.0 + 20.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0); };
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = f(t);
  for (std::size_t h = 0; h < 12; ++h) truth[h] = f(120 + h);
  const auto fit = holt_winters_fit_forecast(Series(y), 12);
  CHECK(correlation(fit.forecasts, truth) > 0.95);
}

TEST_CASE("grid choice minimizes the in-sample error") {
  const auto y = lagbo::testing::gaussian(48, 3, 5.0);
  std::vector<double> seasonal(48);
  for (std::size_t t = 0; t < 48; ++t) seasonal[t] = 100.0 + 10.0 * static_cast<double>(t % 12) + y[t];
  const Series s(seasonal);
  const auto fit = holt_winters_fit_forecast(s, 6);
  CHECK(fit.in_sample_mse == doctest::Approx(holt_winters_mse(s, fit.params)));
  for (double a : {0.0, 0.3, 0.85})
    for (double g : {0.1, 0.6}) CHECK(fit.in_sample_mse <= holt_winters_mse(s, {a, 0.05, g, 12}) + 1e-12);
}
