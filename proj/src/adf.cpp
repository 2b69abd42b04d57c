#include "lagbo/adf.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

#include "lagbo/error.hpp"

namespace lagbo {

namespace {

// Dickey-Fuller critical values with constant and trend, rows indexed by sample
// size, columns by tail probability.
constexpr std::array<double, 6> kSampleSizes = {25, 50, 100, 250, 500, 100000};
constexpr std::array<double, 8> kProbabilities = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr double kCritical[8][6] = {
    {-4.38, -4.15, -4.04, -3.99, -3.98, -3.96},
    {-3.95, -3.80, -3.73, -3.69, -3.68, -3.66},
    {-3.60, -3.50, -3.45, -3.43, -3.42, -3.41},
    {-3.24, -3.18, -3.15, -3.13, -3.13, -3.12},
    {-1.14, -1.19, -1.22, -1.23, -1.24, -1.25},
    {-0.80, -0.87, -0.90, -0.92, -0.93, -0.94},
    {-0.50, -0.58, -0.62, -0.64, -0.65, -0.66},
    {-0.15, -0.24, -0.28, -0.31, -0.32, -0.33},
};

// Piecewise-linear interpolation with constant extrapolation at both ends.
template <typename Xs, typename Ys>
double interpolate(const Xs& xs, const Ys& ys, double x) {
  const std::size_t n = xs.size();
  if (x <= xs[0]) return ys[0];
  if (x >= xs[n - 1]) return ys[n - 1];
  for (std::size_t i = 1; i < n; ++i) {
    if (x <= xs[i]) {
      const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return ys[i - 1] + w * (ys[i] - ys[i - 1]);
    }
  }
  return ys[n - 1];
}

}  // namespace

std::size_t adf_default_lag(std::size_t length) {
  if (length < 2) return 0;
  return static_cast<std::size_t>(std::trunc(std::cbrt(static_cast<double>(length - 1))));
}

AdfResult adf_test(std::span<const double> y, std::optional<std::size_t> lag_opt) {
  const std::size_t lag = lag_opt.value_or(adf_default_lag(y.size()));
  if (y.size() < lag + 3)
    throw Error(ErrorCode::SeriesTooShort, "ADF needs length > lag + 2, got " + std::to_string(y.size()));

  const std::size_t n_diff = y.size() - 1;
  std::vector<double> dy(n_diff);
  for (std::size_t t = 0; t < n_diff; ++t) dy[t] = y[t + 1] - y[t];

  // Rows correspond to differences dy[t] for t = lag .. n_diff-1.
  const std::size_t rows = n_diff - lag;
  const std::size_t cols = 3 + lag;
  if (rows <= cols)
    throw Error(ErrorCode::SingularRegression, "no residual degrees of freedom for ADF regression");

  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd target(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = r + lag;
    target(r) = dy[t];
    X(r, 0) = y[t];  // level preceding dy[t]
    X(r, 1) = 1.0;
    X(r, 2) = static_cast<double>(t + 1);
    for (std::size_t j = 1; j <= lag; ++j) X(r, 2 + j) = dy[t - j];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < static_cast<Eigen::Index>(cols))
    throw Error(ErrorCode::SingularRegression, "ADF design matrix is rank-deficient");
  const Eigen::VectorXd beta = qr.solve(target);
  const Eigen::VectorXd resid = target - X * beta;
  const double sigma2 = resid.squaredNorm() / static_cast<double>(rows - cols);

  // Var(beta) = sigma^2 (X'X)^{-1} = sigma^2 P R^{-1} R^{-T} P^T.
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(cols, cols));
  const Eigen::MatrixXd unpermuted = Rinv * Rinv.transpose();
  const Eigen::MatrixXd cov = qr.colsPermutation() * unpermuted * qr.colsPermutation().transpose();
  const double se = std::sqrt(sigma2 * cov(0, 0));
  if (!(se > 0.0) || !std::isfinite(se))
    throw Error(ErrorCode::SingularRegression, "zero standard error in ADF regression");

  AdfResult out;
  out.lag = lag;
  out.statistic = beta(0) / se;

  std::array<double, 8> crit{};
  for (std::size_t i = 0; i < 8; ++i)
    crit[i] = interpolate(kSampleSizes, kCritical[i], static_cast<double>(n_diff));
  out.p_value = interpolate(crit, kProbabilities, out.statistic);
  out.p_clamped = out.statistic <= crit.front() || out.statistic >= crit.back();
  return out;
}

}  // namespace lagbo
