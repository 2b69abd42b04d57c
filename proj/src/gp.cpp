#include "lagbo/gp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lagbo/error.hpp"
#include "lagbo/seeding.hpp"
#include "nelder_mead.hpp"

namespace lagbo {

namespace {

constexpr double kMaxJitter = 1e-4;
constexpr double kSqrt5 = 2.2360679774997896964;

std::span<const double> row_span(const Eigen::MatrixXd& m, Eigen::Index r, Eigen::VectorXd& scratch) {
  scratch = m.row(r).transpose();
  return {scratch.data(), static_cast<std::size_t>(scratch.size())};
}

struct Factorization {
  Eigen::MatrixXd chol;
  double jitter = 0.0;
};

// Cholesky of K + jitter * I with jitter escalation.
bool factor_with_jitter(const Eigen::MatrixXd& k, double start_jitter, Factorization& out) {
  for (double jitter = start_jitter; jitter <= kMaxJitter * (1.0 + 1e-12); jitter *= 2.0) {
    Eigen::MatrixXd a = k;
    a.diagonal().array() += jitter;
    if (cholesky_lower(a)) {
      out.chol = std::move(a);
      out.jitter = jitter;
      return true;
    }
  }
  return false;
}

double log_ml_from(const Eigen::MatrixXd& chol, const Eigen::VectorXd& centered, Eigen::VectorXd& alpha) {
  const auto L = chol.triangularView<Eigen::Lower>();
  alpha = L.solve(centered);
  const double quad = alpha.squaredNorm();
  alpha = L.transpose().solve(alpha);
  const double logdet = 2.0 * chol.diagonal().array().log().sum();
  const double n = static_cast<double>(centered.size());
  return -0.5 * quad - 0.5 * logdet - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace

bool cholesky_lower(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return true;
}

double Kernel::scaled_distance(std::span<const double> a, std::span<const double> b) const {
  const auto d = static_cast<std::size_t>(length_scales.size());
  if (a.size() != d || b.size() != d)
    throw Error(ErrorCode::DimensionMismatch, "point dimension does not match the kernel");
  double r2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double u = (a[i] - b[i]) / length_scales(static_cast<Eigen::Index>(i));
    r2 += u * u;
  }
  return std::sqrt(r2);
}

double Kernel::from_distance(double r) const {
  switch (kind) {
    case KernelKind::SquaredExponential:
      return signal_variance * std::exp(-0.5 * r * r);
    case KernelKind::Matern52:
      return signal_variance * (1.0 + kSqrt5 * r + 5.0 * r * r / 3.0) * std::exp(-kSqrt5 * r);
  }
  return 0.0;
}

double kernel_eval(const Kernel& kernel, std::span<const double> a, std::span<const double> b) {
  return kernel.from_distance(kernel.scaled_distance(a, b));
}

Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd ri, rj;
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = kernel.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = kernel_eval(kernel, row_span(points, i, ri), row_span(points, j, rj));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

GPState::GPState(Eigen::MatrixXd points, Eigen::VectorXd values, Kernel kernel, double mean_const)
    : points_(std::move(points)), values_(std::move(values)), kernel_(std::move(kernel)), mean_const_(mean_const) {
  if (points_.rows() < 1) throw Error(ErrorCode::EmptyInput, "GP needs at least one observation");
  if (values_.size() != points_.rows())
    throw Error(ErrorCode::LengthMismatch, "points and values differ in length");
  if (kernel_.length_scales.size() != points_.cols())
    throw Error(ErrorCode::DimensionMismatch, "kernel dimension does not match points");
  if (!values_.allFinite()) throw Error(ErrorCode::NonFiniteValue, "GP values must be finite");

  Factorization f;
  if (!factor_with_jitter(kernel_matrix(kernel_, points_), kernel_.jitter, f))
    throw Error(ErrorCode::CholeskyFailure, "covariance not positive definite at jitter 1e-4");
  chol_ = std::move(f.chol);
  kernel_.jitter = f.jitter;
  const Eigen::VectorXd centered = values_.array() - mean_const_;
  log_ml_ = log_ml_from(chol_, centered, alpha_);
}

Posterior GPState::posterior(std::span<const double> x) const {
  if (x.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "query dimension mismatch");
  const Eigen::Index n = points_.rows();
  Eigen::VectorXd kx(n);
  Eigen::VectorXd scratch;
  for (Eigen::Index i = 0; i < n; ++i) kx(i) = kernel_eval(kernel_, row_span(points_, i, scratch), x);
  Posterior p;
  p.mean = mean_const_ + kx.dot(alpha_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(kx);
  p.variance = std::max(0.0, kernel_.signal_variance - v.squaredNorm());
  return p;
}

GPState gp_fit(const Eigen::MatrixXd& points, std::span<const double> values, const GPFitOptions& options) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (n < 1) throw Error(ErrorCode::EmptyInput, "GP needs at least one observation");
  if (static_cast<std::size_t>(n) != values.size())
    throw Error(ErrorCode::LengthMismatch, "points and values differ in length");

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = values[static_cast<std::size_t>(i)];
  if (!y.allFinite()) throw Error(ErrorCode::NonFiniteValue, "GP values must be finite");
  const double mean = y.mean();
  const Eigen::VectorXd centered = y.array() - mean;

  // Signal variance is searched relative to the sample variance so the log
  // bounds are meaningful for any objective scale.
  double scale2 = n > 1 ? centered.squaredNorm() / static_cast<double>(n - 1) : 1.0;
  if (!(scale2 > 1e-300)) scale2 = 1.0;
  const double log_scale2 = std::log(scale2);

  Kernel kernel;
  kernel.kind = options.kind;
  kernel.length_scales = Eigen::VectorXd::Constant(d, 0.3);

  // theta = (log length scales..., log relative signal variance)
  auto make_kernel = [&](const Eigen::VectorXd& theta) {
    Kernel k = kernel;
    k.length_scales = theta.head(d).array().exp();
    k.signal_variance = std::exp(theta(d) + log_scale2);
    return k;
  };
  auto neg_log_ml = [&](const Eigen::VectorXd& theta) {
    const Kernel k = make_kernel(theta);
    Factorization f;
    if (!factor_with_jitter(kernel_matrix(k, points), k.jitter, f))
      return std::numeric_limits<double>::infinity();
    Eigen::VectorXd alpha;
    const double v = -log_ml_from(f.chol, centered, alpha);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  const Eigen::VectorXd lower = Eigen::VectorXd::Constant(d + 1, -options.log_bound);
  const Eigen::VectorXd upper = Eigen::VectorXd::Constant(d + 1, options.log_bound);
  Rng rng(options.seed);
  std::uniform_real_distribution<double> unif(-options.log_bound, options.log_bound);

  Eigen::VectorXd best_theta(d + 1);
  best_theta.head(d).setConstant(std::log(0.3));
  best_theta(d) = 0.0;
  double best_value = std::numeric_limits<double>::infinity();

  if (n >= 2) {
    for (int s = 0; s < options.n_starts; ++s) {
      Eigen::VectorXd start(d + 1);
      if (s == 0) {
        start.head(d).setConstant(std::log(0.3));
        start(d) = 0.0;
      } else {
        for (Eigen::Index i = 0; i <= d; ++i) start(i) = unif(rng);
      }
      const auto r = detail::nelder_mead(neg_log_ml, start, lower, upper, options.max_evals_per_start);
      if (r.value < best_value) {
        best_value = r.value;
        best_theta = r.x;
      }
    }
  }
  return GPState(points, y, make_kernel(best_theta), mean);
}

}  // namespace lagbo
