#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

namespace lagbo {

enum class KernelKind { SquaredExponential, Matern52 };

/// Stationary covariance over the unit cube.
struct Kernel {
  KernelKind kind = KernelKind::Matern52;
  Eigen::VectorXd length_scales;  // one per input dimension, > 0
  double signal_variance = 1.0;   // k(x, x)
  double jitter = 1e-8;           // nugget added to the covariance diagonal

  /// Distance scaled by the per-dimension length scales.
  double scaled_distance(std::span<const double> a, std::span<const double> b) const;
  /// Covariance as a function of scaled distance.
  double from_distance(double r) const;
};

/// k(a, b). Throws DimensionMismatch when sizes disagree with the length scales.
double kernel_eval(const Kernel& kernel, std::span<const double> a, std::span<const double> b);

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;  // clamped at 0
};

struct GPFitOptions {
  KernelKind kind = KernelKind::Matern52;
  int n_starts = 8;
  int max_evals_per_start = 300;
  double log_bound = 5.0;  // |log length scale|, |log signal variance| <= log_bound
  std::uint64_t seed = 0;
};

/// Conditioned Gaussian process with constant prior mean. Immutable; queries
/// are safe to run concurrently.
class GPState {
 public:
  /// Conditions on (points, values) with fixed kernel hyperparameters.
  /// Jitter doubles from kernel.jitter up to 1e-4 until the covariance factors.
  GPState(Eigen::MatrixXd points, Eigen::VectorXd values, Kernel kernel, double mean_const);

  Posterior posterior(std::span<const double> x) const;
  Posterior posterior(const Eigen::VectorXd& x) const {
    return posterior(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

  double log_marginal_likelihood() const { return log_ml_; }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& values() const { return values_; }
  const Kernel& kernel() const { return kernel_; }
  double mean_const() const { return mean_const_; }
  /// Lower Cholesky factor of K + jitter * I.
  const Eigen::MatrixXd& chol() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd values_;
  Kernel kernel_;
  double mean_const_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double log_ml_ = 0.0;
};

/// Covariance matrix K(points, points) without jitter.
Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Eigen::MatrixXd& points);

/// Fits a GP: prior mean is the sample mean; kernel hyperparameters maximize
/// the log marginal likelihood by multi-start Nelder-Mead in log space.
/// Points are expected in the unit cube (rows are observations).
GPState gp_fit(const Eigen::MatrixXd& points, std::span<const double> values,
               const GPFitOptions& options = {});

/// In-place lower Cholesky factorization; returns false if `a` is not
/// numerically positive definite.
bool cholesky_lower(Eigen::MatrixXd& a);

}  // namespace lagbo
