#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "support.hpp"

#include "lagbo/gp.hpp"

using namespace lagbo;

namespace {

Kernel unit_kernel(KernelKind kind, Eigen::Index d, double length = 1.0, double variance = 1.0) {
  Kernel k;
  k.kind = kind;
  k.length_scales = Eigen::VectorXd::Constant(d, length);
  k.signal_variance = variance;
  return k;
}

Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = u(rng);
  return x;
}

// Posterior computed with an explicit matrix inverse.
Posterior inverse_oracle(const GPState& gp, const Eigen::VectorXd& x) {
  const Kernel& k = gp.kernel();
  const Eigen::Index n = gp.points().rows();
  Eigen::MatrixXd kmat = kernel_matrix(k, gp.points());
  kmat.diagonal().array() += k.jitter;
  const Eigen::MatrixXd inv = kmat.inverse();
  Eigen::VectorXd kx(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd p = gp.points().row(i).transpose();
    kx(i) = kernel_eval(k, std::span<const double>(p.data(), p.size()), std::span<const double>(x.data(), x.size()));
  }
  const Eigen::VectorXd centered = gp.values().array() - gp.mean_const();
  return {gp.mean_const() + kx.dot(inv * centered), k.signal_variance - kx.dot(inv * kx)};
}

}  // namespace

TEST_CASE("Matern 5/2 at unit scaled distance") {
  const Kernel k = unit_kernel(KernelKind::Matern52, 1);
  const double r5 = std::sqrt(5.0);
  CHECK(k.from_distance(1.0) == doctest::Approx((1.0 + r5 + 5.0 / 3.0) * std::exp(-r5)).epsilon(1e-14));
  CHECK(k.from_distance(1.0) == doctest::Approx(0.52399).epsilon(1e-5));
}

TEST_CASE("kernel at zero distance is the signal variance") {
  for (auto kind : {KernelKind::Matern52, KernelKind::SquaredExponential}) {
    const Kernel k = unit_kernel(kind, 3, 0.4, 2.7);
    const std::vector<double> a{0.1, 0.2, 0.3};
    CHECK(kernel_eval(k, a, a) == 2.7);
  }
  const Kernel se = unit_kernel(KernelKind::SquaredExponential, 1);
  CHECK(se.from_distance(1.0) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("kernel rejects mismatched dimensions") {
  const Kernel k = unit_kernel(KernelKind::Matern52, 2);
  lagbo::testing::expect_error(ErrorCode::DimensionMismatch,
                               [&] { kernel_eval(k, std::vector<double>{0.1}, std::vector<double>{0.2}); });
}

TEST_CASE("posterior agrees with the explicit-inverse oracle") {
  std::mt19937_64 rng(42);
  const Eigen::MatrixXd x = random_points(8, 2, rng);
  Eigen::VectorXd y(8);
  for (Eigen::Index i = 0; i < 8; ++i) y(i) = std::sin(3.0 * x(i, 0)) + x(i, 1) * x(i, 1);
  const GPState gp(x, y, unit_kernel(KernelKind::Matern52, 2, 0.4, 1.3), y.mean());
  for (int q = 0; q < 20; ++q) {
    const Eigen::VectorXd xq = random_points(1, 2, rng).row(0).transpose();
    const Posterior got = gp.posterior(xq);
    const Posterior want = inverse_oracle(gp, xq);
    CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-8));
    CHECK(got.variance == doctest::Approx(std::max(0.0, want.variance)).epsilon(1e-6).scale(1e-9));
  }
}

TEST_CASE("fitted GP interpolates its observations") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::Index n = 3 + rep;
    const Eigen::Index d = 1 + rep % 6;
    const Eigen::MatrixXd x = random_points(n, d, rng);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (auto& v : y) v = u(rng);
    GPFitOptions opts;
    opts.seed = static_cast<std::uint64_t>(rep);
    const GPState gp = gp_fit(x, y, opts);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Posterior p = gp.posterior(Eigen::VectorXd(x.row(i).transpose()));
      CHECK(std::abs(p.mean - y[static_cast<std::size_t>(i)]) < 1e-6);
      CHECK(p.variance <= 1e-6);
    }
  }
}

TEST_CASE("far from the data the prior comes back") {
  Eigen::MatrixXd x(3, 1);
  x << 0.1, 0.5, 0.9;
  const Eigen::VectorXd y = Eigen::Vector3d(1.0, -2.0, 0.5);
  const GPState gp(x, y, unit_kernel(KernelKind::Matern52, 1, 0.05, 1.7), 0.25);
  const Posterior p = gp.posterior(Eigen::VectorXd::Constant(1, 50.0));
  CHECK(p.mean == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(p.variance == doctest::Approx(1.7).epsilon(1e-4));
}

TEST_CASE("between points on a line the mean follows the line") {
  Eigen::MatrixXd x(3, 1);
  x << 0.2, 0.5, 0.8;
  const std::vector<double> y{0.2, 0.5, 0.8};
  const GPState gp = gp_fit(x, y);
  for (double q : {0.3, 0.35, 0.6, 0.7}) {
    const Eigen::VectorXd xq = Eigen::VectorXd::Constant(1, q);
    CHECK(std::abs(gp.posterior(xq).mean - q) < 0.05);
    CHECK(gp.posterior(xq).mean == doctest::Approx(inverse_oracle(gp, xq).mean).epsilon(1e-8));
  }
}

TEST_CASE("duplicate inputs with different values do not break the fit") {
  Eigen::MatrixXd x(3, 1);
  x << 0.4, 0.4, 0.7;
  const std::vector<double> y{1.0, 2.0, 0.0};
  const GPState gp = gp_fit(x, y);
  CHECK(std::isfinite(gp.log_marginal_likelihood()));
  CHECK(gp.kernel().jitter >= 1e-8);
  const Posterior p = gp.posterior(Eigen::VectorXd::Constant(1, 0.4));
  CHECK(std::isfinite(p.mean));
  CHECK(p.mean > 0.9);
  CHECK(p.mean < 2.1);
}

TEST_CASE("constant observations give a constant posterior mean") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = random_points(6, 2, rng);
  const std::vector<double> y(6, 3.25);
  const GPState gp = gp_fit(x, y);
  CHECK(std::isfinite(gp.log_marginal_likelihood()));
  for (int q = 0; q < 10; ++q)
    CHECK(gp.posterior(Eigen::VectorXd(random_points(1, 2, rng).row(0).transpose())).mean ==
          doctest::Approx(3.25).epsilon(1e-9));
}

TEST_CASE("length scales stay inside the search bounds") {
  Eigen::MatrixXd x(5, 1);
  x << 0.0, 0.25, 0.5, 0.75, 1.0;
  std::vector<double> y;
  for (Eigen::Index i = 0; i < 5; ++i) y.push_back(std::sin(4.0 * x(i, 0)));
  const GPState gp = gp_fit(x, y);
  CHECK(gp.kernel().length_scales(0) > 1e-3);
  CHECK(gp.kernel().length_scales(0) < 1e3);
}

TEST_CASE("log marginal likelihood ignores observation order") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = random_points(7, 3, rng);
  Eigen::VectorXd y(7);
  for (Eigen::Index i = 0; i < 7; ++i) y(i) = x.row(i).sum();
  const Kernel k = unit_kernel(KernelKind::Matern52, 3, 0.5, 1.1);
  const GPState a(x, y, k, 0.4);

  Eigen::PermutationMatrix<Eigen::Dynamic> perm(7);
  perm.indices() << 3, 6, 0, 5, 1, 4, 2;
  const GPState b(perm * x, perm * y, k, 0.4);
  CHECK(a.log_marginal_likelihood() == doctest::Approx(b.log_marginal_likelihood()).epsilon(1e-10));
}

TEST_CASE("Cholesky reports indefinite input") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 2.0, 1.0;
  CHECK_FALSE(cholesky_lower(a));
  Eigen::MatrixXd b(2, 2);
  b << 4.0, 2.0, 2.0, 3.0;
  REQUIRE(cholesky_lower(b));
  CHECK(b(0, 0) == doctest::Approx(2.0));
  CHECK(b(1, 0) == doctest::Approx(1.0));
  CHECK(b(1, 1) == doctest::Approx(std::sqrt(2.0)));
}
