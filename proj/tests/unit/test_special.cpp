#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "support.hpp"

#include "lagbo/special_functions.hpp"

using namespace lagbo;
namespace bm = boost::math;

TEST_CASE("normal distribution reference points") {
  CHECK(special::normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-7));
  CHECK(special::normal_cdf(0.0) == 0.5);
  CHECK(special::normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  // The upper tail keeps relative accuracy far out.
  CHECK(special::normal_sf(10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-10));
}

TEST_CASE("symmetric incomplete beta at one half") {
  for (double a : {0.5, 1.0, 2.5, 7.0, 40.0}) CHECK(special::incomplete_beta(0.5, a, a) == doctest::Approx(0.5));
  CHECK(special::f_cdf(1.0, 5.0, 5.0) == doctest::Approx(0.5));
}

TEST_CASE("erf and erfc agree with Boost") {
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    CHECK(special::erf(x) == doctest::Approx(bm::erf(x)).epsilon(1e-13));
    CHECK(special::erfc(x) == doctest::Approx(bm::erfc(x)).epsilon(1e-12));
  }
}

TEST_CASE("incomplete beta and gamma agree with Boost") {
  for (double a : {0.3, 1.0, 3.5, 12.0, 49.0})
    for (double b : {0.7, 2.0, 6.0, 35.0})
      for (double x : {0.01, 0.2, 0.5, 0.8, 0.99})
        CHECK(special::incomplete_beta(x, a, b) == doctest::Approx(bm::ibeta(a, b, x)).epsilon(1e-11));

  for (double a : {0.5, 1.0, 3.5, 10.0, 60.0})
    for (double x : {0.1, 1.0, 4.0, 9.5, 30.0, 80.0})
      CHECK(special::incomplete_gamma_p(a, x) == doctest::Approx(bm::gamma_p(a, x)).epsilon(1e-11));
}

TEST_CASE("F and chi-square tails agree with Boost") {
  const bm::fisher_f f(7.0, 56.0);
  for (double v : {0.1, 1.0, 2.5, 13.43, 21.518}) {
    CHECK(special::f_cdf(v, 7.0, 56.0) == doctest::Approx(bm::cdf(f, v)).epsilon(1e-11));
    CHECK(special::f_sf(v, 7.0, 56.0) == doctest::Approx(bm::cdf(bm::complement(f, v))).epsilon(1e-9));
  }
  const bm::chi_squared c(7.0);
  for (double v : {0.5, 3.0, 7.0, 35.0})
    CHECK(special::chi2_sf(v, 7.0) == doctest::Approx(bm::cdf(bm::complement(c, v))).epsilon(1e-10));
}

TEST_CASE("domain violations are reported") {
  lagbo::testing::expect_error(ErrorCode::DomainError, [] { special::incomplete_beta(1.5, 1.0, 1.0); });
  lagbo::testing::expect_error(ErrorCode::DomainError, [] { special::incomplete_gamma_p(-1.0, 1.0); });
  lagbo::testing::expect_error(ErrorCode::DomainError, [] { special::f_cdf(1.0, 0.0, 3.0); });
}
