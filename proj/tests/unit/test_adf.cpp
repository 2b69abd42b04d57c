#include "doctest.h"
#include "support.hpp"

#include "lagbo/adf.hpp"

using namespace lagbo;
using lagbo::testing::gaussian;
using lagbo::testing::random_walk;

TEST_CASE("default lag order") {
  CHECK(adf_default_lag(500) == 7);  // trunc(499^(1/3))
  CHECK(adf_default_lag(872) == 9);
  CHECK(adf_default_lag(28) == 3);
}

TEST_CASE("white noise rejects the unit root") {
  const auto r = adf_test(gaussian(500, 11));
  CHECK(r.statistic < -3.5);
  CHECK(r.p_value == 0.01);
  CHECK(r.p_clamped);
}

TEST_CASE("random walks reject at the nominal rate") {
  // Under a unit root the 10% test should reject about 10% of the time.
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) rejected += adf_test(random_walk(500, 1000 + seed)).p_value <= 0.10;
  CHECK(rejected >= 24);  // roughly 10% +- 4 standard errors
  CHECK(rejected <= 64);
}

TEST_CASE("statistic is invariant to a constant shift") {
  auto y = random_walk(300, 5);
  const auto a = adf_test(y);
  for (auto& v : y) v += 250.0;
  const auto b = adf_test(y);
  CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-9));
}

TEST_CASE("explicit lag is honored") {
  const auto r = adf_test(gaussian(200, 3), 2);
  CHECK(r.lag == 2);
}

TEST_CASE("too short for the requested lag") {
  lagbo::testing::expect_error(ErrorCode::SeriesTooShort, [] { adf_test(std::vector<double>{1, 2, 3, 4}, 2); });
}
