#include <numbers>

#include "doctest.h"
#include "support.hpp"

#include "lagbo/synthetic.hpp"

using namespace lagbo;

TEST_CASE("same seed, same series") {
  for (auto kind : {SyntheticKind::SeasonalAR, SyntheticKind::Sine, SyntheticKind::RandomWalk}) {
    CHECK(generate_synthetic(kind, 100, 7).vec() == generate_synthetic(kind, 100, 7).vec());
    CHECK(generate_synthetic(kind, 100, 7).vec() != generate_synthetic(kind, 100, 8).vec());
  }
}

TEST_CASE("seasonal AR is non-negative and labeled") {
  const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 480, 1);
  CHECK(s.size() == 480);
  CHECK(s.period() == 12);
  CHECK(s.start()->str() == "2000-01");
  for (double v : s.values()) CHECK(v >= 0.0);
}

TEST_CASE("seasonal means recover the profile") {
  const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 1200, 5);
  // Same-month draws are 12 steps apart, so they are close to independent.
  const double phi = kSeasonalArCoefficient;
  const double sd = kSeasonalArNoiseSd / std::sqrt(1.0 - phi * phi);
  const double se = sd / std::sqrt(100.0);
  for (std::size_t j = 0; j < 12; ++j) {
    double sum = 0.0;
    for (std::size_t t = j; t < s.size(); t += 12) sum += s[t];
    CHECK(std::abs(sum / 100.0 - kSeasonalProfile[j]) < 3.0 * se);
  }
}

TEST_CASE("sine and random walk shapes") {
  const auto sine = generate_synthetic(SyntheticKind::Sine, 1200, 2);
  double peak = 0.0;
  for (std::size_t t = 3; t < sine.size(); t += 12) peak += sine[t];
  CHECK(peak / 100.0 == doctest::Approx(150.0).epsilon(0.01));

  const auto walk = generate_synthetic(SyntheticKind::RandomWalk, 50, 2);
  CHECK(walk.size() == 50);
}

TEST_CASE("kind names and length precondition") {
  CHECK(parse_synthetic_kind("seasonal-ar") == SyntheticKind::SeasonalAR);
  CHECK(to_string(SyntheticKind::RandomWalk) == "random-walk");
  CHECK_FALSE(parse_synthetic_kind("ar"));
  lagbo::testing::expect_error(ErrorCode::SeriesTooShort, [] { generate_synthetic(SyntheticKind::Sine, 23, 0); });
}
