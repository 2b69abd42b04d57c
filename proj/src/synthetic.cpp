#include "lagbo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lagbo/error.hpp"
#include "lagbo/seeding.hpp"

namespace lagbo {

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::SeasonalAR: return "seasonal-ar";
    case SyntheticKind::Sine: return "sine";
    case SyntheticKind::RandomWalk: return "random-walk";
  }
  return "?";
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  for (auto k : {SyntheticKind::SeasonalAR, SyntheticKind::Sine, SyntheticKind::RandomWalk})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

Series generate_synthetic(SyntheticKind kind, std::size_t length, std::uint64_t seed, YearMonth start) {
  if (length < 24) throw Error(ErrorCode::SeriesTooShort, "synthetic series need at least 24 points");
  Rng rng(derive_seed(seed, {fnv1a64(to_string(kind))}));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(length);

  switch (kind) {
    case SyntheticKind::SeasonalAR: {
      double x = 0.0;
      for (std::size_t t = 0; t < length; ++t) {
        x = kSeasonalArCoefficient * x + kSeasonalArNoiseSd * normal(rng);
        y[t] = std::max(0.0, kSeasonalProfile[t % 12] + x);
      }
      break;
    }
    case SyntheticKind::Sine:
      for (std::size_t t = 0; t < length; ++t)
        y[t] = 100.0 + 50.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0) + 5.0 * normal(rng);
      break;
    case SyntheticKind::RandomWalk: {
      double level = 0.0;
      for (std::size_t t = 0; t < length; ++t) {
        if (t > 0) level += normal(rng);
        y[t] = level;
      }
      break;
    }
  }
  return Series(std::move(y), 12, start);
}

}  // namespace lagbo
