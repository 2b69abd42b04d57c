#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lagbo/series.hpp"

namespace lagbo {

enum class SyntheticKind { SeasonalAR, Sine, RandomWalk };

std::string_view to_string(SyntheticKind kind);
/// Accepts "seasonal-ar", "sine" and "random-walk".
std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

/// Monthly profile used by SeasonalAR, roughly shaped like monsoon rainfall.
inline constexpr double kSeasonalProfile[12] = {30, 40, 65, 120, 240, 410, 470, 400, 300, 180, 60, 30};
inline constexpr double kSeasonalArCoefficient = 0.6;
inline constexpr double kSeasonalArNoiseSd = 8.0;

/// Monthly synthetic series (period 12), deterministic per seed.
///   SeasonalAR: x_t = 0.6 x_{t-1} + e_t, e_t ~ N(0, 8^2); y_t = max(0, s[t mod 12] + x_t)
///   Sine:       y_t = 100 + 50 sin(2 pi t / 12) + N(0, 5^2)
///   RandomWalk: y_t = y_{t-1} + N(0, 1), y_0 = 0
/// Throws SeriesTooShort when length < 24.
Series generate_synthetic(SyntheticKind kind, std::size_t length, std::uint64_t seed,
                          YearMonth start = YearMonth{2000, 1});

}  // namespace lagbo
