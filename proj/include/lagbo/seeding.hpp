#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace lagbo {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a 64-bit hash, used to turn station names into seed components.
std::uint64_t fnv1a64(std::string_view text);

/// Derives an independent child seed from a master seed and a path of
/// stream identifiers, e.g. derive_seed(master, {station, variant, iteration}).
/// Any single evaluation can be reproduced from its path alone.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace lagbo
