#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"

#include "lagbo/error.hpp"

namespace lagbo::testing {

// Runs `fn` and checks that it throws lagbo::Error with the given code.
template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  bool thrown = false;
  try {
    fn();
  } catch (const Error& e) {
    thrown = true;
    CHECK_MESSAGE(e.code() == code, "got " << e.what());
  }
  CHECK_MESSAGE(thrown, "expected " << to_string(code));
}

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(0.0, sd);
  std::vector<double> out(n);
  for (auto& v : out) v = norm(rng);
  return out;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
  auto steps = gaussian(n, seed);
  for (std::size_t i = 1; i < n; ++i) steps[i] += steps[i - 1];
  return steps;
}

}  // namespace lagbo::testing
