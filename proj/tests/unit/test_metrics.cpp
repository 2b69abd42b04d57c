#include "doctest.h"
#include "support.hpp"

#include "lagbo/metrics.hpp"

using namespace lagbo;
using lagbo::testing::expect_error;

TEST_CASE("rmse and mae") {
  const std::vector<double> a{2, 4}, p{1, 6};
  CHECK(std::abs(rmse(a, p) - std::sqrt(2.5)) < 1e-12);
  CHECK(std::abs(mae(a, p) - 1.5) < 1e-12);
  CHECK(rmse(a, a) == 0.0);
  CHECK(mae(a, a) == 0.0);
  CHECK(rmse(std::vector<double>{3.0}, std::vector<double>{-1.5}) == 4.5);
  CHECK(mae(std::vector<double>{3.0}, std::vector<double>{-1.5}) == 4.5);
}

TEST_CASE("metric preconditions") {
  expect_error(ErrorCode::EmptyInput, [] { rmse(std::vector<double>{}, std::vector<double>{}); });
  expect_error(ErrorCode::LengthMismatch, [] { mae(std::vector<double>{1, 2}, std::vector<double>{1}); });
  expect_error(ErrorCode::DomainError,
               [] { smape_modified(std::vector<double>{1}, std::vector<double>{1}, 0.0); });
}

TEST_CASE("modified smape with a floored denominator") {
  CHECK(smape_modified(std::vector<double>{0.0}, std::vector<double>{0.0}) == 0.0);
  CHECK(std::abs(smape_modified(std::vector<double>{100.0}, std::vector<double>{50.0}) - 100.0 * 50.0 / 150.1) < 1e-9);
  CHECK(smape_modified(std::vector<double>{100.0}, std::vector<double>{50.0}) == doctest::Approx(33.311).epsilon(1e-4));
  const std::vector<double> y{3, 7, 1};
  CHECK(smape_modified(y, y) == 0.0);

  // Near zero the floor 0.5 + eps takes over: |0.2 - 0| / 0.6.
  CHECK(std::abs(smape_modified(std::vector<double>{0.2}, std::vector<double>{0.0}) - 100.0 * 0.2 / 0.6) < 1e-9);
  // Square-root form of the same two-point sum.
  const std::vector<double> a{100, 10}, p{50, 20};
  const double sum = 50.0 / 150.1 + 10.0 / 30.1;
  CHECK(std::abs(smape_modified(a, p, 0.1, SmapeForm::LiteralSqrt) - 50.0 * std::sqrt(sum)) < 1e-9);
}

TEST_CASE("average ranks share ties") {
  CHECK(average_ranks(std::vector<double>{3, 1, 2}) == std::vector<double>{3, 1, 2});
  CHECK(average_ranks(std::vector<double>{5, 5, 1, 5}) == std::vector<double>{3, 3, 1, 3});
}

TEST_CASE("arank") {
  const std::vector<double> actual{0, 0};
  const auto two = arank(actual, {{0.1, -0.2}, {1.0, 2.0}});
  CHECK(two == std::vector<double>{1.0, 2.0});

  const auto tied = arank(actual, {{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  for (double r : tied) CHECK(r == 2.5);

  const auto crossed = arank(actual, {{1, 3}, {2, 2}, {3, 1}});
  CHECK(crossed == std::vector<double>{2.0, 2.0, 2.0});

  expect_error(ErrorCode::InvalidArgument, [&] { arank(actual, {{1, 1}}); });
}
