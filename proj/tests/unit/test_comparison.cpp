#include <fstream>

#include "doctest.h"
#include "support.hpp"

#include "lagbo/comparison.hpp"
#include "lagbo/experiment.hpp"
#include "lagbo/special_functions.hpp"

using namespace lagbo;
using lagbo::testing::expect_error;

namespace {

const PostHocComparison& find(const TwoStepResult& r, const std::string& model) {
  for (const auto& c : r.comparisons)
    if (c.model == model) return c;
  FAIL("no comparison for " << model);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("Friedman on a three-by-three example") {
  // Ranks A(1,1,2), B(2,2,1), C(3,3,3).
  const ComparisonTable t({"A", "B", "C"}, {"d1", "d2", "d3"}, {{1, 2, 3}, {1, 2, 3}, {2, 1, 3}});
  CHECK(t.average_ranks()[0] == doctest::Approx(4.0 / 3.0));
  const auto f = friedman(t);
  CHECK(f.chi2 == doctest::Approx(14.0 / 3.0).epsilon(1e-12));
  CHECK(f.ff == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(f.df1 == 2.0);
  CHECK(f.df2 == 4.0);
  CHECK(f.p_value == doctest::Approx(special::f_sf(7.0, 2.0, 4.0)));
}

TEST_CASE("identical models give a zero statistic") {
  const ComparisonTable t({"A", "B", "C"}, {"d1", "d2"}, {{1, 1, 1}, {4, 4, 4}});
  const auto f = friedman(t);
  CHECK(f.chi2 == 0.0);
  CHECK(f.ff == 0.0);
  CHECK(f.p_value == doctest::Approx(1.0));
}

TEST_CASE("perfect separation is flagged") {
  const ComparisonTable t({"A", "B"}, {"d1", "d2", "d3"}, {{1, 2}, {1, 2}, {1, 2}});
  const auto f = friedman(t);
  CHECK(f.degenerate);
  CHECK(f.p_value == 0.0);
}

TEST_CASE("Friedman needs two models and two datasets") {
  expect_error(ErrorCode::InsufficientData, [] { friedman(ComparisonTable({"A"}, {"d1", "d2"}, {{1}, {2}})); });
  expect_error(ErrorCode::InsufficientData, [] { friedman(ComparisonTable({"A", "B"}, {"d1"}, {{1, 2}})); });
}

TEST_CASE("z statistic for a rank gap of five with eight models on nine datasets") {
  const std::vector<std::string> models{"PROP", "LSL", "M3", "M4", "M5", "M6", "M7", "M8"};
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> values;
  for (int i = 0; i < 9; ++i) {
    datasets.push_back("d" + std::to_string(i));
    // PROP always ranks 1 and LSL always 6.
    values.push_back({1, 6, 2, 3, 4, 5, 7, 8});
  }
  const auto r = hochberg(ComparisonTable(models, datasets, values), "PROP", 0.10);
  const auto& lsl = find(r, "LSL");
  CHECK(lsl.z == doctest::Approx(5.0 / std::sqrt(72.0 / 54.0)).epsilon(1e-12));
  CHECK(lsl.z == doctest::Approx(4.330).epsilon(1e-4));
  CHECK(lsl.p_value == doctest::Approx(2.0 * special::normal_sf(lsl.z)));
  CHECK(r.comparisons.size() == 7);
}

TEST_CASE("step-up thresholds follow position over k") {
  const ComparisonTable t({"R", "A", "B", "C"}, {"d1", "d2", "d3", "d4"},
                          {{1, 2, 3, 4}, {1, 2, 4, 3}, {1, 3, 2, 4}, {2, 1, 3, 4}});
  const auto r = hochberg(t, "R", 0.10);
  std::vector<std::size_t> positions;
  for (const auto& c : r.comparisons) {
    CHECK(c.threshold == doctest::Approx(static_cast<double>(c.position) / 4.0 * 0.10));
    CHECK(c.reject == (c.p_value < c.threshold));
    positions.push_back(c.position);
  }
  std::sort(positions.begin(), positions.end());
  CHECK(positions == std::vector<std::size_t>{1, 2, 3});
  // C has the largest rank gap so the smallest p-value.
  CHECK(find(r, "C").position == 1);
}

TEST_CASE("equal ranks are never rejected") {
  const ComparisonTable t({"R", "A"}, {"d1", "d2"}, {{1, 2}, {2, 1}});
  const auto r = hochberg(t, "R", 0.10);
  CHECK(r.comparisons[0].z == 0.0);
  CHECK(r.comparisons[0].p_value == doctest::Approx(1.0));
  CHECK_FALSE(r.comparisons[0].reject);
}

TEST_CASE("unknown reference") {
  const ComparisonTable t({"A", "B"}, {"d1", "d2"}, {{1, 2}, {2, 1}});
  expect_error(ErrorCode::UnknownReference, [&] { hochberg(t, "LSTM", 0.10); });
}

TEST_CASE("published comparison table through stats_only") {
  const auto tests = stats_only(std::filesystem::path(LAGBO_TEST_DATA) / "published_comparison_metrics.csv");
  REQUIRE(tests.size() == 4);
  CHECK(tests[0].metric == "rmse");
  REQUIRE(tests[0].result);
  const auto& rm = *tests[0].result;
  CHECK(std::abs(rm.friedman.ff - 13.430) < 0.02);
  CHECK(std::abs(find(rm, "LSL").z - 4.330) < 0.01);
  CHECK(std::abs(find(rm, "SARIMA").z - 4.907) < 0.01);
  CHECK(std::abs(find(rm, "LFH1").p_value - 0.248) < 0.002);

  REQUIRE(tests[1].result);
  const auto& ma = *tests[1].result;
  CHECK(std::abs(ma.friedman.ff - 21.518) < 0.02);
  CHECK(std::abs(find(ma, "SARIMA").z - 5.004) < 0.01);
  CHECK(std::abs(find(ma, "ETS").z - 4.811) < 0.01);
}

TEST_CASE("stats_only with one dataset") {
  std::istringstream csv("station,model,rmse\nS1,PROP,1.0\nS1,LSL,2.0\n");
  expect_error(ErrorCode::InsufficientData, [&] { stats_only(csv); });
}

TEST_CASE("stats_only with a missing row") {
  std::istringstream csv("station,model,rmse\nS1,PROP,1.0\nS1,LSL,2.0\nS2,PROP,1.0\n");
  expect_error(ErrorCode::ParseError, [&] { stats_only(csv); });
}
