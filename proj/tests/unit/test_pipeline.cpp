#include <numeric>

#include "doctest.h"
#include "support.hpp"

#include "lagbo/metrics.hpp"
#include "lagbo/pipeline.hpp"
#include "lagbo/synthetic.hpp"

using namespace lagbo;

namespace {

// Small bounds and budget keep each run to a few seconds.
PipelineConfig quick_config(Variant variant, std::uint64_t seed) {
  PipelineConfig c;
  c.variant = variant;
  c.seed = seed;
  c.n_initial = 3;
  c.n_iterations = 2;
  c.lstm.epochs = 8;
  c.space = SearchSpace({
      {"m", 2, 60, true, false},
      {"dr", 0.0, 0.5, false, false},
      {"lr", 1e-3, 1e-1, false, true},
      {"hu1", 4, 12, true, false},
      {"hu2", 4, 12, true, false},
      {"b", 16, 64, true, false},
  });
  return c;
}

}  // namespace

TEST_CASE("pinned lags per variant") {
  CHECK(lag_for_variant(Variant::LSL, 12, 60) == 12);
  CHECK(lag_for_variant(Variant::LFH1p25, 12, 60) == 15);
  CHECK(lag_for_variant(Variant::LFH1, 12, 60) == 60);
  CHECK_FALSE(lag_for_variant(Variant::PROP, 12, 60));
  lagbo::testing::expect_error(ErrorCode::InvalidArgument, [] { lag_for_variant(Variant::LSL, 0, 60); });
}

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::PROP, Variant::LSL, Variant::LFH1, Variant::LFH1p25})
    CHECK(parse_variant(to_string(v)) == v);
  CHECK_FALSE(parse_variant("LSTM"));
}

TEST_CASE("lags reported for the rainfall stations fit the default search box") {
  const SearchSpace space = SearchSpace::lstm_default();
  const auto m = space[*space.find("m")];
  for (int lag : {34, 32, 36, 45, 34, 38, 31, 33, 35}) {
    CHECK(lag >= m.lower);
    CHECK(lag <= m.upper);
  }
}

TEST_CASE("validation objective") {
  const std::vector<double> z{0.2, -0.4, 0.9};
  CHECK(validation_objective(z, z) == 0.0);
  const std::vector<double> zero(3, 0.0);
  CHECK(validation_objective(zero, z) == doctest::Approx(-(0.04 + 0.16 + 0.81) / 3.0).epsilon(1e-15));
  lagbo::testing::expect_error(ErrorCode::LengthMismatch, [&] { validation_objective(zero, std::vector<double>{1}); });
}

TEST_CASE("objective evaluation is deterministic and maps failures to minus infinity") {
  const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 240, 3);
  const auto prep = prepare_series(s, {60, 60}, true);
  HyperParams h;
  h.m = 12;
  h.hu1 = 6;
  h.hu2 = 6;
  h.lr = 1e-2;
  const LstmSettings settings{5, 20};
  const double a = objective_eval(h, prep.z_train, prep.z_validation, settings, 99);
  const double b = objective_eval(h, prep.z_train, prep.z_validation, settings, 99);
  CHECK(std::isfinite(a));
  CHECK(a <= 0.0);
  CHECK(a == b);

  h.m = 500;  // longer than the training set
  CHECK(objective_eval(h, prep.z_train, prep.z_validation, settings, 99) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("prepared series keep the seasonal phase") {
  const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 485, 2);
  const auto prep = prepare_series(s, {60, 60}, true);
  CHECK(prep.n_train == 365);
  CHECK(prep.test.size() == 60);
  CHECK(prep.test_phase == 425 % 12);
  REQUIRE(prep.decomposition);
  CHECK(prep.z_train.size() == 365);
  CHECK(*std::min_element(prep.z_train.begin(), prep.z_train.end()) == 0.0);
  CHECK(*std::max_element(prep.z_train.begin(), prep.z_train.end()) == 1.0);
}

TEST_CASE("fixed-lag variants pin m in every trace entry") {
  const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 480, 1);
  const auto lsl = run_pipeline(s, quick_config(Variant::LSL, 4));
  for (const auto& h : lsl.evaluated) CHECK(h.m == 12);
  CHECK(lsl.chosen.m == 12);
  CHECK(lsl.searched_dimensions.size() == 5);

  const auto lfh1 = run_pipeline(s, quick_config(Variant::LFH1, 4));
  CHECK(lfh1.chosen.m == 60);
}

TEST_CASE("PROP searches m and otherwise shares the trace layout") {
  const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 480, 1);
  const auto prop = run_pipeline(s, quick_config(Variant::PROP, 4));
  const auto lsl = run_pipeline(s, quick_config(Variant::LSL, 4));
  REQUIRE(prop.trace.size() == lsl.trace.size());
  CHECK(prop.searched_dimensions.front() == "m");
  for (std::size_t i = 0; i < prop.trace.size(); ++i) {
    CHECK(prop.trace[i].raw.size() == lsl.trace[i].raw.size() + 1);
    CHECK(prop.trace[i].realized.size() == lsl.trace[i].realized.size() + 1);
  }
  CHECK(prop.chosen.m >= 2);
  CHECK(prop.chosen.m <= 60);
  CHECK(prop.forecasts.size() == 60);
  for (double v : prop.forecasts) CHECK(std::isfinite(v));
  CHECK(prop.final_norm.source == NormSource::TrainPlusValidation);
  CHECK(prop.final_training_points == 420);
}

TEST_CASE("same configuration and seed give the same result") {
  const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 480, 6);
  const auto a = run_pipeline(s, quick_config(Variant::PROP, 10));
  const auto b = run_pipeline(s, quick_config(Variant::PROP, 10));
  CHECK(a.chosen == b.chosen);
  CHECK(a.forecasts == b.forecasts);
}

TEST_CASE("runs without deseasonalizing a sawtooth") {
  std::vector<double> y(300);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = static_cast<double>(t % 12);
  PipelineConfig c = quick_config(Variant::LSL, 2);
  c.deseasonalize = false;
  const auto r = run_pipeline(Series(y), c);
  CHECK(r.forecasts.size() == 60);
  for (double v : r.forecasts) CHECK(std::isfinite(v));
}

TEST_CASE("beats a constant-mean forecaster on seasonal data") {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = generate_synthetic(SyntheticKind::SeasonalAR, 480, 100 + seed);
    PipelineConfig c = quick_config(Variant::PROP, seed);
    c.lstm.epochs = 20;
    const auto r = run_pipeline(s, c);
    const auto history = s.values().first(420);
    const double mean = std::accumulate(history.begin(), history.end(), 0.0) / 420.0;
    const auto test = s.values().last(60);
    wins += rmse(test, r.forecasts) < rmse(test, std::vector<double>(60, mean));
  }
  CHECK(wins >= 8);
}
