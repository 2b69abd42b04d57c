#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lagbo/bayes_opt.hpp"
#include "lagbo/lstm.hpp"
#include "lagbo/series.hpp"

namespace lagbo {

/// PROP searches the lag with BO; the others pin it a priori:
/// LSL = period, LFH1 = horizon, LFH1p25 = round(1.25 * period).
enum class Variant { PROP, LSL, LFH1, LFH1p25 };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Pinned lag for a fixed-lag variant; nullopt for PROP.
std::optional<int> lag_for_variant(Variant variant, int period, int horizon);

struct LstmSettings {
  int epochs = 150;
  int patience = 20;
  bool single_precision = true;  // see LSTMConfig::single_precision
};

struct PipelineConfig {
  SplitSpec split;
  SearchSpace space = SearchSpace::lstm_default();
  std::size_t n_initial = 10;
  std::size_t n_iterations = 40;
  LstmSettings lstm;
  std::uint64_t seed = 0;
  Variant variant = Variant::PROP;
  bool deseasonalize = true;
  KernelKind kernel = KernelKind::Matern52;
  std::string station = "series";
};

/// Series after deseasonalizing train+validation and normalizing on train.
struct PreparedSeries {
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::vector<double> train_validation;  // deseasonalized when enabled, original scale
  std::vector<double> z_train;
  std::vector<double> z_validation;
  NormStats train_norm;
  std::optional<Decomposition> decomposition;
  std::size_t test_phase = 0;  // seasonal phase of the first test point
  std::vector<double> test;    // untouched test observations
};

PreparedSeries prepare_series(const Series& series, const SplitSpec& split, bool deseasonalize);

LSTMConfig lstm_config_for(const HyperParams& h, const LstmSettings& settings, std::uint64_t seed);

/// -MSE between recursive validation forecasts and normalized validation values.
double validation_objective(std::span<const double> forecasts, std::span<const double> z_validation);

/// Trains on lag windows of z_train and scores |V| recursive forecasts.
/// Training failures map to -infinity.
double objective_eval(const HyperParams& candidate, std::span<const double> z_train,
                      std::span<const double> z_validation, const LstmSettings& settings, std::uint64_t seed);

/// Convenience overload normalizing a SplitSeries with its train statistics.
double objective_eval(const HyperParams& candidate, const SplitSeries& split, const LstmSettings& settings,
                      std::uint64_t seed);

struct ForecastResult {
  std::string station;
  Variant variant = Variant::PROP;
  HyperParams chosen;
  std::vector<double> forecasts;  // original scale, length |Te|
  double validation_objective = 0.0;
  BOTrace trace;
  std::vector<HyperParams> evaluated;  // parallel to trace
  std::vector<std::string> searched_dimensions;
  NormStats final_norm;              // TrainPlusValidation
  std::size_t final_training_points = 0;  // observations behind the final model
  double seconds = 0.0;
};

/// Full method: deseasonalize, split, normalize, BO over (m, H1), retrain on
/// train+validation, forecast the test horizon recursively, invert transforms.
ForecastResult run_prop(const Series& series, const PipelineConfig& config);

/// Same procedure with the lag pinned by the variant and BO over H1 only.
ForecastResult run_fixed_lag(const Series& series, const PipelineConfig& config);

/// Dispatches on config.variant.
ForecastResult run_pipeline(const Series& series, const PipelineConfig& config);

}  // namespace lagbo
