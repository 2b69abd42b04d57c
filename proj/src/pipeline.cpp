#include "lagbo/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>

#include "lagbo/error.hpp"
#include "lagbo/seeding.hpp"

namespace lagbo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Seed stream tags.
constexpr std::uint64_t kStreamBo = 0;
constexpr std::uint64_t kStreamEval = 1;
constexpr std::uint64_t kStreamFinal = 2;

// LAGBO_VERBOSE=1 logs every objective evaluation with its wall time.
bool verbose() {
  static const bool on = [] {
    const char* v = std::getenv("LAGBO_VERBOSE");
    return v != nullptr && *v != '\0' && std::string_view(v) != "0";
  }();
  return on;
}

void log_evaluation(const PipelineConfig& config, std::size_t evaluation, const HyperParams& h, double value,
                    double seconds) {
  static std::mutex mutex;
  std::ostringstream line;
  line << "[lagbo] " << config.station << "/" << to_string(config.variant) << " eval " << evaluation << " m=" << h.m
       << " dr=" << h.dr << " lr=" << h.lr << " hu1=" << h.hu1 << " hu2=" << h.hu2 << " b=" << h.b
       << " objective=" << value << " (" << seconds << " s)\n";
  std::lock_guard lock(mutex);
  std::clog << line.str();
}

ForecastResult run_with_space(const Series& series, const PipelineConfig& config, const SearchSpace& space,
                              int pinned_lag) {
  const auto t0 = std::chrono::steady_clock::now();
  const PreparedSeries prep = prepare_series(series, config.split, config.deseasonalize);

  const std::uint64_t station_tag = fnv1a64(config.station);
  const auto variant_tag = static_cast<std::uint64_t>(config.variant);

  Objective objective = [&](std::span<const double> realized, std::size_t evaluation) {
    const HyperParams h = HyperParams::from_realized(space, realized, pinned_lag);
    const std::uint64_t seed = derive_seed(config.seed, {station_tag, variant_tag, kStreamEval, evaluation});
    if (!verbose()) return objective_eval(h, prep.z_train, prep.z_validation, config.lstm, seed);
    const auto start = std::chrono::steady_clock::now();
    const double value = objective_eval(h, prep.z_train, prep.z_validation, config.lstm, seed);
    log_evaluation(config, evaluation, h, value,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return value;
  };

  BOOptions bo;
  bo.n_initial = config.n_initial;
  bo.n_iterations = config.n_iterations;
  bo.kernel = config.kernel;
  const BOResult opt =
      bo_optimize(objective, space, bo, derive_seed(config.seed, {station_tag, variant_tag, kStreamBo}));
  if (!std::isfinite(opt.best_value))
    throw Error(ErrorCode::PipelineFailed, "every objective evaluation failed for " + config.station);

  ForecastResult result;
  result.station = config.station;
  result.variant = config.variant;
  result.chosen = HyperParams::from_realized(space, opt.best_realized, pinned_lag);
  result.validation_objective = opt.best_value;
  result.trace = opt.trace;
  for (const auto& rec : opt.trace) result.evaluated.push_back(HyperParams::from_realized(space, rec.realized, pinned_lag));
  for (const auto& d : space.dims()) result.searched_dimensions.push_back(d.name);

  // Final model: train+validation normalized on its own range, fresh seeded init.
  result.final_norm = NormStats::from(prep.train_validation, NormSource::TrainPlusValidation);
  const std::vector<double> z_all = normalize(prep.train_validation, result.final_norm);
  result.final_training_points = z_all.size();
  const LSTMConfig final_cfg = lstm_config_for(
      result.chosen, config.lstm, derive_seed(config.seed, {station_tag, variant_tag, kStreamFinal}));
  try {
    const auto data = make_lag_dataset(z_all, static_cast<std::size_t>(result.chosen.m));
    const auto [model, report] = train(final_cfg, data);
    const auto z_hat = predict_recursive(model, z_all, prep.test.size());
    std::vector<double> y_hat = denormalize(z_hat, result.final_norm);
    if (prep.decomposition) y_hat = reseasonalize(y_hat, *prep.decomposition, prep.test_phase);
    for (double v : y_hat)
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "final forecast is not finite");
    result.forecasts = std::move(y_hat);
  } catch (const Error& e) {
    throw Error(ErrorCode::PipelineFailed, "final model for " + config.station + " failed: " + e.what());
  }

  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::PROP: return "PROP";
    case Variant::LSL: return "LSL";
    case Variant::LFH1: return "LFH1";
    case Variant::LFH1p25: return "LFH1p25";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::PROP, Variant::LSL, Variant::LFH1, Variant::LFH1p25})
    if (to_string(v) == name) return v;
  return std::nullopt;
}

std::optional<int> lag_for_variant(Variant variant, int period, int horizon) {
  if (period < 1 || horizon < 1) throw Error(ErrorCode::InvalidArgument, "period and horizon must be positive");
  switch (variant) {
    case Variant::PROP: return std::nullopt;
    case Variant::LSL: return period;
    case Variant::LFH1: return horizon;
    case Variant::LFH1p25: return static_cast<int>(std::lround(1.25 * period));
  }
  return std::nullopt;
}

PreparedSeries prepare_series(const Series& series, const SplitSpec& split_spec, bool deseasonalize) {
  const SplitSeries parts = split(series, split_spec);
  PreparedSeries prep;
  prep.n_train = parts.train.size();
  prep.n_validation = parts.validation.size();
  prep.test = parts.test.vec();

  Series trv = concat(parts.train, parts.validation);
  if (deseasonalize) {
    prep.decomposition = decompose(trv);
    trv = prep.decomposition->deseasonalized;
    prep.test_phase = (prep.n_train + prep.n_validation) % static_cast<std::size_t>(series.period());
  }
  prep.train_validation = trv.vec();

  const std::span<const double> all(prep.train_validation);
  const auto train = all.first(prep.n_train);
  const auto validation = all.subspan(prep.n_train);
  prep.train_norm = NormStats::from(train, NormSource::TrainOnly);
  prep.z_train = normalize(train, prep.train_norm);
  prep.z_validation = normalize(validation, prep.train_norm);
  return prep;
}

LSTMConfig lstm_config_for(const HyperParams& h, const LstmSettings& settings, std::uint64_t seed) {
  LSTMConfig c;
  c.input_window = h.m;
  c.hidden1 = h.hu1;
  c.hidden2 = h.hu2;
  c.dropout = h.dr;
  c.learning_rate = h.lr;
  c.batch_size = h.b;
  c.epochs = settings.epochs;
  c.patience = settings.patience;
  c.single_precision = settings.single_precision;
  c.seed = seed;
  return c;
}

double validation_objective(std::span<const double> forecasts, std::span<const double> z_validation) {
  if (forecasts.size() != z_validation.size())
    throw Error(ErrorCode::LengthMismatch, "forecast and validation lengths differ");
  if (z_validation.empty()) throw Error(ErrorCode::EmptyInput, "empty validation set");
  double s = 0.0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const double e = z_validation[i] - forecasts[i];
    s += e * e;
  }
  return -s / static_cast<double>(forecasts.size());
}

double objective_eval(const HyperParams& candidate, std::span<const double> z_train,
                      std::span<const double> z_validation, const LstmSettings& settings, std::uint64_t seed) {
  try {
    const auto data = make_lag_dataset(z_train, static_cast<std::size_t>(candidate.m));
    const auto [model, report] = train(lstm_config_for(candidate, settings, seed), data);
    const auto forecasts = predict_recursive(model, z_train, z_validation.size());
    const double v = validation_objective(forecasts, z_validation);
    return std::isfinite(v) ? v : kNegInf;
  } catch (const Error&) {
    return kNegInf;
  }
}

double objective_eval(const HyperParams& candidate, const SplitSeries& split, const LstmSettings& settings,
                      std::uint64_t seed) {
  const auto z_train = normalize(split.train.values(), split.norm);
  const auto z_val = normalize(split.validation.values(), split.norm);
  return objective_eval(candidate, z_train, z_val, settings, seed);
}

ForecastResult run_prop(const Series& series, const PipelineConfig& config) {
  if (!config.space.find("m")) throw Error(ErrorCode::InvalidArgument, "PROP needs an 'm' dimension in the search space");
  PipelineConfig c = config;
  c.variant = Variant::PROP;
  return run_with_space(series, c, config.space, 0);
}

ForecastResult run_fixed_lag(const Series& series, const PipelineConfig& config) {
  const auto lag = lag_for_variant(config.variant, series.period(), static_cast<int>(config.split.test_len));
  if (!lag) throw Error(ErrorCode::InvalidArgument, "run_fixed_lag needs a fixed-lag variant");
  return run_with_space(series, config, config.space.without("m"), *lag);
}

ForecastResult run_pipeline(const Series& series, const PipelineConfig& config) {
  return config.variant == Variant::PROP ? run_prop(series, config) : run_fixed_lag(series, config);
}

}  // namespace lagbo
