#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lagbo/adf.hpp"
#include "lagbo/comparison.hpp"
#include "lagbo/metrics.hpp"
#include "lagbo/pipeline.hpp"
#include "lagbo/series.hpp"

namespace lagbo {

// ---- CSV ------------------------------------------------------------------

/// Reads a `month,value` CSV (month as YYYY-MM, strictly consecutive months).
/// Errors: ParseError (with 1-based line number), NonMonotoneError, GapError.
Series ingest_csv(const std::filesystem::path& path);
Series parse_series_csv(std::istream& in, const std::string& source = "<stream>");

/// Writes `month,value`; months default to 2000-01 when the series has no start label.
void write_series_csv(const std::filesystem::path& path, const Series& series);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

// ---- Configuration ----------------------------------------------------------

inline constexpr const char* kSeasonalNaive = "seasonal-naive";
inline constexpr const char* kHoltWinters = "holt-winters";

struct StationSpec {
  std::string name;
  std::filesystem::path path;
};

struct ExperimentConfig {
  std::vector<StationSpec> stations;
  std::vector<std::string> variants;  // PROP, LSL, LFH1, LFH1p25, seasonal-naive, holt-winters
  PipelineConfig pipeline;            // station and variant are filled per run
  std::filesystem::path output_dir = "results";
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::string reference = "PROP";
  double alpha = 0.10;

  /// Relative station paths resolve against `base_dir`. Station files must exist.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  /// Everything that influences results. The worker count and output directory
  /// are left out so they do not change the config hash.
  nlohmann::json to_json() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Worker count after the FORECAST_WORKERS override (at least 1).
std::size_t effective_workers(const ExperimentConfig& config);

// ---- Report -----------------------------------------------------------------

struct StationSummary {
  std::string name;
  std::size_t length = 0;
  std::string start;
  AdfResult adf;
};

struct PairRecord {
  std::string station;
  std::string variant;
  bool ok = false;
  std::string error;
  std::optional<HyperParams> chosen;  // LSTM variants only
  double validation_objective = 0.0;
  std::vector<double> forecasts;
  MetricSet metrics;
  BOTrace trace;
  std::vector<HyperParams> evaluated;
  double seconds = 0.0;
};

struct MetricTest {
  std::string metric;
  std::optional<TwoStepResult> result;
  std::string skipped;  // reason when result is empty
};

struct Report {
  std::string version;
  std::uint64_t seed = 0;
  std::string config_hash;
  nlohmann::json config;
  std::vector<StationSummary> stations;
  std::vector<PairRecord> pairs;  // station-major, variants in config order
  std::vector<MetricTest> tests;

  bool all_failed() const;
  nlohmann::json to_json() const;
};

/// Runs every (station, variant) pair on a bounded worker pool, then computes
/// metrics, ARank and the two-step tests single-threaded. Writes report.json,
/// metrics.csv, timings.csv, forecasts/<station>_<variant>.csv and
/// bo_trace/<station>.csv under config.output_dir.
Report run_experiment(const ExperimentConfig& config);

/// Friedman + Hochberg on an existing long-format metrics CSV
/// (`station,model,<metric>...`), one result per metric column.
std::vector<MetricTest> stats_only(const std::filesystem::path& metrics_csv, const std::string& reference = "PROP",
                                   double alpha = 0.10);
std::vector<MetricTest> stats_only(std::istream& metrics_csv, const std::string& reference = "PROP",
                                   double alpha = 0.10);

nlohmann::json to_json(const TwoStepResult& r);

}  // namespace lagbo
