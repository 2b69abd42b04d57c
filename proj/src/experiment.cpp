#include "lagbo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "lagbo/baselines.hpp"
#include "lagbo/error.hpp"
#include "lagbo/seeding.hpp"

namespace lagbo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mutex log_mutex;

void log_line(const std::string& msg) {
  std::lock_guard lock(log_mutex);
  std::clog << "[lagbo] " << msg << '\n';
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

/// Non-finite doubles are not representable in JSON; they become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

bool is_lstm_variant(const std::string& v) { return parse_variant(v).has_value(); }

std::string kernel_name(KernelKind k) { return k == KernelKind::Matern52 ? "matern52" : "squared-exponential"; }

KernelKind parse_kernel(const std::string& s) {
  if (s == "matern52") return KernelKind::Matern52;
  if (s == "squared-exponential" || s == "se") return KernelKind::SquaredExponential;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + s + "'");
}

json hyper_to_json(const HyperParams& h) {
  return json{{"m", h.m}, {"dr", h.dr}, {"lr", h.lr}, {"hu1", h.hu1}, {"hu2", h.hu2}, {"b", h.b}};
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

PairRecord run_pair(const ExperimentConfig& config, const std::string& station, const Series& series,
                    const std::string& variant) {
  PairRecord rec;
  rec.station = station;
  rec.variant = variant;
  try {
    if (const auto v = parse_variant(variant)) {
      PipelineConfig pc = config.pipeline;
      pc.station = station;
      pc.variant = *v;
      pc.seed = config.seed;
      ForecastResult fr = run_pipeline(series, pc);
      rec.chosen = fr.chosen;
      rec.validation_objective = fr.validation_objective;
      rec.forecasts = std::move(fr.forecasts);
      rec.trace = std::move(fr.trace);
      rec.evaluated = std::move(fr.evaluated);
      rec.seconds = fr.seconds;
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      const SplitSeries parts = split(series, config.pipeline.split);
      const Series history = concat(parts.train, parts.validation);
      const std::size_t horizon = parts.test.size();
      if (variant == kSeasonalNaive)
        rec.forecasts = seasonal_naive(history, horizon);
      else if (variant == kHoltWinters)
        rec.forecasts = holt_winters_fit_forecast(history, horizon).forecasts;
      else
        throw Error(ErrorCode::InvalidArgument, "unknown variant '" + variant + "'");
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
    rec.forecasts.clear();
  }
  return rec;
}

// (metric name, N x k values) in presentation order.
using MetricColumns = std::vector<std::pair<std::string, std::vector<std::vector<double>>>>;

std::vector<MetricTest> two_step_tests(const std::vector<std::string>& datasets, const std::vector<std::string>& models,
                                       const MetricColumns& by_metric,
                                       const std::string& reference, double alpha, bool strict) {
  std::vector<MetricTest> out;
  for (const auto& [metric, values] : by_metric) {
    MetricTest t;
    t.metric = metric;
    if (!strict) {
      if (models.size() < 2)
        t.skipped = "only " + std::to_string(models.size()) + " model(s) available (k = " +
                    std::to_string(models.size()) + ")";
      else if (datasets.size() < 2)
        t.skipped = "only one dataset (N = 1)";
      else if (std::find(models.begin(), models.end(), reference) == models.end())
        t.skipped = "reference model '" + reference + "' has no complete results";
    }
    if (t.skipped.empty()) t.result = hochberg(ComparisonTable(models, datasets, values), reference, alpha);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

// ---- CSV ------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Series parse_series_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<YearMonth> start;
  std::optional<YearMonth> previous;
  std::vector<double> values;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() != 2 || fields[0] != "month" || fields[1] != "value")
        parse_error(source, line_no, "expected header 'month,value'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 2) parse_error(source, line_no, "expected 2 fields, found " + std::to_string(fields.size()));
    const auto month = YearMonth::parse(fields[0]);
    if (!month) parse_error(source, line_no, "malformed month '" + fields[0] + "'");
    const auto value = parse_number(fields[1]);
    if (!value) parse_error(source, line_no, "non-numeric value '" + fields[1] + "'");

    if (previous) {
      const int step = month->index() - previous->index();
      if (step <= 0)
        throw Error(ErrorCode::NonMonotoneError, source + ":" + std::to_string(line_no) + ": month " + month->str() +
                                                     " does not follow " + previous->str());
      if (step > 1)
        throw Error(ErrorCode::GapError, source + ":" + std::to_string(line_no) + ": gap between " +
                                             previous->str() + " and " + month->str() + " (missing " +
                                             previous->plus_months(1).str() + ")");
    } else {
      start = month;
    }
    previous = month;
    values.push_back(*value);
  }
  if (!header_seen) parse_error(source, line_no, "missing header 'month,value'");
  if (values.empty()) throw Error(ErrorCode::EmptyInput, source + ": no data rows");
  return Series(std::move(values), 12, start);
}

Series ingest_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_series_csv(in, path.string());
}

void write_series_csv(const fs::path& path, const Series& series) {
  auto out = open_out(path);
  const YearMonth start = series.start().value_or(YearMonth{2000, 1});
  out << "month,value\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << start.plus_months(static_cast<int>(i)).str() << ',' << format_double(series[i]) << '\n';
}

// ---- Configuration ----------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  try {
    const auto& st = j.at("stations");
    auto add_station = [&](const std::string& name, const std::string& p) {
      fs::path path(p);
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      if (!fs::exists(path)) throw Error(ErrorCode::IoError, "station file not found: " + path.string());
      c.stations.push_back({name, path});
    };
    if (st.is_object()) {
      for (const auto& [name, p] : st.items()) add_station(name, p.get<std::string>());
    } else {
      for (const auto& s : st) add_station(s.at("name").get<std::string>(), s.at("path").get<std::string>());
    }
    if (c.stations.empty()) throw Error(ErrorCode::InvalidArgument, "no stations configured");

    c.variants = j.at("variants").get<std::vector<std::string>>();
    if (c.variants.empty()) throw Error(ErrorCode::InvalidArgument, "variant list is empty");
    for (const auto& v : c.variants)
      if (!is_lstm_variant(v) && v != kSeasonalNaive && v != kHoltWinters)
        throw Error(ErrorCode::InvalidArgument, "unknown variant '" + v + "'");

    c.output_dir = j.value("output_dir", std::string("results"));
    if (c.output_dir.is_relative() && !base_dir.empty()) c.output_dir = base_dir / c.output_dir;
    c.workers = j.value("workers", std::size_t{1});
    c.seed = j.value("seed", std::uint64_t{0});
    c.reference = j.value("reference", std::string("PROP"));
    c.alpha = j.value("alpha", 0.10);

    auto& p = c.pipeline;
    if (j.contains("split")) {
      p.split.validation_len = j["split"].value("validation", p.split.validation_len);
      p.split.test_len = j["split"].value("test", p.split.test_len);
    }
    if (j.contains("bo")) {
      const auto& b = j["bo"];
      p.n_initial = b.value("n_initial", p.n_initial);
      p.n_iterations = b.value("n_iterations", p.n_iterations);
      if (b.contains("kernel")) p.kernel = parse_kernel(b["kernel"].get<std::string>());
    }
    if (j.contains("lstm")) {
      p.lstm.epochs = j["lstm"].value("epochs", p.lstm.epochs);
      p.lstm.patience = j["lstm"].value("patience", p.lstm.patience);
      const auto precision = j["lstm"].value("precision", std::string("mixed"));
      if (precision != "mixed" && precision != "double")
        throw Error(ErrorCode::InvalidArgument, "lstm.precision must be 'mixed' or 'double'");
      p.lstm.single_precision = precision == "mixed";
    }
    p.deseasonalize = j.value("deseasonalize", p.deseasonalize);
    if (j.contains("search_space")) {
      std::vector<Dimension> dims = p.space.dims();
      for (const auto& [name, bounds] : j["search_space"].items()) {
        auto it = std::find_if(dims.begin(), dims.end(), [&](const Dimension& d) { return d.name == name; });
        if (it == dims.end()) throw Error(ErrorCode::InvalidArgument, "unknown search dimension '" + name + "'");
        it->lower = bounds.at(0).get<double>();
        it->upper = bounds.at(1).get<double>();
      }
      p.space = SearchSpace(std::move(dims));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid experiment config: ") + e.what());
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json stations_j = json::array();
  for (const auto& s : stations) stations_j.push_back({{"name", s.name}, {"path", s.path.filename().string()}});
  json space_j = json::object();
  for (const auto& d : pipeline.space.dims()) space_j[d.name] = {d.lower, d.upper};
  return json{
      {"stations", stations_j},
      {"variants", variants},
      {"seed", seed},
      {"reference", reference},
      {"alpha", alpha},
      {"split", {{"validation", pipeline.split.validation_len}, {"test", pipeline.split.test_len}}},
      {"bo",
       {{"n_initial", pipeline.n_initial},
        {"n_iterations", pipeline.n_iterations},
        {"kernel", kernel_name(pipeline.kernel)}}},
      {"lstm",
       {{"epochs", pipeline.lstm.epochs},
        {"patience", pipeline.lstm.patience},
        {"precision", pipeline.lstm.single_precision ? "mixed" : "double"}}},
      {"deseasonalize", pipeline.deseasonalize},
      {"search_space", space_j},
  };
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return ExperimentConfig::from_json(j, path.parent_path());
}

std::size_t effective_workers(const ExperimentConfig& config) {
  std::size_t n = config.workers;
  if (const char* env = std::getenv("FORECAST_WORKERS")) {
    std::size_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size())
      n = v;
    else
      log_line("ignoring malformed FORECAST_WORKERS='" + std::string(s) + "'");
  }
  return std::max<std::size_t>(n, 1);
}

// ---- Report -----------------------------------------------------------------

json to_json(const TwoStepResult& r) {
  json ranks = json::object();
  for (std::size_t i = 0; i < r.models.size(); ++i) ranks[r.models[i]] = r.average_ranks[i];
  json comps = json::array();
  for (const auto& c : r.comparisons)
    comps.push_back({{"model", c.model},
                     {"z", num(c.z)},
                     {"p_value", num(c.p_value)},
                     {"position", c.position},
                     {"threshold", num(c.threshold)},
                     {"reject", c.reject}});
  const auto& f = r.friedman;
  return json{{"reference", r.reference},
              {"alpha", r.alpha},
              {"friedman",
               {{"chi2", num(f.chi2)},
                {"chi2_p", num(f.chi2_p)},
                {"ff", num(f.ff)},
                {"p_value", num(f.p_value)},
                {"df1", f.df1},
                {"df2", f.df2},
                {"degenerate", f.degenerate}}},
              {"average_ranks", ranks},
              {"comparisons", comps}};
}

bool Report::all_failed() const {
  return std::none_of(pairs.begin(), pairs.end(), [](const PairRecord& p) { return p.ok; });
}

json Report::to_json() const {
  json stations_j = json::array();
  for (const auto& s : stations)
    stations_j.push_back({{"name", s.name},
                          {"length", s.length},
                          {"start", s.start},
                          {"adf",
                           {{"statistic", num(s.adf.statistic)},
                            {"p_value", num(s.adf.p_value)},
                            {"lag", s.adf.lag},
                            {"p_clamped", s.adf.p_clamped}}}});

  json results = json::array();
  json lags = json::object();
  for (const auto& p : pairs) {
    json r{{"station", p.station}, {"variant", p.variant}, {"status", p.ok ? "ok" : "error"}};
    if (!p.ok) {
      r["error"] = p.error;
    } else {
      r["metrics"] = {{"rmse", num(p.metrics.rmse)},
                      {"mae", num(p.metrics.mae)},
                      {"smape", num(p.metrics.smape)},
                      {"arank", num(p.metrics.arank)}};
      if (p.chosen) {
        r["hyperparameters"] = hyper_to_json(*p.chosen);
        r["validation_objective"] = num(p.validation_objective);
        r["evaluations"] = p.trace.size();
        lags[p.variant][p.station] = p.chosen->m;
      }
    }
    results.push_back(std::move(r));
  }

  json tests_j = json::object();
  for (const auto& t : tests) tests_j[t.metric] = t.result ? lagbo::to_json(*t.result) : json{{"skipped", t.skipped}};

  return json{{"provenance", {{"version", version}, {"seed", seed}, {"config_hash", config_hash}, {"config", config}}},
              {"stations", stations_j},
              {"results", results},
              {"selected_lags", lags},
              {"tests", tests_j}};
}

Report run_experiment(const ExperimentConfig& config) {
  Report report;
  report.version = LAGBO_VERSION;
  report.seed = config.seed;
  report.config = config.to_json();
  report.config_hash = hex64(fnv1a64(report.config.dump()));

  std::vector<Series> series;
  for (const auto& st : config.stations) {
    series.push_back(ingest_csv(st.path));
    StationSummary sum;
    sum.name = st.name;
    sum.length = series.back().size();
    sum.start = series.back().start() ? series.back().start()->str() : "";
    try {
      sum.adf = adf_test(series.back().values());
      log_line("ADF " + st.name + ": statistic " + format_double(sum.adf.statistic) + ", p " +
               (sum.adf.p_clamped ? (sum.adf.p_value < 0.5 ? "<= " : ">= ") : "") + format_double(sum.adf.p_value) +
               ", lag " + std::to_string(sum.adf.lag));
    } catch (const Error& e) {
      sum.adf.p_value = std::numeric_limits<double>::quiet_NaN();
      log_line("ADF " + st.name + " skipped: " + e.what());
    }
    report.stations.push_back(std::move(sum));
  }

  const std::size_t n_variants = config.variants.size();
  const std::size_t n_pairs = config.stations.size() * n_variants;
  report.pairs.resize(n_pairs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_pairs; i = next++) {
      const std::size_t s = i / n_variants;
      const auto& name = config.stations[s].name;
      const auto& variant = config.variants[i % n_variants];
      report.pairs[i] = run_pair(config, name, series[s], variant);
      const auto& rec = report.pairs[i];
      log_line(name + "/" + variant + (rec.ok ? " done in " + format_double(std::round(rec.seconds * 100) / 100) + " s"
                                              : " failed: " + rec.error));
    }
  };
  const std::size_t workers = std::min(effective_workers(config), n_pairs);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Metrics on the original scale, ARank among the successful models of each station.
  for (std::size_t s = 0; s < config.stations.size(); ++s) {
    const auto first_ok = std::find_if(report.pairs.begin() + static_cast<std::ptrdiff_t>(s * n_variants),
                                       report.pairs.begin() + static_cast<std::ptrdiff_t>((s + 1) * n_variants),
                                       [](const PairRecord& r) { return r.ok; });
    if (first_ok == report.pairs.begin() + static_cast<std::ptrdiff_t>((s + 1) * n_variants)) continue;
    const SplitSeries parts = split(series[s], config.pipeline.split);
    const auto actual = parts.test.values();
    std::vector<std::size_t> ok;
    std::vector<std::vector<double>> preds;
    for (std::size_t v = 0; v < n_variants; ++v) {
      auto& rec = report.pairs[s * n_variants + v];
      if (!rec.ok) continue;
      rec.metrics.rmse = rmse(actual, rec.forecasts);
      rec.metrics.mae = mae(actual, rec.forecasts);
      rec.metrics.smape = smape_modified(actual, rec.forecasts);
      ok.push_back(s * n_variants + v);
      preds.push_back(rec.forecasts);
    }
    if (ok.size() == 1) {
      report.pairs[ok[0]].metrics.arank = 1.0;
    } else {
      const auto ar = arank(actual, preds);
      for (std::size_t i = 0; i < ok.size(); ++i) report.pairs[ok[i]].metrics.arank = ar[i];
    }
  }

  // Rank matrices over models that succeeded on every station.
  std::vector<std::string> models;
  for (std::size_t v = 0; v < n_variants; ++v) {
    bool all_ok = true;
    for (std::size_t s = 0; s < config.stations.size(); ++s) all_ok = all_ok && report.pairs[s * n_variants + v].ok;
    if (all_ok) models.push_back(config.variants[v]);
  }
  std::vector<std::string> datasets;
  for (const auto& st : config.stations) datasets.push_back(st.name);
  MetricColumns by_metric{{"rmse", {}}, {"mae", {}}, {"smape", {}}, {"arank", {}}};
  for (std::size_t s = 0; s < datasets.size(); ++s) {
    std::vector<double> row[4];
    for (std::size_t v = 0; v < n_variants; ++v) {
      const auto& rec = report.pairs[s * n_variants + v];
      if (std::find(models.begin(), models.end(), rec.variant) == models.end()) continue;
      row[0].push_back(rec.metrics.rmse);
      row[1].push_back(rec.metrics.mae);
      row[2].push_back(rec.metrics.smape);
      row[3].push_back(rec.metrics.arank);
    }
    for (std::size_t m = 0; m < 4; ++m) by_metric[m].second.push_back(std::move(row[m]));
  }
  report.tests = two_step_tests(datasets, models, by_metric, config.reference, config.alpha, false);
  for (const auto& t : report.tests)
    if (!t.result) log_line("two-step test on " + t.metric + " skipped: " + t.skipped);

  // Artifacts.
  const fs::path out = config.output_dir;
  fs::create_directories(out / "forecasts");
  fs::create_directories(out / "bo_trace");
  open_out(out / "report.json") << report.to_json().dump(2) << '\n';

  auto metrics_csv = open_out(out / "metrics.csv");
  auto timings_csv = open_out(out / "timings.csv");
  metrics_csv << "station,model,rmse,mae,smape,arank\n";
  timings_csv << "station,variant,seconds\n";
  for (const auto& p : report.pairs) {
    timings_csv << p.station << ',' << p.variant << ',' << format_double(p.seconds) << '\n';
    if (!p.ok) continue;
    metrics_csv << p.station << ',' << p.variant << ',' << format_double(p.metrics.rmse) << ','
                << format_double(p.metrics.mae) << ',' << format_double(p.metrics.smape) << ','
                << format_double(p.metrics.arank) << '\n';
  }

  for (std::size_t s = 0; s < config.stations.size(); ++s) {
    const auto& name = config.stations[s].name;
    std::optional<SplitSeries> parts;  // only successful pairs need the actual test values
    auto trace_csv = open_out(out / "bo_trace" / (name + ".csv"));
    trace_csv << "variant,iteration,cached,value,best_so_far,m,dr,lr,hu1,hu2,b\n";
    for (std::size_t v = 0; v < n_variants; ++v) {
      const auto& p = report.pairs[s * n_variants + v];
      if (!p.ok) continue;
      if (!parts) parts = split(series[s], config.pipeline.split);
      const YearMonth test_start = parts->test.start().value_or(YearMonth{2000, 1});
      auto fc = open_out(out / "forecasts" / (name + "_" + p.variant + ".csv"));
      fc << "month,actual,forecast\n";
      for (std::size_t h = 0; h < p.forecasts.size(); ++h)
        fc << test_start.plus_months(static_cast<int>(h)).str() << ',' << format_double(parts->test[h]) << ','
           << format_double(p.forecasts[h]) << '\n';
      for (std::size_t i = 0; i < p.trace.size(); ++i) {
        const auto& t = p.trace[i];
        const auto& h = p.evaluated[i];
        trace_csv << p.variant << ',' << t.iteration << ',' << (t.cached ? 1 : 0) << ',' << format_double(t.value) << ','
                  << format_double(t.best_so_far) << ',' << h.m << ',' << format_double(h.dr) << ','
                  << format_double(h.lr) << ',' << h.hu1 << ',' << h.hu2 << ',' << h.b << '\n';
      }
    }
  }
  return report;
}

std::vector<MetricTest> stats_only(std::istream& in, const std::string& reference, double alpha) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  // (dataset, model) -> metric values in header order
  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (header.empty()) {
      if (fields.size() < 3) parse_error("metrics", line_no, "expected 'station,model,<metric>...' header");
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size())
      parse_error("metrics", line_no, "expected " + std::to_string(header.size()) + " fields");
    std::vector<double> vals;
    for (std::size_t c = 2; c < fields.size(); ++c) {
      const auto v = parse_number(fields[c]);
      if (!v) parse_error("metrics", line_no, "non-numeric value '" + fields[c] + "'");
      vals.push_back(*v);
    }
    if (std::find(datasets.begin(), datasets.end(), fields[0]) == datasets.end()) datasets.push_back(fields[0]);
    if (std::find(models.begin(), models.end(), fields[1]) == models.end()) models.push_back(fields[1]);
    if (!cells.emplace(std::pair{fields[0], fields[1]}, std::move(vals)).second)
      parse_error("metrics", line_no, "duplicate row for " + fields[0] + "/" + fields[1]);
  }
  if (header.empty()) throw Error(ErrorCode::ParseError, "metrics: empty file");

  MetricColumns by_metric;
  for (std::size_t c = 2; c < header.size(); ++c) {
    auto& rows = by_metric.emplace_back(header[c], std::vector<std::vector<double>>{}).second;
    for (const auto& d : datasets) {
      std::vector<double> row;
      for (const auto& m : models) {
        const auto it = cells.find({d, m});
        if (it == cells.end()) throw Error(ErrorCode::ParseError, "metrics: missing row for " + d + "/" + m);
        row.push_back(it->second[c - 2]);
      }
      rows.push_back(std::move(row));
    }
  }
  return two_step_tests(datasets, models, by_metric, reference, alpha, true);
}

std::vector<MetricTest> stats_only(const fs::path& metrics_csv, const std::string& reference, double alpha) {
  std::ifstream in(metrics_csv, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + metrics_csv.string());
  return stats_only(in, reference, alpha);
}

}  // namespace lagbo
