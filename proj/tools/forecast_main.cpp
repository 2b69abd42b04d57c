#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lagbo/adf.hpp"
#include "lagbo/error.hpp"
#include "lagbo/experiment.hpp"
#include "lagbo/synthetic.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const auto config = lagbo::load_experiment_config(config_path);
  const auto report = lagbo::run_experiment(config);
  std::size_t failed = 0;
  for (const auto& p : report.pairs) failed += p.ok ? 0 : 1;
  std::cout << "wrote " << config.output_dir.string() << " (" << report.pairs.size() - failed << " ok, " << failed
            << " failed)\n";
  return report.all_failed() ? 1 : 0;
}

int cmd_stats(const std::string& metrics, const std::string& reference, double alpha) {
  const auto tests = lagbo::stats_only(std::filesystem::path(metrics), reference, alpha);
  nlohmann::json out = nlohmann::json::object();
  for (const auto& t : tests) out[t.metric] = lagbo::to_json(*t.result);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_synth(const std::string& kind_name, std::size_t length, std::uint64_t seed, const std::string& out) {
  const auto kind = lagbo::parse_synthetic_kind(kind_name);
  if (!kind) throw lagbo::Error(lagbo::ErrorCode::InvalidArgument, "unknown kind '" + kind_name + "'");
  lagbo::write_series_csv(out, lagbo::generate_synthetic(*kind, length, seed));
  return 0;
}

int cmd_adf(const std::string& input, int lag) {
  const auto series = lagbo::ingest_csv(input);
  const auto r = lag >= 0 ? lagbo::adf_test(series.values(), static_cast<std::size_t>(lag))
                          : lagbo::adf_test(series.values());
  nlohmann::json j{{"statistic", r.statistic}, {"p_value", r.p_value}, {"lag", r.lag}, {"p_clamped", r.p_clamped},
                   {"length", series.size()}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lag-aware LSTM forecasting with Bayesian optimization"};
  app.set_version_flag("--version", std::string(LAGBO_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("--config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);

  std::string metrics;
  std::string reference = "PROP";
  double alpha = 0.10;
  auto* stats = app.add_subcommand("stats", "Friedman and Hochberg tests on a metrics CSV");
  stats->add_option("--metrics", metrics, "Long-format CSV: station,model,<metric>...")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--reference", reference, "Reference model")->capture_default_str();
  stats->add_option("--alpha", alpha, "Significance level")->capture_default_str()->check(CLI::Range(0.0, 1.0));

  std::string kind = "seasonal-ar";
  std::size_t length = 480;
  std::uint64_t seed = 0;
  std::string out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic monthly series");
  synth->add_option("--kind", kind, "seasonal-ar, sine or random-walk")
      ->capture_default_str()
      ->check(CLI::IsMember({"seasonal-ar", "sine", "random-walk"}));
  synth->add_option("--length", length, "Number of months")->capture_default_str();
  synth->add_option("--seed", seed, "Seed")->capture_default_str();
  synth->add_option("--out", out, "Output CSV")->required();

  std::string input;
  int lag = -1;
  auto* adf = app.add_subcommand("adf", "Augmented Dickey-Fuller test on a series CSV");
  adf->add_option("--input", input, "Series CSV")->required()->check(CLI::ExistingFile);
  adf->add_option("--lag", lag, "Augmentation lag (default trunc((T-1)^(1/3)))");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path);
    if (*stats) return cmd_stats(metrics, reference, alpha);
    if (*synth) return cmd_synth(kind, length, seed, out);
    if (*adf) return cmd_adf(input, lag);
  } catch (const lagbo::Error& e) {
    std::cerr << "error [" << lagbo::to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
