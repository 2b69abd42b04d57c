#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "lagbo/adf.hpp"
#include "lagbo/baselines.hpp"
#include "lagbo/bayes_opt.hpp"
#include "lagbo/comparison.hpp"
#include "lagbo/error.hpp"
#include "lagbo/experiment.hpp"
#include "lagbo/lstm.hpp"
#include "lagbo/metrics.hpp"
#include "lagbo/pipeline.hpp"
#include "lagbo/synthetic.hpp"

namespace py = pybind11;
using namespace lagbo;

namespace {

// JSON values cross the boundary as Python objects via a text round trip;
// payloads are small (reports and test summaries).
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict hyper_dict(const HyperParams& h) {
  py::dict d;
  d["m"] = h.m;
  d["dr"] = h.dr;
  d["lr"] = h.lr;
  d["hu1"] = h.hu1;
  d["hu2"] = h.hu2;
  d["b"] = h.b;
  return d;
}

py::list trace_list(const BOTrace& trace) {
  py::list out;
  for (const auto& r : trace) {
    py::dict d;
    d["iteration"] = r.iteration;
    d["raw"] = r.raw;
    d["realized"] = r.realized;
    d["value"] = r.value;
    d["best_so_far"] = r.best_so_far;
    d["cached"] = r.cached;
    out.append(d);
  }
  return out;
}

SearchSpace space_from(const std::vector<py::dict>& dims) {
  std::vector<Dimension> out;
  for (const auto& d : dims) {
    Dimension dim;
    dim.name = d["name"].cast<std::string>();
    dim.lower = d["lower"].cast<double>();
    dim.upper = d["upper"].cast<double>();
    if (d.contains("discrete")) dim.discrete = d["discrete"].cast<bool>();
    if (d.contains("log_scale")) dim.log_scale = d["log_scale"].cast<bool>();
    out.push_back(std::move(dim));
  }
  return SearchSpace(std::move(out));
}

Series make_series(const std::vector<double>& values, int period) { return Series(values, period); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lag-aware LSTM forecasting with Gaussian-process Bayesian optimization.";
  m.attr("__version__") = LAGBO_VERSION;

  static py::exception<Error> lagbo_error(m, "LagboError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(lagbo_error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  // Metrics and comparison.
  using Values = std::vector<double>;
  m.def("rmse", [](const Values& a, const Values& p) { return rmse(a, p); }, py::arg("actual"), py::arg("predicted"));
  m.def("mae", [](const Values& a, const Values& p) { return mae(a, p); }, py::arg("actual"), py::arg("predicted"));
  m.def(
      "smape",
      [](const std::vector<double>& a, const std::vector<double>& p, double eps, bool literal_sqrt) {
        return smape_modified(a, p, eps, literal_sqrt ? SmapeForm::LiteralSqrt : SmapeForm::Standard);
      },
      py::arg("actual"), py::arg("predicted"), py::arg("epsilon") = 0.1, py::arg("literal_sqrt") = false);
  m.def("average_ranks", [](const std::vector<double>& v) { return average_ranks(v); }, py::arg("values"));
  m.def(
      "arank", [](const Values& a, const std::vector<Values>& p) { return arank(a, p); }, py::arg("actual"),
      py::arg("predictions"));
  m.def(
      "two_step",
      [](std::vector<std::string> models, std::vector<std::string> datasets, std::vector<std::vector<double>> values,
         const std::string& reference, double alpha) {
        const ComparisonTable table(std::move(models), std::move(datasets), std::move(values));
        return to_python(to_json(hochberg(table, reference, alpha)));
      },
      py::arg("models"), py::arg("datasets"), py::arg("values"), py::arg("reference") = "PROP",
      py::arg("alpha") = 0.10, "Friedman/Iman-Davenport test followed by Hochberg comparisons to `reference`.");
  m.def(
      "stats_only",
      [](const std::string& path, const std::string& reference, double alpha) {
        py::dict out;
        for (const auto& t : stats_only(std::filesystem::path(path), reference, alpha))
          out[py::str(t.metric)] = to_python(to_json(*t.result));
        return out;
      },
      py::arg("metrics_csv"), py::arg("reference") = "PROP", py::arg("alpha") = 0.10);

  // Series utilities.
  m.def(
      "adf_test",
      [](const std::vector<double>& y, std::optional<std::size_t> lag) {
        const auto r = adf_test(y, lag);
        py::dict d;
        d["statistic"] = r.statistic;
        d["p_value"] = r.p_value;
        d["lag"] = r.lag;
        d["p_clamped"] = r.p_clamped;
        return d;
      },
      py::arg("series"), py::arg("lag") = py::none());
  m.def(
      "generate_synthetic",
      [](const std::string& kind, std::size_t length, std::uint64_t seed) {
        const auto k = parse_synthetic_kind(kind);
        if (!k) throw Error(ErrorCode::InvalidArgument, "unknown kind '" + kind + "'");
        return generate_synthetic(*k, length, seed).vec();
      },
      py::arg("kind"), py::arg("length"), py::arg("seed"));
  m.def(
      "seasonal_naive",
      [](const std::vector<double>& y, std::size_t horizon, int period) {
        return seasonal_naive(make_series(y, period), horizon);
      },
      py::arg("history"), py::arg("horizon"), py::arg("period") = 12);
  m.def(
      "holt_winters",
      [](const std::vector<double>& y, std::size_t horizon, int period) {
        const auto fit = holt_winters_fit_forecast(make_series(y, period), horizon);
        py::dict d;
        d["alpha"] = fit.params.alpha;
        d["beta"] = fit.params.beta;
        d["gamma"] = fit.params.gamma;
        d["in_sample_mse"] = fit.in_sample_mse;
        d["forecasts"] = fit.forecasts;
        return d;
      },
      py::arg("history"), py::arg("horizon"), py::arg("period") = 12);

  // Surrogate and optimizer.
  m.def(
      "expected_improvement",
      [](double mean, double stddev, double f_best) { return expected_improvement({mean, stddev * stddev}, f_best); },
      py::arg("mean"), py::arg("stddev"), py::arg("f_best"));
  m.def(
      "bo_optimize",
      [](const std::function<double(std::vector<double>)>& fn, const std::vector<py::dict>& dims,
         std::size_t n_initial, std::size_t n_iterations, std::uint64_t seed) {
        const SearchSpace space = space_from(dims);
        BOOptions opts;
        opts.n_initial = n_initial;
        opts.n_iterations = n_iterations;
        const Objective objective = [&](std::span<const double> x, std::size_t) {
          return fn(std::vector<double>(x.begin(), x.end()));
        };
        const auto r = bo_optimize(objective, space, opts, seed);
        py::dict d;
        d["best_point"] = r.best_realized;
        d["best_value"] = r.best_value;
        d["trace"] = trace_list(r.trace);
        return d;
      },
      py::arg("objective"), py::arg("dimensions"), py::arg("n_initial") = 10, py::arg("n_iterations") = 40,
      py::arg("seed") = 0,
      "Maximize `objective` over a box given as [{'name', 'lower', 'upper', 'discrete', 'log_scale'}].");

  // LSTM.
  m.def(
      "train_lstm",
      [](const std::vector<double>& z, int m_lag, int hidden1, int hidden2, double dropout, double lr, int batch,
         int epochs, std::uint64_t seed) {
        LSTMConfig c;
        c.input_window = m_lag;
        c.hidden1 = hidden1;
        c.hidden2 = hidden2;
        c.dropout = dropout;
        c.learning_rate = lr;
        c.batch_size = batch;
        c.epochs = epochs;
        c.seed = seed;
        const auto [model, report] = train(c, make_lag_dataset(z, static_cast<std::size_t>(m_lag)));
        py::dict d;
        d["model"] = model_to_json(model);
        d["epoch_losses"] = report.epoch_losses;
        d["final_loss"] = report.final_loss;
        d["early_stopped"] = report.early_stopped;
        return d;
      },
      py::arg("series"), py::arg("m"), py::arg("hidden1") = 32, py::arg("hidden2") = 32, py::arg("dropout") = 0.0,
      py::arg("learning_rate") = 1e-3, py::arg("batch_size") = 32, py::arg("epochs") = 150, py::arg("seed") = 0);
  m.def(
      "predict_recursive",
      [](const std::string& model_json, const std::vector<double>& history, std::size_t horizon) {
        return predict_recursive(model_from_json(model_json), history, horizon);
      },
      py::arg("model"), py::arg("history"), py::arg("horizon"));

  // Full pipeline.
  m.def(
      "run_pipeline",
      [](const std::vector<double>& y, const std::string& variant, int period, std::size_t validation,
         std::size_t test, std::size_t n_initial, std::size_t n_iterations, int epochs, std::uint64_t seed,
         bool deseasonalize) {
        const auto v = parse_variant(variant);
        if (!v) throw Error(ErrorCode::InvalidArgument, "unknown variant '" + variant + "'");
        PipelineConfig c;
        c.variant = *v;
        c.split = {validation, test};
        c.n_initial = n_initial;
        c.n_iterations = n_iterations;
        c.lstm.epochs = epochs;
        c.seed = seed;
        c.deseasonalize = deseasonalize;
        const auto r = run_pipeline(make_series(y, period), c);
        py::dict d;
        d["variant"] = std::string(to_string(r.variant));
        d["chosen"] = hyper_dict(r.chosen);
        d["forecasts"] = r.forecasts;
        d["validation_objective"] = r.validation_objective;
        d["trace"] = trace_list(r.trace);
        return d;
      },
      py::arg("series"), py::arg("variant") = "PROP", py::arg("period") = 12, py::arg("validation") = 60,
      py::arg("test") = 60, py::arg("n_initial") = 10, py::arg("n_iterations") = 40, py::arg("epochs") = 150,
      py::arg("seed") = 0, py::arg("deseasonalize") = true);

  m.def(
      "run_experiment",
      [](const std::string& config_path) {
        py::gil_scoped_release release;
        const auto report = run_experiment(load_experiment_config(config_path));
        py::gil_scoped_acquire acquire;
        return to_python(report.to_json());
      },
      py::arg("config"));
}
