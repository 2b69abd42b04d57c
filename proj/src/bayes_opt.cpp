#include "lagbo/bayes_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <type_traits>

#include "lagbo/error.hpp"
#include "lagbo/special_functions.hpp"

namespace lagbo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double ei_at(const GPState& state, double f_best, const Eigen::VectorXd& u) {
  return expected_improvement(state.posterior(u), f_best);
}

}  // namespace

SearchSpace::SearchSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
  for (const auto& d : dims_) {
    if (!(d.lower < d.upper)) throw Error(ErrorCode::InvalidArgument, "dimension " + d.name + ": lower >= upper");
    if (d.discrete && (d.lower != std::floor(d.lower) || d.upper != std::floor(d.upper)))
      throw Error(ErrorCode::InvalidArgument, "dimension " + d.name + ": discrete bounds must be integers");
    if (d.log_scale && !(d.lower > 0.0))
      throw Error(ErrorCode::InvalidArgument, "dimension " + d.name + ": log-scaled bounds must be positive");
  }
}

SearchSpace SearchSpace::lstm_default() {
  return SearchSpace({
      {"m", 2, 60, true, false},
      {"dr", 0.0, 0.5, false, false},
      {"lr", 1e-4, 1e-1, false, true},
      {"hu1", 4, 128, true, false},
      {"hu2", 4, 128, true, false},
      {"b", 8, 128, true, false},
  });
}

std::optional<std::size_t> SearchSpace::find(std::string_view name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (dims_[i].name == name) return i;
  return std::nullopt;
}

SearchSpace SearchSpace::without(std::string_view name) const {
  std::vector<Dimension> kept;
  for (const auto& d : dims_)
    if (d.name != name) kept.push_back(d);
  return SearchSpace(std::move(kept));
}

double SearchSpace::raw_lower(std::size_t i) const {
  return dims_[i].log_scale ? std::log(dims_[i].lower) : dims_[i].lower;
}

double SearchSpace::raw_upper(std::size_t i) const {
  return dims_[i].log_scale ? std::log(dims_[i].upper) : dims_[i].upper;
}

std::vector<double> SearchSpace::to_unit(std::span<const double> raw) const {
  if (raw.size() != size()) throw Error(ErrorCode::DimensionMismatch, "raw point dimension mismatch");
  std::vector<double> u(size());
  for (std::size_t i = 0; i < size(); ++i) u[i] = (raw[i] - raw_lower(i)) / (raw_upper(i) - raw_lower(i));
  return u;
}

std::vector<double> SearchSpace::from_unit(std::span<const double> unit) const {
  if (unit.size() != size()) throw Error(ErrorCode::DimensionMismatch, "unit point dimension mismatch");
  std::vector<double> raw(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const double u = std::clamp(unit[i], 0.0, 1.0);
    raw[i] = raw_lower(i) + u * (raw_upper(i) - raw_lower(i));
  }
  return raw;
}

std::vector<double> SearchSpace::to_raw(std::span<const double> realized) const {
  if (realized.size() != size()) throw Error(ErrorCode::DimensionMismatch, "realized point dimension mismatch");
  std::vector<double> raw(size());
  for (std::size_t i = 0; i < size(); ++i) raw[i] = dims_[i].log_scale ? std::log(realized[i]) : realized[i];
  return raw;
}

std::vector<double> g_map(std::span<const double> raw, const SearchSpace& space) {
  if (raw.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "raw point dimension mismatch");
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double lo = space.raw_lower(i);
    const double hi = space.raw_upper(i);
    const double tol = 1e-9 * (hi - lo);
    if (!(raw[i] >= lo - tol && raw[i] <= hi + tol))
      throw Error(ErrorCode::OutOfBounds, "coordinate " + space[i].name + " outside its bounds");
    double v = std::clamp(raw[i], lo, hi);
    if (space[i].log_scale) v = std::clamp(std::exp(v), space[i].lower, space[i].upper);
    if (space[i].discrete) v = std::floor(v + 0.5);
    out[i] = v;
  }
  return out;
}

HyperParams HyperParams::from_realized(const SearchSpace& space, std::span<const double> realized,
                                       int pinned_lag) {
  if (realized.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "realized point dimension mismatch");
  HyperParams h;
  h.m = pinned_lag;
  auto get = [&](std::string_view name, auto& field) {
    if (auto i = space.find(name)) {
      using T = std::remove_reference_t<decltype(field)>;
      if constexpr (std::is_integral_v<T>) {
        field = static_cast<T>(std::llround(realized[*i]));
      } else {
        field = realized[*i];
      }
    }
  };
  get("m", h.m);
  get("dr", h.dr);
  get("lr", h.lr);
  get("hu1", h.hu1);
  get("hu2", h.hu2);
  get("b", h.b);
  return h;
}

double expected_improvement(const Posterior& posterior, double f_best) {
  const double gap = posterior.mean - f_best;
  if (!(posterior.variance > 0.0)) return std::max(0.0, gap);
  const double sigma = std::sqrt(posterior.variance);
  const double u = gap / sigma;
  const double ei = gap * special::normal_cdf(u) + sigma * special::normal_pdf(u);
  return std::max(0.0, ei);
}

std::vector<Eigen::VectorXd> acquisition_candidates(const GPState& state, Rng& rng,
                                                    const AcquisitionOptions& options) {
  const auto d = static_cast<Eigen::Index>(state.dim());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, options.perturb_sigma);

  std::vector<Eigen::VectorXd> out;
  out.reserve(options.n_random + options.n_perturbed);
  for (std::size_t i = 0; i < options.n_random; ++i) {
    Eigen::VectorXd u(d);
    for (Eigen::Index j = 0; j < d; ++j) u(j) = unif(rng);
    out.push_back(std::move(u));
  }

  const auto& values = state.values();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
  const std::size_t n_best = std::min(options.n_perturbed, order.size());
  for (std::size_t k = 0; k < n_best; ++k) {
    Eigen::VectorXd u = state.points().row(order[k]).transpose();
    for (Eigen::Index j = 0; j < d; ++j) u(j) = std::clamp(u(j) + noise(rng), 0.0, 1.0);
    out.push_back(std::move(u));
  }
  return out;
}

AcquisitionResult maximize_acquisition(const GPState& state, double f_best, Rng& rng,
                                       const AcquisitionOptions& options) {
  const auto candidates = acquisition_candidates(state, rng, options);
  AcquisitionResult best;
  best.ei = -1.0;
  for (const auto& c : candidates) {
    const double ei = ei_at(state, f_best, c);
    if (ei > best.ei) {
      best.ei = ei;
      best.point = c;
    }
  }

  const auto d = static_cast<Eigen::Index>(state.dim());
  if (!(best.ei > 0.0)) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    best.point.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) best.point(j) = unif(rng);
    best.ei = ei_at(state, f_best, best.point);
    best.fallback = true;
    return best;
  }

  // Coordinate-wise golden-section refinement; only improvements are accepted,
  // so the result never scores below the best candidate.
  constexpr double kInvPhi = 0.6180339887498949;
  for (int step = 0; step < options.refine_steps; ++step) {
    const Eigen::Index j = step % d;
    const double width = options.refine_halfwidth * std::pow(0.8, static_cast<double>(step / d));
    double lo = std::max(0.0, best.point(j) - width);
    double hi = std::min(1.0, best.point(j) + width);
    Eigen::VectorXd probe = best.point;
    auto f = [&](double v) {
      probe(j) = v;
      return ei_at(state, f_best, probe);
    };
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < options.golden_iters; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = f(x2);
      }
    }
    const double x_new = f1 >= f2 ? x1 : x2;
    const double f_new = std::max(f1, f2);
    if (f_new > best.ei) {
      best.point(j) = x_new;
      best.ei = f_new;
    }
  }
  return best;
}

std::vector<Eigen::VectorXd> latin_hypercube(std::size_t n, std::size_t dim, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts(n, Eigen::VectorXd(static_cast<Eigen::Index>(dim)));
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < dim; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i)
      pts[i](static_cast<Eigen::Index>(j)) = (static_cast<double>(perm[i]) + unif(rng)) / static_cast<double>(n);
  }
  return pts;
}

BOResult bo_optimize(const Objective& objective, const SearchSpace& space, const BOOptions& options,
                     std::uint64_t seed) {
  if (options.n_initial < 2) throw Error(ErrorCode::InvalidArgument, "n_initial must be at least 2");
  if (space.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty search space");
  const std::size_t d = space.size();
  Rng rng(seed);

  std::vector<Eigen::VectorXd> units;
  BOResult result;
  result.best_value = kNegInf;
  std::map<std::vector<double>, double> cache;

  auto evaluate = [&](const Eigen::VectorXd& unit) {
    const std::vector<double> u(unit.data(), unit.data() + unit.size());
    TraceRecord rec;
    rec.iteration = result.trace.size();
    rec.raw = space.from_unit(u);
    rec.realized = g_map(rec.raw, space);
    if (auto it = cache.find(rec.realized); it != cache.end()) {
      rec.value = it->second;
      rec.cached = true;
    } else {
      double v = kNegInf;
      try {
        v = objective(rec.realized, rec.iteration);
      } catch (const std::exception&) {
        v = kNegInf;
      }
      if (!std::isfinite(v)) v = kNegInf;
      rec.value = v;
      cache.emplace(rec.realized, v);
    }
    if (result.trace.empty() || rec.value > result.best_value) {
      result.best_value = rec.value;
      result.best_raw = rec.raw;
      result.best_realized = rec.realized;
    }
    rec.best_so_far = result.best_value;
    units.push_back(unit);
    result.trace.push_back(std::move(rec));
  };

  for (const auto& u : latin_hypercube(options.n_initial, d, rng)) evaluate(u);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t it = 0; it < options.n_iterations; ++it) {
    // Failed evaluations enter the surrogate at the worst finite value seen.
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : result.trace)
      if (std::isfinite(r.value)) worst = std::min(worst, r.value);

    Eigen::VectorXd next(static_cast<Eigen::Index>(d));
    if (std::isfinite(worst)) {
      const auto n = static_cast<Eigen::Index>(units.size());
      Eigen::MatrixXd pts(n, static_cast<Eigen::Index>(d));
      std::vector<double> vals(units.size());
      double f_best = kNegInf;
      for (Eigen::Index i = 0; i < n; ++i) {
        pts.row(i) = units[static_cast<std::size_t>(i)].transpose();
        const double v = result.trace[static_cast<std::size_t>(i)].value;
        vals[static_cast<std::size_t>(i)] = std::isfinite(v) ? v : worst;
        f_best = std::max(f_best, vals[static_cast<std::size_t>(i)]);
      }
      GPFitOptions fit;
      fit.kind = options.kernel;
      fit.seed = derive_seed(seed, {0x6770ULL, it});
      try {
        const GPState state = gp_fit(pts, vals, fit);
        next = maximize_acquisition(state, f_best, rng, options.acquisition).point;
      } catch (const Error&) {
        for (auto& x : next) x = unif(rng);
      }
    } else {
      for (auto& x : next) x = unif(rng);
    }
    evaluate(next);
  }
  return result;
}

}  // namespace lagbo
