#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lagbo/gp.hpp"
#include "lagbo/seeding.hpp"

namespace lagbo {

struct Dimension {
  std::string name;
  double lower = 0.0;  // in realized units
  double upper = 1.0;
  bool discrete = false;
  bool log_scale = false;  // searched over ln(value)
};

/// Box over which BO searches. Raw coordinates live in [raw_lower, raw_upper]
/// per dimension (ln-transformed for log-scaled dimensions); the GP sees them
/// rescaled to the unit cube.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<Dimension> dims);

  /// m, dr, lr, hu1, hu2, b with the default bounds.
  static SearchSpace lstm_default();

  std::size_t size() const { return dims_.size(); }
  const Dimension& operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<Dimension>& dims() const { return dims_; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Copy with the named dimension removed.
  SearchSpace without(std::string_view name) const;

  double raw_lower(std::size_t i) const;
  double raw_upper(std::size_t i) const;

  std::vector<double> to_unit(std::span<const double> raw) const;
  std::vector<double> from_unit(std::span<const double> unit) const;
  /// Raw coordinates of a realized point (inverse of g_map on its image).
  std::vector<double> to_raw(std::span<const double> realized) const;

 private:
  std::vector<Dimension> dims_;
};

/// The rounding map g: exponentiates log-scaled coordinates and rounds
/// discrete ones half-up. Throws OutOfBounds for raw points outside the box.
std::vector<double> g_map(std::span<const double> raw, const SearchSpace& space);

/// Structural LSTM hyperparameters plus the lag count.
struct HyperParams {
  int m = 12;
  double dr = 0.0;
  double lr = 1e-3;
  int hu1 = 32;
  int hu2 = 32;
  int b = 32;

  /// Reads named dimensions from a realized point; `m` falls back to
  /// `pinned_lag` when the space has no "m" dimension.
  static HyperParams from_realized(const SearchSpace& space, std::span<const double> realized,
                                   int pinned_lag = 12);

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Closed-form expected improvement E[(f - f_best)^+] for f ~ N(mean, variance).
double expected_improvement(const Posterior& posterior, double f_best);

struct AcquisitionOptions {
  std::size_t n_random = 2048;
  std::size_t n_perturbed = 10;
  double perturb_sigma = 0.05;
  int refine_steps = 50;
  int golden_iters = 20;
  double refine_halfwidth = 0.1;
};

/// Candidate points (unit cube) scored before local refinement: uniform draws
/// followed by Gaussian perturbations of the best observed points.
std::vector<Eigen::VectorXd> acquisition_candidates(const GPState& state, Rng& rng,
                                                    const AcquisitionOptions& options = {});

struct AcquisitionResult {
  Eigen::VectorXd point;  // unit cube
  double ei = 0.0;
  bool fallback = false;  // EI vanished everywhere; point is uniform random
};

/// Maximizes EI over the unit cube: best of the candidate set, refined by
/// coordinate-wise golden-section search.
AcquisitionResult maximize_acquisition(const GPState& state, double f_best, Rng& rng,
                                       const AcquisitionOptions& options = {});

struct TraceRecord {
  std::size_t iteration = 0;      // 0-based evaluation index
  std::vector<double> raw;        // H2
  std::vector<double> realized;   // g(H2)
  double value = 0.0;             // -inf marks a failed evaluation
  double best_so_far = 0.0;
  bool cached = false;            // realized point was already evaluated
};

using BOTrace = std::vector<TraceRecord>;

/// Objective over realized coordinates; the second argument is the evaluation
/// index (for per-evaluation seeding). Throwing or returning a non-finite value
/// marks the evaluation as failed.
using Objective = std::function<double(std::span<const double> realized, std::size_t evaluation)>;

struct BOOptions {
  std::size_t n_initial = 10;
  std::size_t n_iterations = 40;
  KernelKind kernel = KernelKind::Matern52;
  AcquisitionOptions acquisition;
};

struct BOResult {
  std::vector<double> best_raw;
  std::vector<double> best_realized;
  double best_value = 0.0;
  BOTrace trace;
};

/// Latin hypercube design in the unit cube.
std::vector<Eigen::VectorXd> latin_hypercube(std::size_t n, std::size_t dim, Rng& rng);

BOResult bo_optimize(const Objective& objective, const SearchSpace& space, const BOOptions& options,
                     std::uint64_t seed);

}  // namespace lagbo
