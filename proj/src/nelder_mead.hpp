#pragma once

// Box-constrained Nelder-Mead used for kernel hyperparameter fitting.

#include <Eigen/Core>
#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace lagbo::detail {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

/// Minimizes `f` starting from `x0`; trial points are clamped into [lower, upper].
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                                    const Eigen::VectorXd& upper, int max_evals,
                                    double initial_step = 0.5, double tol = 1e-8) {
  const Eigen::Index n = x0.size();
  auto clamp = [&](Eigen::VectorXd v) { return v.cwiseMax(lower).cwiseMin(upper).eval(); };

  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> fv;
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& v) {
    ++evals;
    return f(v);
  };

  simplex.push_back(clamp(x0));
  fv.push_back(eval(simplex[0]));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = simplex[0];
    // Step away from the nearer bound so the simplex never collapses.
    v(i) += (v(i) + initial_step <= upper(i)) ? initial_step : -initial_step;
    v = clamp(v);
    simplex.push_back(v);
    fv.push_back(eval(v));
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(n + 1));
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    if (std::abs(fv[worst] - fv[best]) <= tol * (1.0 + std::abs(fv[best]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += simplex[order[i]];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = clamp(centroid + (centroid - simplex[worst]));
    const double fr = eval(reflected);
    if (fr < fv[best]) {
      const Eigen::VectorXd expanded = clamp(centroid + 2.0 * (centroid - simplex[worst]));
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        fv[worst] = fe;
      } else {
        simplex[worst] = reflected;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = reflected;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const Eigen::VectorXd contracted =
        outside ? clamp(centroid + 0.5 * (reflected - centroid))
                : clamp(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = contracted;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = clamp(simplex[best] + 0.5 * (simplex[i] - simplex[best]));
      fv[i] = eval(simplex[i]);
    }
  }

  const auto it = std::min_element(fv.begin(), fv.end());
  const auto idx = static_cast<std::size_t>(it - fv.begin());
  return {simplex[idx], *it, evals};
}

}  // namespace lagbo::detail
