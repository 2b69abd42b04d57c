#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lagbo {

/// Metric values of k models over N datasets; lower is better.
class ComparisonTable {
 public:
  /// `values[i][j]` is model j on dataset i.
  ComparisonTable(std::vector<std::string> models, std::vector<std::string> datasets,
                  std::vector<std::vector<double>> values);

  const std::vector<std::string>& models() const { return models_; }
  const std::vector<std::string>& datasets() const { return datasets_; }
  const std::vector<std::vector<double>>& values() const { return values_; }
  std::size_t k() const { return models_.size(); }
  std::size_t n() const { return datasets_.size(); }

  /// Within-dataset ranks (ties averaged), N x k.
  const std::vector<std::vector<double>>& ranks() const { return ranks_; }
  /// Mean rank of each model across datasets.
  const std::vector<double>& average_ranks() const { return average_ranks_; }

 private:
  std::vector<std::string> models_;
  std::vector<std::string> datasets_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<double>> ranks_;
  std::vector<double> average_ranks_;
};

struct FriedmanResult {
  double chi2 = 0.0;      // Friedman chi-square
  double chi2_p = 1.0;    // upper tail, chi-square with k-1 df
  double ff = 0.0;        // Iman-Davenport statistic
  double p_value = 1.0;   // upper tail, F with (k-1, (k-1)(N-1)) df
  double df1 = 0.0;
  double df2 = 0.0;
  bool degenerate = false;  // chi2 == N(k-1): perfect separation, ff infinite
};

/// Friedman test with the Iman-Davenport F correction. Needs N >= 2, k >= 2.
FriedmanResult friedman(const ComparisonTable& table);

struct PostHocComparison {
  std::string model;
  double z = 0.0;        // (R_model - R_reference) / sqrt(k(k+1)/(6N))
  double p_value = 1.0;  // two-sided normal
  std::size_t position = 0;  // 1-based position in ascending p order
  double threshold = 0.0;    // position / k * alpha
  bool reject = false;
};

struct TwoStepResult {
  FriedmanResult friedman;
  std::string reference;
  double alpha = 0.1;
  std::vector<std::string> models;            // table model order
  std::vector<double> average_ranks;          // table model order
  std::vector<PostHocComparison> comparisons; // table model order, reference excluded
};

/// Friedman/Iman-Davenport followed by z-tests of every model against
/// `reference`. Sorted p-values are compared to (i/k) * alpha, i = 1 for the
/// smallest. Throws UnknownReference when the reference is not a model.
TwoStepResult hochberg(const ComparisonTable& table, std::string_view reference, double alpha);

}  // namespace lagbo
