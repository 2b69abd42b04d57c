#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lagbo/seeding.hpp"
#include "lagbo/series.hpp"

namespace lagbo {

struct LSTMConfig {
  int input_window = 12;  // m
  int hidden1 = 32;
  int hidden2 = 32;
  double dropout = 0.0;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int epochs = 150;
  int patience = 20;            // early stop after this many epochs without improvement
  double min_improvement = 1e-6;
  double clip_norm = 5.0;
  std::uint64_t seed = 0;
  /// Run the training forward/backward passes in float. Weights and Adam
  /// state stay in double, and inference is always double.
  bool single_precision = true;

  void validate() const;
};

/// Two stacked LSTM layers over a scalar input sequence followed by a dense
/// output unit. All parameters live in one flat buffer; the accessors map
/// column-major views onto it. Gate blocks are ordered input, forget,
/// candidate, output, each over the [input; recurrent] concatenation.
class LSTMModel {
 public:
  using MatMap = Eigen::Map<Eigen::MatrixXd>;
  using ConstMatMap = Eigen::Map<const Eigen::MatrixXd>;
  using VecMap = Eigen::Map<Eigen::VectorXd>;
  using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

  /// All-zero parameters.
  explicit LSTMModel(const LSTMConfig& config);

  /// Uniform(-k, k) weights with k = 1/sqrt(fan_in) per block and forget-gate
  /// biases set to 1, drawn from config.seed.
  static LSTMModel init(const LSTMConfig& config);

  const LSTMConfig& config() const { return config_; }
  std::size_t parameter_count() const { return params_.size(); }
  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }

  ConstMatMap w1() const;  // 4*hidden1 x (1 + hidden1)
  ConstVecMap b1() const;
  ConstMatMap w2() const;  // 4*hidden2 x (hidden1 + hidden2)
  ConstVecMap b2() const;
  ConstVecMap wd() const;  // hidden2
  double bd() const;
  MatMap w1();
  VecMap b1();
  MatMap w2();
  VecMap b2();
  VecMap wd();
  double& bd();

  bool all_finite() const;

  friend bool operator==(const LSTMModel& a, const LSTMModel& b) {
    return a.params_ == b.params_;
  }

 private:
  LSTMConfig config_;
  // Packet-aligned so vectorized loops over the weights do not depend on
  // where the heap happened to place them.
  std::vector<double, Eigen::aligned_allocator<double>> params_;
};

/// One-window prediction. With `training` set, inverted dropout at rate
/// config.dropout is applied to each layer's output using `rng`.
double forward(const LSTMModel& model, std::span<const double> window, bool training, Rng& rng);

/// Inference forward pass (no dropout).
double predict(const LSTMModel& model, std::span<const double> window);

struct Gradients {
  double loss = 0.0;          // mean squared error over the batch
  std::vector<double> grad;   // same layout as LSTMModel::parameters()
};

/// Exact gradient of the batch MSE by backpropagation through time.
/// `inputs` is row-major (targets.size() x m). No dropout.
Gradients backward(const LSTMModel& model, std::span<const double> inputs, std::span<const double> targets);

struct TrainReport {
  std::vector<double> epoch_losses;  // sample-weighted mean of mini-batch MSE
  double final_loss = 0.0;
  std::size_t gradient_evaluations = 0;
  bool early_stopped = false;
};

/// Adam (0.9, 0.999, 1e-8) with global-norm clipping, per-epoch seeded shuffle
/// and early stopping. Batch size is clamped to the number of samples; the
/// last partial batch is kept. Throws NonFiniteLoss on divergence.
std::pair<LSTMModel, TrainReport> train(const LSTMConfig& config, const LagDataset& data);

/// Any one-step forecaster over a window of fixed length.
using OneStepModel = std::function<double(std::span<const double> window)>;

/// Recursive multi-step forecast: each step feeds the previous forecasts back
/// into the sliding window in place of unavailable observations.
/// Throws HistoryTooShort when history has fewer than `window` points.
std::vector<double> predict_recursive(const OneStepModel& model, std::size_t window,
                                      std::span<const double> history, std::size_t horizon);
std::vector<double> predict_recursive(const LSTMModel& model, std::span<const double> history,
                                      std::size_t horizon);

/// Flat JSON record: config, shapes and row-major weight arrays.
std::string model_to_json(const LSTMModel& model);
LSTMModel model_from_json(std::string_view text);

}  // namespace lagbo
