#include "lagbo/lstm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <type_traits>

#if defined(__SSE2__)
#include <pmmintrin.h>
#endif

#include "json.hpp"
#include "lagbo/error.hpp"

namespace lagbo {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Saturated gates push gradients into the subnormal range, where arithmetic
// is an order of magnitude slower. Flush them to zero for the duration of a
// training run; the control register is per thread.
class FlushDenormals {
 public:
#if defined(__SSE2__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | _MM_FLUSH_ZERO_ON | _MM_DENORMALS_ZERO_ON); }
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
};

struct Offsets {
  std::size_t w1, b1, w2, b2, wd, bd, total;
};

Offsets offsets(const LSTMConfig& c) {
  const auto h1 = static_cast<std::size_t>(c.hidden1);
  const auto h2 = static_cast<std::size_t>(c.hidden2);
  Offsets o{};
  o.w1 = 0;
  o.b1 = o.w1 + 4 * h1 * (1 + h1);
  o.w2 = o.b1 + 4 * h1;
  o.b2 = o.w2 + 4 * h2 * (h1 + h2);
  o.wd = o.b2 + 4 * h2;
  o.bd = o.wd + h2;
  o.total = o.bd + 1;
  return o;
}

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;
template <typename S>
using AlignedBuffer = std::vector<S, Eigen::aligned_allocator<S>>;

// Read-only views of a flat parameter buffer of scalar type S.
template <typename S>
struct Net {
  const S* p;
  Offsets o;
  Index h1, h2;
  Net(const S* data, const LSTMConfig& c) : p(data), o(offsets(c)), h1(c.hidden1), h2(c.hidden2) {}
  Eigen::Map<const Mat<S>> w1() const { return {p + o.w1, 4 * h1, 1 + h1}; }
  Eigen::Map<const Vec<S>> b1() const { return {p + o.b1, 4 * h1}; }
  Eigen::Map<const Mat<S>> w2() const { return {p + o.w2, 4 * h2, h1 + h2}; }
  Eigen::Map<const Vec<S>> b2() const { return {p + o.b2, 4 * h2}; }
  Eigen::Map<const Vec<S>> wd() const { return {p + o.wd, h2}; }
  S bd() const { return p[o.bd]; }
};

// Activations of one layer over all time steps, stored time-major: the block
// of columns [t*B, (t+1)*B) belongs to step t.
template <typename S>
struct LayerCache {
  Mat<S> pre;     // 4h x mB, input projection plus bias; becomes activated gates
  Mat<S> c;       // h x (m+1)B, c_0 .. c_m
  Mat<S> h;       // h x (m+1)B, h_0 .. h_m
  Mat<S> tanh_c;  // h x mB, tanh(c_1) .. tanh(c_m)
};

// Runs one layer over `input` (in x mB). Gates are i, f, g, o.
template <typename S>
void layer_forward(const Eigen::Map<const Mat<S>>& w, const Eigen::Map<const Vec<S>>& bias, const Mat<S>& input,
                   Index hd, Index batch, Index steps, LayerCache<S>& cache) {
  const Index in = input.rows();
  cache.pre.resize(4 * hd, steps * batch);
  cache.pre.noalias() = w.leftCols(in) * input;
  cache.pre.colwise() += bias;
  cache.c.resize(hd, (steps + 1) * batch);
  cache.h.resize(hd, (steps + 1) * batch);
  cache.tanh_c.resize(hd, steps * batch);
  cache.c.leftCols(batch).setZero();
  cache.h.leftCols(batch).setZero();
  const auto w_h = w.rightCols(hd);
  for (Index t = 0; t < steps; ++t) {
    auto g = cache.pre.middleCols(t * batch, batch);
    g.noalias() += w_h * cache.h.middleCols(t * batch, batch);
    g.topRows(2 * hd) = g.topRows(2 * hd).array().logistic().matrix();
    g.middleRows(2 * hd, hd) = g.middleRows(2 * hd, hd).array().tanh().matrix();
    g.bottomRows(hd) = g.bottomRows(hd).array().logistic().matrix();
    auto c_next = cache.c.middleCols((t + 1) * batch, batch);
    c_next = (g.middleRows(hd, hd).array() * cache.c.middleCols(t * batch, batch).array() +
              g.topRows(hd).array() * g.middleRows(2 * hd, hd).array())
                 .matrix();
    auto tc = cache.tanh_c.middleCols(t * batch, batch);
    tc = c_next.array().tanh().matrix();
    cache.h.middleCols((t + 1) * batch, batch) = (g.bottomRows(hd).array() * tc.array()).matrix();
  }
}

// BPTT through one layer. `dh_ext` is the gradient flowing into h_1 .. h_m
// from above (h x mB), or into h_m only (h x B) when `last_only` is set.
// Accumulates weight gradients and, when `d_input` is non-null, writes the
// gradient with respect to the layer input (in x mB).
template <typename S>
void layer_backward(const Eigen::Map<const Mat<S>>& w, const Mat<S>& input, Index hd, Index batch, Index steps,
                    const LayerCache<S>& cache, const Mat<S>& dh_ext, bool last_only, Eigen::Map<Mat<S>> dw,
                    Eigen::Map<Vec<S>> db, Mat<S>* d_input, Mat<S>& dz_all) {
  const Index in = input.rows();
  Mat<S> dh = Mat<S>::Zero(hd, batch);
  Mat<S> dc = Mat<S>::Zero(hd, batch);
  dz_all.resize(4 * hd, steps * batch);
  const auto w_h = w.rightCols(hd);
  const S one(1);
  for (Index t = steps - 1; t >= 0; --t) {
    if (!last_only)
      dh += dh_ext.middleCols(t * batch, batch);
    else if (t == steps - 1)
      dh += dh_ext;
    const auto g = cache.pre.middleCols(t * batch, batch);
    const auto gi = g.topRows(hd).array();
    const auto gf = g.middleRows(hd, hd).array();
    const auto gg = g.middleRows(2 * hd, hd).array();
    const auto go = g.bottomRows(hd).array();
    const auto tc = cache.tanh_c.middleCols(t * batch, batch).array();

    dc.array() += dh.array() * go * (one - tc * tc);
    auto dz = dz_all.middleCols(t * batch, batch);
    dz.topRows(hd) = (dc.array() * gg * gi * (one - gi)).matrix();
    dz.middleRows(hd, hd) = (dc.array() * cache.c.middleCols(t * batch, batch).array() * gf * (one - gf)).matrix();
    dz.middleRows(2 * hd, hd) = (dc.array() * gi * (one - gg * gg)).matrix();
    dz.bottomRows(hd) = (dh.array() * tc * go * (one - go)).matrix();

    dh.noalias() = w_h.transpose() * dz;
    dc.array() *= gf;
  }
  dw.leftCols(in).noalias() += dz_all * input.transpose();
  dw.rightCols(hd).noalias() += dz_all * cache.h.leftCols(steps * batch).transpose();
  db.noalias() += dz_all.rowwise().sum();
  if (d_input) d_input->noalias() = w.leftCols(in).transpose() * dz_all;
}

template <typename S>
struct Masks {
  Mat<S> layer1;  // hidden1 x B, entries 0 or 1/(1-dr), shared by all steps
  Mat<S> layer2;  // hidden2 x B, applied to the final hidden state
};

template <typename S>
Masks<S> draw_masks(const LSTMConfig& c, Index batch, Rng& rng) {
  Masks<S> m;
  const double keep = 1.0 - c.dropout;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto fill = [&](Mat<S>& mask, Index rows) {
    mask.resize(rows, batch);
    for (Index j = 0; j < batch; ++j)
      for (Index i = 0; i < rows; ++i) mask(i, j) = unif(rng) < keep ? static_cast<S>(1.0 / keep) : S(0);
  };
  fill(m.layer1, c.hidden1);
  fill(m.layer2, c.hidden2);
  return m;
}

// Reused across mini-batches so steady-state training does not allocate.
template <typename S>
struct Workspace {
  Mat<S> seq;     // 1 x mB layer-1 input
  Mat<S> input2;  // h1 x mB masked layer-1 outputs
  LayerCache<S> l1, l2;
  Mat<S> top;     // masked final hidden state of layer 2, hidden2 x B
  RowVec<S> output;
  Mat<S> dz1, dz2, d_in2, dh2;
};

// Batched forward pass; inputs is row-major batch x m.
template <typename S>
void forward_batch(const Net<S>& net, Index m, std::span<const double> inputs, Index batch, const Masks<S>* masks,
                   Workspace<S>& ws) {
  // Column j of `windows` is sample j; step t of the layer input is its row t.
  const Eigen::Map<const MatrixXd> windows(inputs.data(), m, batch);
  ws.seq.resize(1, m * batch);
  for (Index t = 0; t < m; ++t) ws.seq.middleCols(t * batch, batch) = windows.row(t).template cast<S>();

  layer_forward<S>(net.w1(), net.b1(), ws.seq, net.h1, batch, m, ws.l1);
  ws.input2 = ws.l1.h.rightCols(m * batch);
  if (masks)
    for (Index t = 0; t < m; ++t) ws.input2.middleCols(t * batch, batch).array() *= masks->layer1.array();
  layer_forward<S>(net.w2(), net.b2(), ws.input2, net.h2, batch, m, ws.l2);
  ws.top = ws.l2.h.rightCols(batch);
  if (masks) ws.top.array() *= masks->layer2.array();
  ws.output.noalias() = net.wd().transpose() * ws.top;
  ws.output.array() += net.bd();
}

// Mean squared error of the batch and its gradient in `grad` (parameter layout).
template <typename S>
double loss_and_gradient(const Net<S>& net, Index m, std::span<const double> inputs, std::span<const double> targets,
                         const Masks<S>* masks, AlignedBuffer<S>& grad, Workspace<S>& ws) {
  const auto batch = static_cast<Index>(targets.size());
  const Index h1 = net.h1;
  const Index h2 = net.h2;
  forward_batch(net, m, inputs, batch, masks, ws);

  const RowVec<S> err = ws.output - Eigen::Map<const Eigen::RowVectorXd>(targets.data(), batch).cast<S>();
  const double loss = static_cast<double>(err.squaredNorm()) / static_cast<double>(batch);
  if (!std::isfinite(loss)) throw Error(ErrorCode::NonFiniteLoss, "training loss is not finite");

  const Offsets& o = net.o;
  grad.assign(o.total, S(0));
  Eigen::Map<Mat<S>> dw1(grad.data() + o.w1, 4 * h1, 1 + h1);
  Eigen::Map<Vec<S>> db1(grad.data() + o.b1, 4 * h1);
  Eigen::Map<Mat<S>> dw2(grad.data() + o.w2, 4 * h2, h1 + h2);
  Eigen::Map<Vec<S>> db2(grad.data() + o.b2, 4 * h2);
  Eigen::Map<Vec<S>> dwd(grad.data() + o.wd, h2);

  const RowVec<S> dy = err * static_cast<S>(2.0 / static_cast<double>(batch));
  dwd.noalias() = ws.top * dy.transpose();
  grad[o.bd] = dy.sum();

  ws.dh2.noalias() = net.wd() * dy;
  if (masks) ws.dh2.array() *= masks->layer2.array();

  layer_backward<S>(net.w2(), ws.input2, h2, batch, m, ws.l2, ws.dh2, true, dw2, db2, &ws.d_in2, ws.dz2);
  if (masks)
    for (Index t = 0; t < m; ++t) ws.d_in2.middleCols(t * batch, batch).array() *= masks->layer1.array();
  layer_backward<S>(net.w1(), ws.seq, h1, batch, m, ws.l1, ws.d_in2, false, dw1, db1, nullptr, ws.dz1);
  return loss;
}

// Runs a training loop step for either precision: `working` mirrors the
// double master weights in S.
template <typename S>
struct Trainer {
  AlignedBuffer<S> working;
  AlignedBuffer<S> grad;
  Workspace<S> ws;

  double step(const LSTMModel& model, std::span<const double> xb, std::span<const double> yb, const Masks<S>* masks,
              std::vector<double>& grad_out) {
    const auto params = model.parameters();
    double loss = 0.0;
    if constexpr (std::is_same_v<S, double>) {
      loss = loss_and_gradient<double>(Net<double>(params.data(), model.config()), model.config().input_window, xb, yb,
                                       masks, grad, ws);
    } else {
      working.assign(params.begin(), params.end());
      loss = loss_and_gradient<S>(Net<S>(working.data(), model.config()), model.config().input_window, xb, yb, masks,
                                  grad, ws);
    }
    grad_out.assign(grad.begin(), grad.end());
    return loss;
  }
};

}  // namespace

void LSTMConfig::validate() const {
  if (input_window < 1 || hidden1 < 1 || hidden2 < 1 || batch_size < 1)
    throw Error(ErrorCode::InvalidArgument, "LSTM sizes must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error(ErrorCode::InvalidArgument, "dropout must be in [0, 1)");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rate must be positive");
  if (epochs < 0 || patience < 1) throw Error(ErrorCode::InvalidArgument, "invalid epoch budget");
}

LSTMModel::LSTMModel(const LSTMConfig& config) : config_(config) {
  config_.validate();
  params_.assign(offsets(config_).total, 0.0);
}

LSTMModel LSTMModel::init(const LSTMConfig& config) {
  LSTMModel model(config);
  Rng rng(config.seed);
  auto fill = [&](double* p, std::size_t n, double k) {
    std::uniform_real_distribution<double> unif(-k, k);
    for (std::size_t i = 0; i < n; ++i) p[i] = unif(rng);
  };
  const Offsets o = offsets(model.config_);
  const auto h1 = static_cast<std::size_t>(config.hidden1);
  const auto h2 = static_cast<std::size_t>(config.hidden2);
  double* p = model.params_.data();
  const double k1 = 1.0 / std::sqrt(static_cast<double>(1 + h1));
  const double k2 = 1.0 / std::sqrt(static_cast<double>(h1 + h2));
  fill(p + o.w1, o.b1 - o.w1, k1);
  fill(p + o.b1, o.w2 - o.b1, k1);
  fill(p + o.w2, o.b2 - o.w2, k2);
  fill(p + o.b2, o.wd - o.b2, k2);
  fill(p + o.wd, o.total - o.wd, 1.0 / std::sqrt(static_cast<double>(h2)));
  std::fill(p + o.b1 + h1, p + o.b1 + 2 * h1, 1.0);
  std::fill(p + o.b2 + h2, p + o.b2 + 2 * h2, 1.0);
  return model;
}

LSTMModel::ConstMatMap LSTMModel::w1() const {
  const Offsets o = offsets(config_);
  return ConstMatMap(params_.data() + o.w1, 4 * config_.hidden1, 1 + config_.hidden1);
}
LSTMModel::ConstVecMap LSTMModel::b1() const {
  return ConstVecMap(params_.data() + offsets(config_).b1, 4 * config_.hidden1);
}
LSTMModel::ConstMatMap LSTMModel::w2() const {
  const Offsets o = offsets(config_);
  return ConstMatMap(params_.data() + o.w2, 4 * config_.hidden2, config_.hidden1 + config_.hidden2);
}
LSTMModel::ConstVecMap LSTMModel::b2() const {
  return ConstVecMap(params_.data() + offsets(config_).b2, 4 * config_.hidden2);
}
LSTMModel::ConstVecMap LSTMModel::wd() const {
  return ConstVecMap(params_.data() + offsets(config_).wd, config_.hidden2);
}
double LSTMModel::bd() const { return params_[offsets(config_).bd]; }

LSTMModel::MatMap LSTMModel::w1() {
  const Offsets o = offsets(config_);
  return MatMap(params_.data() + o.w1, 4 * config_.hidden1, 1 + config_.hidden1);
}
LSTMModel::VecMap LSTMModel::b1() { return VecMap(params_.data() + offsets(config_).b1, 4 * config_.hidden1); }
LSTMModel::MatMap LSTMModel::w2() {
  const Offsets o = offsets(config_);
  return MatMap(params_.data() + o.w2, 4 * config_.hidden2, config_.hidden1 + config_.hidden2);
}
LSTMModel::VecMap LSTMModel::b2() { return VecMap(params_.data() + offsets(config_).b2, 4 * config_.hidden2); }
LSTMModel::VecMap LSTMModel::wd() { return VecMap(params_.data() + offsets(config_).wd, config_.hidden2); }
double& LSTMModel::bd() { return params_[offsets(config_).bd]; }

bool LSTMModel::all_finite() const {
  return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); });
}

double forward(const LSTMModel& model, std::span<const double> window, bool training, Rng& rng) {
  if (window.size() != static_cast<std::size_t>(model.config().input_window))
    throw Error(ErrorCode::DimensionMismatch, "window length does not match the model's input window");
  Workspace<double> ws;
  const Net<double> net(model.parameters().data(), model.config());
  const Index m = model.config().input_window;
  if (training && model.config().dropout > 0.0) {
    const auto masks = draw_masks<double>(model.config(), 1, rng);
    forward_batch(net, m, window, 1, &masks, ws);
  } else {
    forward_batch<double>(net, m, window, 1, nullptr, ws);
  }
  return ws.output(0);
}

double predict(const LSTMModel& model, std::span<const double> window) {
  Rng unused(0);
  return forward(model, window, false, unused);
}

Gradients backward(const LSTMModel& model, std::span<const double> inputs, std::span<const double> targets) {
  if (targets.empty()) throw Error(ErrorCode::EmptyInput, "empty batch");
  if (inputs.size() != targets.size() * static_cast<std::size_t>(model.config().input_window))
    throw Error(ErrorCode::DimensionMismatch, "batch inputs do not match window length");
  Gradients g;
  Workspace<double> ws;
  AlignedBuffer<double> grad;
  g.loss = loss_and_gradient<double>(Net<double>(model.parameters().data(), model.config()),
                                     model.config().input_window, inputs, targets, nullptr, grad, ws);
  g.grad.assign(grad.begin(), grad.end());
  return g;
}

namespace {

template <typename S>
std::pair<LSTMModel, TrainReport> train_impl(const LSTMConfig& config, const LagDataset& data) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyInput, "empty training set");
  if (data.lag != static_cast<std::size_t>(config.input_window))
    throw Error(ErrorCode::DimensionMismatch, "dataset lag does not match the input window");

  const FlushDenormals ftz;
  LSTMModel model = LSTMModel::init(config);
  TrainReport report;
  const std::size_t n = data.rows();
  const std::size_t m = data.lag;
  const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), n);
  const std::size_t p = model.parameter_count();

  Rng rng(derive_seed(config.seed, {0x747261696eULL}));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> first(p, 0.0), second(p, 0.0), grad;
  std::vector<double> xb, yb;
  Trainer<S> trainer;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  double beta1_t = 1.0, beta2_t = 1.0;

  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  const bool use_dropout = config.dropout > 0.0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t bs = std::min(batch, n - start);
      xb.resize(bs * m);
      yb.resize(bs);
      for (std::size_t j = 0; j < bs; ++j) {
        const auto row = data.row(order[start + j]);
        std::copy(row.begin(), row.end(), xb.begin() + static_cast<std::ptrdiff_t>(j * m));
        yb[j] = data.targets[order[start + j]];
      }
      Masks<S> masks;
      if (use_dropout) masks = draw_masks<S>(config, static_cast<Index>(bs), rng);
      const double loss = trainer.step(model, xb, yb, use_dropout ? &masks : nullptr, grad);
      ++report.gradient_evaluations;

      double norm2 = 0.0;
      for (double g : grad) norm2 += g * g;
      const double norm = std::sqrt(norm2);
      if (!std::isfinite(norm)) throw Error(ErrorCode::NonFiniteLoss, "gradient is not finite");
      const double scale = norm > config.clip_norm ? config.clip_norm / norm : 1.0;

      beta1_t *= kBeta1;
      beta2_t *= kBeta2;
      const double step = config.learning_rate * std::sqrt(1.0 - beta2_t) / (1.0 - beta1_t);
      auto params = model.parameters();
      for (std::size_t i = 0; i < p; ++i) {
        const double g = grad[i] * scale;
        first[i] = kBeta1 * first[i] + (1.0 - kBeta1) * g;
        second[i] = kBeta2 * second[i] + (1.0 - kBeta2) * g * g;
        params[i] -= step * first[i] / (std::sqrt(second[i]) + kEps);
      }
      epoch_loss += loss * static_cast<double>(bs);
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw Error(ErrorCode::NonFiniteLoss, "training loss is not finite");
    report.epoch_losses.push_back(epoch_loss);

    if (epoch_loss < best - config.min_improvement) {
      best = epoch_loss;
      stale = 0;
    } else if (++stale >= config.patience) {
      report.early_stopped = true;
      break;
    }
  }
  if (!model.all_finite()) throw Error(ErrorCode::NonFiniteLoss, "parameters diverged");
  report.final_loss = report.epoch_losses.empty() ? 0.0 : report.epoch_losses.back();
  return {std::move(model), std::move(report)};
}

}  // namespace

std::pair<LSTMModel, TrainReport> train(const LSTMConfig& config, const LagDataset& data) {
  config.validate();
  return config.single_precision ? train_impl<float>(config, data) : train_impl<double>(config, data);
}

std::vector<double> predict_recursive(const OneStepModel& model, std::size_t window_len,
                                      std::span<const double> history, std::size_t horizon) {
  if (window_len < 1) throw Error(ErrorCode::InvalidArgument, "window length must be at least 1");
  if (history.size() < window_len)
    throw Error(ErrorCode::HistoryTooShort, "history shorter than the input window");
  std::vector<double> window(history.end() - static_cast<std::ptrdiff_t>(window_len), history.end());
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    const double next = model(window);
    out.push_back(next);
    window.erase(window.begin());
    window.push_back(next);
  }
  return out;
}

std::vector<double> predict_recursive(const LSTMModel& model, std::span<const double> history,
                                      std::size_t horizon) {
  return predict_recursive([&](std::span<const double> w) { return predict(model, w); },
                           static_cast<std::size_t>(model.config().input_window), history, horizon);
}

namespace {

nlohmann::json row_major(const Eigen::Ref<const MatrixXd>& mat) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index r = 0; r < mat.rows(); ++r)
    for (Index c = 0; c < mat.cols(); ++c) arr.push_back(mat(r, c));
  return arr;
}

void read_row_major(const nlohmann::json& arr, Eigen::Ref<MatrixXd> mat, const char* name) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(mat.size()))
    throw Error(ErrorCode::ParseError, std::string("weight array '") + name + "' has the wrong size");
  std::size_t k = 0;
  for (Index r = 0; r < mat.rows(); ++r)
    for (Index c = 0; c < mat.cols(); ++c) mat(r, c) = arr[k++].get<double>();
}

}  // namespace

std::string model_to_json(const LSTMModel& model) {
  const LSTMConfig& c = model.config();
  nlohmann::json j;
  j["config"] = {{"input_window", c.input_window}, {"hidden1", c.hidden1},
                 {"hidden2", c.hidden2},           {"dropout", c.dropout},
                 {"learning_rate", c.learning_rate}, {"batch_size", c.batch_size},
                 {"epochs", c.epochs},             {"patience", c.patience},
                 {"seed", c.seed}};
  j["shapes"] = {{"w1", {4 * c.hidden1, 1 + c.hidden1}}, {"b1", {4 * c.hidden1}},
                 {"w2", {4 * c.hidden2, c.hidden1 + c.hidden2}}, {"b2", {4 * c.hidden2}},
                 {"wd", {c.hidden2}}, {"bd", {1}}};
  j["w1"] = row_major(model.w1());
  j["b1"] = row_major(model.b1());
  j["w2"] = row_major(model.w2());
  j["b2"] = row_major(model.b2());
  j["wd"] = row_major(model.wd());
  j["bd"] = nlohmann::json::array({model.bd()});
  return j.dump();
}

LSTMModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const auto& cj = j.at("config");
    LSTMConfig c;
    c.input_window = cj.at("input_window").get<int>();
    c.hidden1 = cj.at("hidden1").get<int>();
    c.hidden2 = cj.at("hidden2").get<int>();
    c.dropout = cj.at("dropout").get<double>();
    c.learning_rate = cj.at("learning_rate").get<double>();
    c.batch_size = cj.at("batch_size").get<int>();
    c.epochs = cj.at("epochs").get<int>();
    c.patience = cj.at("patience").get<int>();
    c.seed = cj.at("seed").get<std::uint64_t>();
    LSTMModel model(c);
    read_row_major(j.at("w1"), model.w1(), "w1");
    read_row_major(j.at("b1"), model.b1(), "b1");
    read_row_major(j.at("w2"), model.w2(), "w2");
    read_row_major(j.at("b2"), model.b2(), "b2");
    read_row_major(j.at("wd"), model.wd(), "wd");
    const auto& bd = j.at("bd");
    if (!bd.is_array() || bd.size() != 1) throw Error(ErrorCode::ParseError, "weight array 'bd' has the wrong size");
    model.bd() = bd[0].get<double>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace lagbo
