#pragma once

// Embedding -> Conv1D (same padding, ReLU) -> bidirectional LSTM -> dense
// sigmoid, with hand-written backpropagation through time and Adam.
//
// Layouts: time-major activations, row (t * B + b) holds step t of batch
// row b. Gate columns are ordered [input | forget | candidate | output].
// The gate equations are written out in docs/math.md.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "binary_io.hpp"
#include "error.hpp"
#include "features.hpp"
#include "random.hpp"

namespace mbti {

struct RNNConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 256;
  std::size_t conv_filters = 64;
  std::size_t conv_kernel = 5;
  std::size_t lstm_hidden = 64;
  std::size_t max_len = 200;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 32;
  int epochs = 5;
  std::uint64_t seed = 0;

  void validate() const {
    if (vocab_size < 1 || embed_dim < 1 || conv_filters < 1 || conv_kernel < 1 || lstm_hidden < 1 || max_len < 1 ||
        batch_size < 1)
      throw ConfigError("rnn config: all sizes must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("rnn config: learning_rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
      throw ConfigError("rnn config: beta1 and beta2 must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("rnn config: epsilon must be positive");
    if (epochs < 0) throw ConfigError("rnn config: epochs must be >= 0");
  }

  friend bool operator==(const RNNConfig&, const RNNConfig&) = default;
};

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

template <typename T>
struct LSTMWeights {
  Matrix<T> input;      // F x 4H
  Matrix<T> recurrent;  // H x 4H
  RowVector<T> bias;    // 4H
};

template <typename T>
struct RNNParams {
  Matrix<T> embedding;  // (V + 1) x D, row 0 is the padding row
  Matrix<T> conv;       // (K * D) x F, row block k holds tap k
  RowVector<T> conv_bias;
  LSTMWeights<T> forward;
  LSTMWeights<T> backward;
  RowVector<T> dense;       // 2H, forward half first
  RowVector<T> dense_bias;  // 1

  static RNNParams zeros(const RNNConfig& c) {
    const auto V = static_cast<Eigen::Index>(c.vocab_size), D = static_cast<Eigen::Index>(c.embed_dim),
               F = static_cast<Eigen::Index>(c.conv_filters), K = static_cast<Eigen::Index>(c.conv_kernel),
               H = static_cast<Eigen::Index>(c.lstm_hidden);
    RNNParams p;
    p.embedding = Matrix<T>::Zero(V + 1, D);
    p.conv = Matrix<T>::Zero(K * D, F);
    p.conv_bias = RowVector<T>::Zero(F);
    for (auto* l : {&p.forward, &p.backward}) {
      l->input = Matrix<T>::Zero(F, 4 * H);
      l->recurrent = Matrix<T>::Zero(H, 4 * H);
      l->bias = RowVector<T>::Zero(4 * H);
    }
    p.dense = RowVector<T>::Zero(2 * H);
    p.dense_bias = RowVector<T>::Zero(1);
    return p;
  }

  // Every tensor in a fixed order, as (name, flat view).
  template <typename Self>
  static auto tensors_of(Self& self) {
    using Elem = std::conditional_t<std::is_const_v<Self>, const T, T>;
    using Entry = std::pair<std::string, std::span<Elem>>;
    std::vector<Entry> out;
    auto add = [&](const char* name, auto& m) {
      out.emplace_back(name, std::span<Elem>(m.data(), static_cast<std::size_t>(m.size())));
    };
    add("embedding", self.embedding);
    add("conv", self.conv);
    add("conv_bias", self.conv_bias);
    add("lstm_fwd_input", self.forward.input);
    add("lstm_fwd_recurrent", self.forward.recurrent);
    add("lstm_fwd_bias", self.forward.bias);
    add("lstm_bwd_input", self.backward.input);
    add("lstm_bwd_recurrent", self.backward.recurrent);
    add("lstm_bwd_bias", self.backward.bias);
    add("dense", self.dense);
    add("dense_bias", self.dense_bias);
    return out;
  }
  auto tensors() { return tensors_of(*this); }
  auto tensors() const { return tensors_of(*this); }
};

template <typename T>
struct AdamState {
  RNNParams<T> first;
  RNNParams<T> second;
  std::int64_t step = 0;
};

template <typename T>
struct RNNModel {
  RNNConfig config;
  RNNParams<T> params;
  AdamState<T> adam;

  // Parameters only; optimizer moments are not persisted.
  void write(BinaryWriter& w) const {
    w.put<std::uint8_t>(sizeof(T));
    for (const auto& [name, data] : params.tensors()) {
      w.put_string(name);
      w.put_array<T>(data);
    }
  }

  static RNNModel read(BinaryReader& r, const RNNConfig& config) {
    if (r.get<std::uint8_t>() != sizeof(T)) throw Error("rnn payload: scalar width mismatch");
    RNNModel m;
    m.config = config;
    m.params = RNNParams<T>::zeros(config);
    m.adam = {RNNParams<T>::zeros(config), RNNParams<T>::zeros(config), 0};
    for (auto& [name, data] : m.params.tensors()) {
      if (r.get_string() != name) throw Error("rnn payload: expected tensor '" + name + "'");
      const auto values = r.get_array<T>();
      if (values.size() != data.size()) throw Error("rnn payload: tensor '" + name + "' has the wrong size");
      std::ranges::copy(values, data.begin());
    }
    return m;
  }
};

namespace detail {

template <typename T>
void glorot_uniform(Matrix<T>& m, double fan_in, double fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(rng.uniform(-limit, limit));
}

template <typename T>
void glorot_uniform(RowVector<T>& m, double fan_in, double fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(rng.uniform(-limit, limit));
}

template <typename E>
auto sigmoid(const Eigen::ArrayBase<E>& x) {
  using S = typename E::Scalar;
  return (S(1) + (-x).exp()).inverse();
}

}  // namespace detail

template <typename T>
RNNModel<T> rnn_init(const RNNConfig& config) {
  config.validate();
  RNNModel<T> m;
  m.config = config;
  m.params = RNNParams<T>::zeros(config);
  m.adam = {RNNParams<T>::zeros(config), RNNParams<T>::zeros(config), 0};

  const double D = static_cast<double>(config.embed_dim), F = static_cast<double>(config.conv_filters),
               K = static_cast<double>(config.conv_kernel), H = static_cast<double>(config.lstm_hidden);
  const auto Hi = static_cast<Eigen::Index>(config.lstm_hidden);
  Rng rng(config.seed);
  auto& p = m.params;
  for (Eigen::Index i = 0; i < p.embedding.size(); ++i) p.embedding.data()[i] = static_cast<T>(rng.uniform(-0.05, 0.05));
  detail::glorot_uniform(p.conv, K * D, K * F, rng);
  for (auto* l : {&p.forward, &p.backward}) {
    detail::glorot_uniform(l->input, F, 4 * H, rng);
    detail::glorot_uniform(l->recurrent, H, 4 * H, rng);
    l->bias.segment(Hi, Hi).setOnes();  // forget gate
  }
  detail::glorot_uniform(p.dense, 2 * H, 1.0, rng);
  return m;
}

template <typename T>
struct LSTMTrace {
  Matrix<T> gates;  // (T*B) x 4H, post-activation, indexed by processing step
  Matrix<T> cell;   // (T*B) x H
  Matrix<T> hidden; // (T*B) x H
};

template <typename T>
struct RNNCache {
  std::vector<std::int32_t> tokens;  // B x T, row-major
  std::size_t batch = 0;
  std::size_t steps = 0;
  std::int64_t model_step = -1;  // optimizer step the forward pass saw
  Matrix<T> conv_pre;            // (T*B) x F
  Matrix<T> conv_out;            // (T*B) x F
  LSTMTrace<T> fwd;
  LSTMTrace<T> bwd;
  Matrix<T> features;  // B x 2H
  std::vector<T> probabilities;
};

template <typename T>
struct ForwardResult {
  std::vector<T> probabilities;
  RNNCache<T> cache;
};

namespace detail {

inline std::size_t conv_left_pad(std::size_t kernel) { return (kernel - 1) / 2; }

// (T*B) x (K*D) matrix of embedded windows, zero outside the sequence.
template <typename T>
Matrix<T> im2col(const RNNParams<T>& p, std::span<const std::int32_t> tokens, std::size_t B, std::size_t steps,
                 std::size_t K) {
  const auto D = p.embedding.cols();
  const std::size_t left = conv_left_pad(K);
  Matrix<T> col = Matrix<T>::Zero(static_cast<Eigen::Index>(steps * B), static_cast<Eigen::Index>(K) * D);
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t k = 0; k < K; ++k) {
        const auto src = static_cast<std::ptrdiff_t>(t + k) - static_cast<std::ptrdiff_t>(left);
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(steps)) continue;
        const auto id = tokens[b * steps + static_cast<std::size_t>(src)];
        col.block(static_cast<Eigen::Index>(t * B + b), static_cast<Eigen::Index>(k) * D, 1, D) = p.embedding.row(id);
      }
  return col;
}

// Runs one direction. Processing step s reads input time s (forward) or
// T-1-s (reverse); traces are stored by processing step.
template <typename T>
LSTMTrace<T> lstm_forward(const LSTMWeights<T>& w, const Matrix<T>& inputs, std::size_t B, std::size_t steps,
                          bool reverse) {
  const auto H = w.recurrent.rows();
  const auto Bi = static_cast<Eigen::Index>(B);
  LSTMTrace<T> tr;
  tr.gates.resize(static_cast<Eigen::Index>(steps) * Bi, 4 * H);
  tr.cell.resize(static_cast<Eigen::Index>(steps) * Bi, H);
  tr.hidden.resize(static_cast<Eigen::Index>(steps) * Bi, H);
  Matrix<T> h = Matrix<T>::Zero(Bi, H);
  Matrix<T> c = Matrix<T>::Zero(Bi, H);
  Matrix<T> z(Bi, 4 * H);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    const auto row = static_cast<Eigen::Index>(s) * Bi;
    z.noalias() = inputs.middleRows(static_cast<Eigen::Index>(t) * Bi, Bi) * w.input;
    z.noalias() += h * w.recurrent;
    z.rowwise() += w.bias;
    auto g = tr.gates.middleRows(row, Bi);
    g.leftCols(2 * H) = sigmoid(z.leftCols(2 * H).array()).matrix();
    g.middleCols(2 * H, H) = z.middleCols(2 * H, H).array().tanh().matrix();
    g.rightCols(H) = sigmoid(z.rightCols(H).array()).matrix();
    c = (g.middleCols(H, H).array() * c.array() + g.leftCols(H).array() * g.middleCols(2 * H, H).array()).matrix();
    h = (g.rightCols(H).array() * c.array().tanh()).matrix();
    tr.cell.middleRows(row, Bi) = c;
    tr.hidden.middleRows(row, Bi) = h;
  }
  return tr;
}

// Backpropagates d(final hidden) through one direction. Accumulates weight
// gradients into `grad` and input gradients into `d_inputs`.
template <typename T>
void lstm_backward(const LSTMWeights<T>& w, const LSTMTrace<T>& tr, const Matrix<T>& inputs, const Matrix<T>& d_last,
                   std::size_t B, std::size_t steps, bool reverse, LSTMWeights<T>& grad, Matrix<T>& d_inputs) {
  const auto H = w.recurrent.rows();
  const auto Bi = static_cast<Eigen::Index>(B);
  Matrix<T> dh = d_last;
  Matrix<T> dc = Matrix<T>::Zero(Bi, H);
  Matrix<T> dz(Bi, 4 * H);
  for (std::size_t s = steps; s-- > 0;) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    const auto row = static_cast<Eigen::Index>(s) * Bi;
    const auto g = tr.gates.middleRows(row, Bi).array();
    const auto i_g = g.leftCols(H), f_g = g.middleCols(H, H), c_g = g.middleCols(2 * H, H), o_g = g.rightCols(H);
    const auto tanh_c = tr.cell.middleRows(row, Bi).array().tanh().eval();
    Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> c_prev;
    if (s > 0)
      c_prev = tr.cell.middleRows(row - Bi, Bi).array();
    else
      c_prev = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(Bi, H);

    dc.array() += dh.array() * o_g * (T(1) - tanh_c.square());
    dz.rightCols(H) = (dh.array() * tanh_c * o_g * (T(1) - o_g)).matrix();
    dz.leftCols(H) = (dc.array() * c_g * i_g * (T(1) - i_g)).matrix();
    dz.middleCols(H, H) = (dc.array() * c_prev * f_g * (T(1) - f_g)).matrix();
    dz.middleCols(2 * H, H) = (dc.array() * i_g * (T(1) - c_g.square())).matrix();
    dc = (dc.array() * f_g).matrix();

    const auto x_rows = static_cast<Eigen::Index>(t) * Bi;
    grad.input.noalias() += inputs.middleRows(x_rows, Bi).transpose() * dz;
    if (s > 0) grad.recurrent.noalias() += tr.hidden.middleRows(row - Bi, Bi).transpose() * dz;
    grad.bias += dz.colwise().sum();
    d_inputs.middleRows(x_rows, Bi).noalias() += dz * w.input.transpose();
    dh.noalias() = dz * w.recurrent.transpose();
  }
}

}  // namespace detail

// Probabilities for every row of `batch`, plus the cache backward needs.
template <typename T>
ForwardResult<T> rnn_forward(const RNNModel<T>& model, const SequenceBatch& batch) {
  const auto& p = model.params;
  const auto& cfg = model.config;
  const std::size_t B = batch.rows, steps = batch.max_len;
  if (B == 0) throw Error("rnn_forward: empty batch");
  for (auto id : batch.data)
    if (id < 0 || static_cast<std::size_t>(id) > cfg.vocab_size)
      throw Error("rnn_forward: token index " + std::to_string(id) + " outside vocabulary of size " +
                  std::to_string(cfg.vocab_size));

  ForwardResult<T> out;
  auto& cache = out.cache;
  cache.tokens = batch.data;
  cache.batch = B;
  cache.steps = steps;
  cache.model_step = model.adam.step;

  {
    const Matrix<T> col = detail::im2col(p, batch.data, B, steps, cfg.conv_kernel);
    cache.conv_pre.noalias() = col * p.conv;
  }
  cache.conv_pre.rowwise() += p.conv_bias;
  cache.conv_out = cache.conv_pre.cwiseMax(T(0));

  cache.fwd = detail::lstm_forward(p.forward, cache.conv_out, B, steps, false);
  cache.bwd = detail::lstm_forward(p.backward, cache.conv_out, B, steps, true);

  const auto Bi = static_cast<Eigen::Index>(B);
  const auto H = static_cast<Eigen::Index>(cfg.lstm_hidden);
  const auto last = static_cast<Eigen::Index>(steps - 1) * Bi;
  cache.features.resize(Bi, 2 * H);
  cache.features.leftCols(H) = cache.fwd.hidden.middleRows(last, Bi);
  cache.features.rightCols(H) = cache.bwd.hidden.middleRows(last, Bi);

  const Eigen::Matrix<T, Eigen::Dynamic, 1> logits = cache.features * p.dense.transpose();
  out.probabilities.resize(B);
  for (std::size_t b = 0; b < B; ++b)
    out.probabilities[b] = T(1) / (T(1) + std::exp(-(logits(static_cast<Eigen::Index>(b)) + p.dense_bias(0))));
  cache.probabilities = out.probabilities;
  return out;
}

inline constexpr double kProbabilityClamp = 1e-7;

// Mean binary cross-entropy with probabilities clamped to [1e-7, 1 - 1e-7].
template <typename T>
double bce_loss(std::span<const T> probabilities, std::span<const std::uint8_t> targets) {
  if (probabilities.size() != targets.size() || targets.empty())
    throw Error("bce_loss: need equal, non-zero numbers of probabilities and targets");
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double pr = std::clamp(static_cast<double>(probabilities[i]), kProbabilityClamp, 1.0 - kProbabilityClamp);
    sum -= targets[i] ? std::log(pr) : std::log(1.0 - pr);
  }
  return sum / static_cast<double>(targets.size());
}

// Gradients of the mean BCE with respect to every parameter tensor. The
// logit gradient is (p - y) / B; the clamp only guards the loss value.
template <typename T>
RNNParams<T> rnn_backward(const RNNModel<T>& model, const RNNCache<T>& cache, std::span<const std::uint8_t> targets) {
  const auto& p = model.params;
  const auto& cfg = model.config;
  if (cache.model_step != model.adam.step || cache.probabilities.size() != cache.batch ||
      cache.tokens.size() != cache.batch * cache.steps || cache.conv_out.cols() != static_cast<Eigen::Index>(cfg.conv_filters))
    throw Error("rnn_backward: cache does not belong to this model state");
  if (targets.size() != cache.batch)
    throw Error("rnn_backward: " + std::to_string(targets.size()) + " targets for a batch of " +
                std::to_string(cache.batch));

  const std::size_t B = cache.batch, steps = cache.steps;
  const auto Bi = static_cast<Eigen::Index>(B);
  const auto H = static_cast<Eigen::Index>(cfg.lstm_hidden);
  RNNParams<T> g = RNNParams<T>::zeros(cfg);

  Eigen::Matrix<T, Eigen::Dynamic, 1> d_logit(Bi);
  for (std::size_t b = 0; b < B; ++b)
    d_logit(static_cast<Eigen::Index>(b)) = (cache.probabilities[b] - T(targets[b])) / static_cast<T>(B);
  g.dense = (cache.features.transpose() * d_logit).transpose();
  g.dense_bias(0) = d_logit.sum();
  const Matrix<T> d_features = d_logit * p.dense;

  Matrix<T> d_conv_out = Matrix<T>::Zero(cache.conv_out.rows(), cache.conv_out.cols());
  detail::lstm_backward(p.forward, cache.fwd, cache.conv_out, Matrix<T>(d_features.leftCols(H)), B, steps, false,
                        g.forward, d_conv_out);
  detail::lstm_backward(p.backward, cache.bwd, cache.conv_out, Matrix<T>(d_features.rightCols(H)), B, steps, true,
                        g.backward, d_conv_out);

  const Matrix<T> d_pre = (cache.conv_pre.array() > T(0)).select(d_conv_out, T(0));
  g.conv_bias = d_pre.colwise().sum();
  const Matrix<T> col = detail::im2col(p, cache.tokens, B, steps, cfg.conv_kernel);
  g.conv.noalias() = col.transpose() * d_pre;
  const Matrix<T> d_col = d_pre * p.conv.transpose();

  const auto D = static_cast<Eigen::Index>(cfg.embed_dim);
  const std::size_t K = cfg.conv_kernel, left = detail::conv_left_pad(K);
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t k = 0; k < K; ++k) {
        const auto src = static_cast<std::ptrdiff_t>(t + k) - static_cast<std::ptrdiff_t>(left);
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(steps)) continue;
        const auto id = cache.tokens[b * steps + static_cast<std::size_t>(src)];
        g.embedding.row(id) += d_col.block(static_cast<Eigen::Index>(t * B + b), static_cast<Eigen::Index>(k) * D, 1, D);
      }
  return g;
}

// Adam with bias correction.
template <typename T>
void adam_step(RNNModel<T>& model, const RNNParams<T>& grads) {
  auto params = model.params.tensors();
  auto first = model.adam.first.tensors();
  auto second = model.adam.second.tensors();
  const auto gs = grads.tensors();
  for (std::size_t k = 0; k < params.size(); ++k)
    if (gs[k].second.size() != params[k].second.size())
      throw Error("adam_step: gradient '" + gs[k].first + "' has " + std::to_string(gs[k].second.size()) +
                  " entries, parameter has " + std::to_string(params[k].second.size()));

  const auto& c = model.config;
  const std::int64_t step = ++model.adam.step;
  const double correct1 = 1.0 - std::pow(c.beta1, static_cast<double>(step));
  const double correct2 = 1.0 - std::pow(c.beta2, static_cast<double>(step));
  const T b1 = static_cast<T>(c.beta1), b2 = static_cast<T>(c.beta2);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto theta = params[k].second;
    auto m = first[k].second;
    auto v = second[k].second;
    auto g = gs[k].second;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = b1 * m[i] + (T(1) - b1) * g[i];
      v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
      const double m_hat = static_cast<double>(m[i]) / correct1;
      const double v_hat = static_cast<double>(v[i]) / correct2;
      theta[i] -= static_cast<T>(c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon));
    }
  }
}

// Probabilities in chunks of config.batch_size.
template <typename T>
std::vector<T> rnn_probabilities(const RNNModel<T>& model, const SequenceBatch& batch) {
  std::vector<T> out;
  out.reserve(batch.rows);
  const std::size_t chunk = std::max<std::size_t>(1, model.config.batch_size);
  for (std::size_t start = 0; start < batch.rows; start += chunk) {
    std::vector<std::size_t> idx(std::min(chunk, batch.rows - start));
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = start + k;
    const auto res = rnn_forward(model, batch.select(idx));
    out.insert(out.end(), res.probabilities.begin(), res.probabilities.end());
  }
  return out;
}

// Label 1 iff probability > threshold.
template <typename T>
std::vector<std::uint8_t> rnn_predict(const RNNModel<T>& model, const SequenceBatch& batch, double threshold = 0.5) {
  std::vector<std::uint8_t> labels;
  for (T p : rnn_probabilities(model, batch)) labels.push_back(static_cast<double>(p) > threshold ? 1 : 0);
  return labels;
}

struct FitHistory {
  std::vector<double> mean_bce;  // one entry per epoch
};

// Seeded per-epoch shuffle, mini-batches of config.batch_size; the history
// holds the sample-weighted mean of the batch losses seen in each epoch.
template <typename T>
FitHistory rnn_fit(RNNModel<T>& model, const SequenceBatch& data, std::span<const std::uint8_t> labels,
                   const std::function<void(int epoch, double loss)>& on_epoch = {}) {
  if (data.rows == 0) throw Error("rnn_fit: empty training set");
  if (labels.size() != data.rows) throw Error("rnn_fit: label count does not match the number of sequences");
  const auto& cfg = model.config;
  FitHistory history;
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  auto order = iota_indices(data.rows);
  std::vector<std::uint8_t> batch_labels;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t n = std::min(cfg.batch_size, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, n);
      batch_labels.clear();
      for (auto i : idx) batch_labels.push_back(labels[i]);
      const auto fwd = rnn_forward(model, data.select(idx));
      loss_sum += bce_loss<T>(fwd.probabilities, batch_labels) * static_cast<double>(n);
      adam_step(model, rnn_backward(model, fwd.cache, batch_labels));
    }
    history.mean_bce.push_back(loss_sum / static_cast<double>(data.rows));
    if (on_epoch) on_epoch(epoch, history.mean_bce.back());
  }
  return history;
}

}  // namespace mbti
