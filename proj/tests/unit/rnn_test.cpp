#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <utility>

#include "mbti/rnn.hpp"
#include "oracles.hpp"

using namespace mbti;

namespace {

SequenceBatch random_batch(Rng& rng, std::size_t rows, std::size_t len, std::size_t vocab) {
  SequenceBatch b(rows, len);
  for (auto& v : b.data) v = static_cast<std::int32_t>(rng.below(vocab + 1));
  return b;
}

template <typename T>
std::vector<std::uint8_t> param_bytes(const RNNModel<T>& m) {
  BinaryWriter w;
  m.write(w);
  return w.bytes();
}

template <typename T>
bool all_finite(const Matrix<T>& m) {
  return m.array().isFinite().all();
}

}  // namespace

TEST(RNNInit, DeterministicPerSeed) {
  auto c = oracle::tiny_rnn_config(4);
  EXPECT_EQ(param_bytes(rnn_init<double>(c)), param_bytes(rnn_init<double>(c)));
  c.seed = 5;
  EXPECT_NE(param_bytes(rnn_init<double>(c)), param_bytes(rnn_init<double>(oracle::tiny_rnn_config(4))));
}

TEST(RNNInit, ShapesAndBiases) {
  RNNConfig c;
  c.vocab_size = 10;
  c.embed_dim = 4;
  c.conv_filters = 3;
  c.conv_kernel = 5;
  c.lstm_hidden = 2;
  const auto m = rnn_init<double>(c);
  EXPECT_EQ(m.params.embedding.rows(), 11);
  EXPECT_EQ(m.params.embedding.cols(), 4);
  EXPECT_EQ(m.params.conv.rows(), 20);
  EXPECT_EQ(m.params.conv.cols(), 3);
  EXPECT_EQ(m.params.forward.input.rows(), 3);
  EXPECT_EQ(m.params.forward.input.cols(), 8);
  EXPECT_EQ(m.params.forward.recurrent.rows(), 2);
  EXPECT_EQ(m.params.dense.size(), 4);
  for (const auto* l : {&m.params.forward, &m.params.backward})
    for (int j = 0; j < 8; ++j) EXPECT_EQ(l->bias(j), (j >= 2 && j < 4) ? 1.0 : 0.0) << j;
  EXPECT_TRUE((m.params.embedding.array().abs() <= 0.05).all());
  const double conv_limit = std::sqrt(6.0 / (5 * 4 + 5 * 3));
  EXPECT_TRUE((m.params.conv.array().abs() <= conv_limit).all());
  EXPECT_TRUE((m.params.conv_bias.array() == 0).all());
  EXPECT_EQ(m.adam.step, 0);
}

TEST(RNNInit, InvalidConfigRejected) {
  auto c = oracle::tiny_rnn_config(0);
  c.lstm_hidden = 0;
  EXPECT_THROW(rnn_init<double>(c), ConfigError);
  c = oracle::tiny_rnn_config(0);
  c.beta1 = 1.0;
  EXPECT_THROW(rnn_init<double>(c), ConfigError);
  c = oracle::tiny_rnn_config(0);
  c.learning_rate = 0;
  EXPECT_THROW(rnn_init<double>(c), ConfigError);
}

TEST(RNNForward, DefaultShapes) {
  RNNConfig c;
  c.vocab_size = 50;
  const auto m = rnn_init<double>(c);
  EXPECT_EQ(m.params.embedding.cols(), 256);
  Rng rng(1);
  const auto b = random_batch(rng, 2, 200, 50);
  const auto r = rnn_forward(m, b);
  EXPECT_EQ(r.cache.batch, 2u);
  EXPECT_EQ(r.cache.steps, 200u);
  EXPECT_EQ(r.cache.conv_out.rows(), 400);  // (time, batch) rows
  EXPECT_EQ(r.cache.conv_out.cols(), 64);
  EXPECT_EQ(r.cache.features.rows(), 2);
  EXPECT_EQ(r.cache.features.cols(), 128);
  ASSERT_EQ(r.probabilities.size(), 2u);
  for (double p : r.probabilities) {
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
}

TEST(RNNForward, IdenticalRowsAndPaddingRows) {
  const auto m = rnn_init<double>(oracle::tiny_rnn_config(2));
  SequenceBatch b(3, 4);
  b.data = {0, 0, 0, 0, 3, 1, 4, 1, 3, 1, 4, 1};
  const auto p = rnn_forward(m, b).probabilities;
  EXPECT_EQ(p[1], p[2]);
  SequenceBatch pad(1, 4);
  EXPECT_EQ(rnn_forward(m, pad).probabilities[0], p[0]);
}

TEST(RNNForward, OutOfRangeTokenThrows) {
  const auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  SequenceBatch b(1, 4);
  b.data = {0, 8, 1, 1};
  EXPECT_THROW(rnn_forward(m, b), Error);
  b.data = {0, -1, 1, 1};
  EXPECT_THROW(rnn_forward(m, b), Error);
  b.data = {0, 7, 1, 1};
  EXPECT_NO_THROW(rnn_forward(m, b));
}

TEST(RNNForward, PermutationEquivariant) {
  const auto m = rnn_init<double>(oracle::tiny_rnn_config(3));
  Rng rng(10);
  const auto b = random_batch(rng, 6, 4, 7);
  const auto p = rnn_forward(m, b).probabilities;
  std::vector<std::size_t> perm{4, 2, 5, 0, 1, 3};
  const auto q = rnn_forward(m, b.select(perm)).probabilities;
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(q[i], p[perm[i]]);
}

TEST(RNNForward, StatesFiniteOnRandomDefaultBatches) {
  RNNConfig c;
  c.vocab_size = 500;
  const auto m = rnn_init<double>(c);
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const auto b = random_batch(rng, 2, c.max_len, c.vocab_size);
    const auto r = rnn_forward(m, b);
    ASSERT_TRUE(all_finite(r.cache.fwd.hidden) && all_finite(r.cache.fwd.cell)) << "batch " << i;
    ASSERT_TRUE(all_finite(r.cache.bwd.hidden) && all_finite(r.cache.bwd.cell)) << "batch " << i;
    for (double p : r.probabilities) ASSERT_TRUE(std::isfinite(p));
  }
}

TEST(RNNBackward, DenseGradientIdentity) {
  const auto m = rnn_init<double>(oracle::tiny_rnn_config(1));
  SequenceBatch b(1, 4);
  b.data = {2, 5, 0, 7};
  const auto fwd = rnn_forward(m, b);
  for (std::uint8_t y : {0, 1}) {
    const std::vector<std::uint8_t> t{y};
    const auto g = rnn_backward(m, fwd.cache, t);
    const double d = fwd.probabilities[0] - y;
    for (Eigen::Index j = 0; j < g.dense.size(); ++j) EXPECT_NEAR(g.dense(j), d * fwd.cache.features(0, j), 1e-15);
    EXPECT_NEAR(g.dense_bias(0), d, 1e-15);
  }
}

TEST(RNNBackward, MatchesFiniteDifferencesAcrossSeeds) {
  // Pure relative error, same batch recipe as the acceptance run.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = rnn_init<double>(oracle::tiny_rnn_config(seed));
    Rng rng(seed);
    SequenceBatch b(3, 4);
    for (auto& v : b.data) v = static_cast<std::int32_t>(rng.below(8));
    const std::vector<std::uint8_t> y{1, 0, 1};
    const auto g = rnn_backward(m, rnn_forward(m, b).cache, y);
    const auto check = oracle::rnn_finite_difference(m, b, y, g);
    EXPECT_LT(check.max_rel_error, 1e-4) << "seed " << seed << " worst in " << check.worst_tensor;
    EXPECT_GT(check.entries, 100u);
  }
}

TEST(RNNBackward, MatchesFiniteDifferencesOnOtherBatches) {
  // Entries near 1e-13 sit inside the differencing noise, hence the 1e-9 floor.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = rnn_init<double>(oracle::tiny_rnn_config(seed));
    Rng rng(seed + 500);
    const auto b = random_batch(rng, 3, 4, 7);
    const std::vector<std::uint8_t> y{0, 1, 1};
    const auto g = rnn_backward(m, rnn_forward(m, b).cache, y);
    const auto check = oracle::rnn_finite_difference(m, b, y, g, 1e-5L, 1e-9);
    EXPECT_LT(check.max_rel_error, 1e-4) << "seed " << seed << " worst in " << check.worst_tensor;
  }
}

TEST(RNNBackward, UntouchedEmbeddingRowsAreZero) {
  const auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  SequenceBatch b(2, 4);
  b.data = {1, 3, 3, 0, 0, 1, 6, 6};
  const auto g = rnn_backward(m, rnn_forward(m, b).cache, std::vector<std::uint8_t>{1, 0});
  for (Eigen::Index row : {2, 4, 5, 7}) EXPECT_TRUE((g.embedding.row(row).array() == 0.0).all()) << row;
}

TEST(RNNBackward, GradientShapesMatchParameters) {
  const auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  SequenceBatch b(2, 4);
  const auto g = rnn_backward(m, rnn_forward(m, b).cache, std::vector<std::uint8_t>{1, 0});
  const auto gt = g.tensors();
  const auto pt = m.params.tensors();
  ASSERT_EQ(gt.size(), pt.size());
  for (std::size_t k = 0; k < gt.size(); ++k) {
    EXPECT_EQ(gt[k].first, pt[k].first);
    EXPECT_EQ(gt[k].second.size(), pt[k].second.size());
  }
}

TEST(RNNBackward, StaleOrMismatchedCacheRejected) {
  auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  SequenceBatch b(2, 4);
  const auto fwd = rnn_forward(m, b);
  const std::vector<std::uint8_t> y{1, 0};
  EXPECT_THROW(rnn_backward(m, fwd.cache, std::vector<std::uint8_t>{1}), Error);
  adam_step(m, rnn_backward(m, fwd.cache, y));
  EXPECT_THROW(rnn_backward(m, fwd.cache, y), Error);
  auto other_cfg = oracle::tiny_rnn_config(0);
  other_cfg.conv_filters = 3;
  const auto other = rnn_init<double>(other_cfg);
  EXPECT_THROW(rnn_backward(other, rnn_forward(m, b).cache, y), Error);
}

TEST(Adam, ZeroGradientLeavesParametersAndDecaysMoments) {
  auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  SequenceBatch b(2, 4);
  b.data = {1, 2, 3, 4, 5, 6, 7, 1};
  adam_step(m, rnn_backward(m, rnn_forward(m, b).cache, std::vector<std::uint8_t>{1, 0}));
  const auto before = m;
  adam_step(m, RNNParams<double>::zeros(m.config));
  EXPECT_EQ(m.adam.step, 2);
  const auto p0 = before.params.tensors();
  const auto p1 = std::as_const(m).params.tensors();
  const auto m0 = before.adam.first.tensors();
  const auto m1 = std::as_const(m).adam.first.tensors();
  const auto v0 = before.adam.second.tensors();
  const auto v1 = std::as_const(m).adam.second.tensors();
  for (std::size_t k = 0; k < p0.size(); ++k)
    for (std::size_t i = 0; i < p0[k].second.size(); ++i) {
      EXPECT_DOUBLE_EQ(m1[k].second[i], 0.9 * m0[k].second[i]);
      EXPECT_DOUBLE_EQ(v1[k].second[i], 0.999 * v0[k].second[i]);
      if (m0[k].second[i] == 0.0) {
        EXPECT_EQ(p1[k].second[i], p0[k].second[i]);
      }
    }
  auto fresh = rnn_init<double>(oracle::tiny_rnn_config(0));
  const auto bytes = param_bytes(fresh);
  adam_step(fresh, RNNParams<double>::zeros(fresh.config));
  EXPECT_EQ(param_bytes(fresh), bytes);
}

TEST(Adam, FirstStepClosedForm) {
  auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  const auto before = m.params;
  auto g = RNNParams<double>::zeros(m.config);
  Rng rng(4);
  for (auto& [name, data] : g.tensors())
    for (auto& v : data) v = rng.uniform(-2.0, 2.0);
  adam_step(m, g);
  const auto p0 = before.tensors();
  const auto p1 = std::as_const(m).params.tensors();
  const auto gt = std::as_const(g).tensors();
  for (std::size_t k = 0; k < p0.size(); ++k)
    for (std::size_t i = 0; i < p0[k].second.size(); ++i) {
      const double gi = gt[k].second[i];
      const double expected = -1e-3 * gi / (std::abs(gi) + 1e-8);
      EXPECT_NEAR(p1[k].second[i] - p0[k].second[i], expected, 1e-15);
      EXPECT_NEAR(std::abs(p1[k].second[i] - p0[k].second[i]), 1e-3, 1e-8);
    }
}

TEST(Adam, ShapeMismatchRejected) {
  auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  auto c = m.config;
  c.lstm_hidden = 3;
  EXPECT_THROW(adam_step(m, RNNParams<double>::zeros(c)), Error);
  EXPECT_EQ(m.adam.step, 0);
}

TEST(RNNFit, DeterministicTrajectories) {
  auto c = oracle::tiny_rnn_config(6);
  c.batch_size = 3;
  c.epochs = 5;
  Rng rng(2);
  const auto b = random_batch(rng, 7, 4, 7);
  const std::vector<std::uint8_t> y{1, 0, 0, 1, 1, 0, 1};
  auto m1 = rnn_init<double>(c), m2 = rnn_init<double>(c);
  const auto h1 = rnn_fit(m1, b, y), h2 = rnn_fit(m2, b, y);
  EXPECT_EQ(h1.mean_bce, h2.mean_bce);
  EXPECT_EQ(param_bytes(m1), param_bytes(m2));
  EXPECT_EQ(m1.adam.step, 15);
}

TEST(RNNFit, ZeroEpochsLeavesModelUnchanged) {
  auto c = oracle::tiny_rnn_config(0);
  c.epochs = 0;
  auto m = rnn_init<double>(c);
  const auto bytes = param_bytes(m);
  SequenceBatch b(2, 4);
  EXPECT_TRUE(rnn_fit(m, b, std::vector<std::uint8_t>{1, 0}).mean_bce.empty());
  EXPECT_EQ(param_bytes(m), bytes);
}

TEST(RNNFit, Errors) {
  auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  EXPECT_THROW(rnn_fit(m, SequenceBatch(0, 4), std::vector<std::uint8_t>{}), Error);
  EXPECT_THROW(rnn_fit(m, SequenceBatch(2, 4), std::vector<std::uint8_t>{1}), Error);
}

TEST(RNNFit, OverfitsEightSamples) {
  auto c = oracle::tiny_rnn_config(1);
  c.batch_size = 8;
  c.epochs = 500;
  c.learning_rate = 0.01;
  auto m = rnn_init<double>(c);
  Rng rng(8);
  SequenceBatch b(8, 4);
  for (auto& v : b.data) v = static_cast<std::int32_t>(1 + rng.below(7));
  const std::vector<std::uint8_t> y{0, 1, 1, 0, 1, 0, 0, 1};
  const auto h = rnn_fit(m, b, y);
  ASSERT_EQ(h.mean_bce.size(), 500u);
  EXPECT_LT(h.mean_bce.back(), h.mean_bce.front());
  EXPECT_LT(bce_loss<double>(rnn_probabilities(m, b), y), 0.05);
  EXPECT_EQ(rnn_predict(m, b), y);
}

TEST(RNNPredict, Thresholds) {
  auto m = rnn_init<double>(oracle::tiny_rnn_config(0));
  m.params.dense.setZero();
  SequenceBatch b(1, 4);
  m.params.dense_bias(0) = 0.0;  // p = 0.5 exactly
  EXPECT_EQ(rnn_probabilities(m, b)[0], 0.5);
  EXPECT_EQ(rnn_predict(m, b)[0], 0);
  EXPECT_EQ(rnn_predict(m, b, 0.0)[0], 1);
  m.params.dense_bias(0) = std::log(9.0);  // p = 0.9
  EXPECT_NEAR(rnn_probabilities(m, b)[0], 0.9, 1e-12);
  EXPECT_EQ(rnn_predict(m, b)[0], 1);
  EXPECT_EQ(rnn_predict(m, b, 0.95)[0], 0);
}

TEST(BCE, ClampsProbabilities) {
  const std::vector<double> p{0.0, 1.0};
  EXPECT_NEAR(bce_loss<double>(p, std::vector<std::uint8_t>{1, 0}), -std::log(1e-7), 1e-9);
  EXPECT_NEAR(bce_loss<double>(p, std::vector<std::uint8_t>{0, 1}), -std::log(1 - 1e-7), 1e-12);
  EXPECT_THROW(bce_loss<double>(p, std::vector<std::uint8_t>{1}), Error);
}

TEST(RNNModel, SerialisationPreservesPredictions) {
  Rng rng(5);
  const auto b = random_batch(rng, 5, 4, 7);
  auto check = [&](auto tag) {
    using T = decltype(tag);
    const auto m = rnn_init<T>(oracle::tiny_rnn_config(9));
    BinaryWriter w;
    m.write(w);
    BinaryReader r(w.bytes());
    const auto back = RNNModel<T>::read(r, m.config);
    EXPECT_TRUE(r.done());
    const auto p = rnn_probabilities(m, b), q = rnn_probabilities(back, b);
    ASSERT_EQ(p.size(), q.size());
    EXPECT_EQ(0, std::memcmp(p.data(), q.data(), p.size() * sizeof(T)));
  };
  check(double{});
  check(float{});
}

TEST(RNNModel, FloatTracksDouble) {
  const auto cfg = oracle::tiny_rnn_config(2);
  const auto md = rnn_init<double>(cfg);
  const auto mf = rnn_init<float>(cfg);
  Rng rng(6);
  const auto b = random_batch(rng, 4, 4, 7);
  const auto pd = rnn_probabilities(md, b);
  const auto pf = rnn_probabilities(mf, b);
  for (std::size_t i = 0; i < pd.size(); ++i) EXPECT_NEAR(pd[i], pf[i], 1e-5);
}
