#include <gtest/gtest.h>

#include <cmath>

#include "mbti/metrics.hpp"
#include "mbti/random.hpp"
#include "oracles.hpp"

using namespace mbti;

namespace {
using Labels = std::vector<std::uint8_t>;
}

TEST(Confusion, Example) {
  const auto cm = confusion(Labels{1, 1, 0, 0}, Labels{1, 0, 1, 0});
  EXPECT_EQ(cm, (Confusion2x2{1, 1, 1, 1}));
  EXPECT_EQ(cm.total(), 4u);
}

TEST(Confusion, Errors) {
  EXPECT_THROW(confusion(Labels{1, 0}, Labels{1}), Error);
  EXPECT_THROW(confusion(Labels{}, Labels{}), Error);
  EXPECT_THROW(report(Confusion2x2{}), Error);
}

TEST(Report, PositiveClassExample) {
  // tp=2 fp=0 fn=1 tn=1
  const auto r = report(Confusion2x2{2, 0, 1, 1});
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 1.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].f1, 0.8);
  EXPECT_EQ(r.per_class[1].support, 3u);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(r.per_class[0].precision, 0.5);
  EXPECT_DOUBLE_EQ(r.per_class[0].recall, 1.0);
  EXPECT_NEAR(r.macro.f1, (0.8 + 2.0 / 3.0) / 2.0, 1e-15);
  EXPECT_NEAR(r.weighted.f1, 0.75 * 0.8 + 0.25 * (2.0 / 3.0), 1e-15);
}

TEST(Report, PerfectPredictions) {
  const auto r = report(confusion(Labels{1, 0, 1, 1, 0}, Labels{1, 0, 1, 1, 0}));
  EXPECT_EQ(r.accuracy, 1.0);
  for (const auto& c : r.per_class) {
    EXPECT_EQ(c.precision, 1.0);
    EXPECT_EQ(c.recall, 1.0);
    EXPECT_EQ(c.f1, 1.0);
  }
  EXPECT_EQ(r.macro.f1, 1.0);
  EXPECT_EQ(r.weighted.f1, 1.0);
}

TEST(Report, UndefinedRatiosAreZeroAndFlagged) {
  // Always predicts 0 on data with positives: class-1 precision is 0/0.
  const auto r = report(confusion(Labels{1, 0, 0}, Labels{0, 0, 0}));
  EXPECT_TRUE(r.per_class[1].precision_undefined);
  EXPECT_EQ(r.per_class[1].precision, 0.0);
  EXPECT_FALSE(r.per_class[1].recall_undefined);
  EXPECT_EQ(r.per_class[1].recall, 0.0);
  EXPECT_TRUE(r.per_class[1].f1_undefined);
  EXPECT_FALSE(r.per_class[0].precision_undefined);

  const auto none = report(confusion(Labels{0, 0}, Labels{0, 0}));
  EXPECT_TRUE(none.per_class[1].precision_undefined);
  EXPECT_TRUE(none.per_class[1].recall_undefined);
  EXPECT_EQ(none.per_class[1].support, 0u);
  EXPECT_EQ(none.weighted.f1, 1.0);
  EXPECT_EQ(none.macro.f1, 0.5);
}

TEST(Report, RelabellingSwapsClasses) {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = 1 + rng.below(30);
    Labels t, p, tf, pf;
    for (std::uint64_t i = 0; i < n; ++i) {
      t.push_back(static_cast<std::uint8_t>(rng.below(2)));
      p.push_back(static_cast<std::uint8_t>(rng.below(2)));
      tf.push_back(1 - t.back());
      pf.push_back(1 - p.back());
    }
    const auto a = report(confusion(t, p)), b = report(confusion(tf, pf));
    EXPECT_DOUBLE_EQ(a.accuracy, b.accuracy);
    for (int c = 0; c < 2; ++c) {
      EXPECT_DOUBLE_EQ(a.per_class[c].precision, b.per_class[1 - c].precision);
      EXPECT_DOUBLE_EQ(a.per_class[c].recall, b.per_class[1 - c].recall);
      EXPECT_DOUBLE_EQ(a.per_class[c].f1, b.per_class[1 - c].f1);
    }
    EXPECT_NEAR(a.macro.f1, b.macro.f1, 1e-15);
    EXPECT_NEAR(a.weighted.f1, b.weighted.f1, 1e-15);
    for (double v : {a.accuracy, a.macro.f1, a.weighted.f1, a.per_class[0].f1, a.per_class[1].f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(ExactMatch, Examples) {
  const std::array<Labels, 4> trues{Labels{1, 0}, Labels{1, 1}, Labels{0, 0}, Labels{1, 0}};
  EXPECT_EQ(exact_match_16(trues, trues), 1.0);
  auto one_off = trues;
  one_off[2][1] = 1;
  EXPECT_EQ(exact_match_16(one_off, trues), 0.5);
  std::array<Labels, 4> all_wrong;
  for (int d = 0; d < 4; ++d)
    for (auto v : trues[d]) all_wrong[d].push_back(1 - v);
  EXPECT_EQ(exact_match_16(all_wrong, trues), 0.0);
  auto short_pred = trues;
  short_pred[3].pop_back();
  EXPECT_THROW(exact_match_16(short_pred, trues), Error);
}

TEST(ExactMatch, BoundedByWorstDimension) {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 1 + rng.below(25);
    std::array<Labels, 4> t, p;
    double min_acc = 1.0;
    for (int d = 0; d < 4; ++d) {
      for (std::uint64_t i = 0; i < n; ++i) {
        t[d].push_back(static_cast<std::uint8_t>(rng.below(2)));
        p[d].push_back(rng.below(4) == 0 ? 1 - t[d].back() : t[d].back());
      }
      min_acc = std::min(min_acc, report(confusion(t[d], p[d])).accuracy);
    }
    EXPECT_LE(exact_match_16(p, t), min_acc + 1e-15);
  }
}

TEST(ExactMatch, IndependentErrorsMultiplyAccuracies) {
  Rng rng(3);
  const std::array<double, 4> acc{0.9, 0.8, 0.7, 0.95};
  const std::size_t n = 100000;
  std::array<Labels, 4> preds, trues;
  const double direct = oracle::exact_match_monte_carlo(acc, n, rng, preds, trues);
  const double expected = acc[0] * acc[1] * acc[2] * acc[3];
  const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(n));
  EXPECT_DOUBLE_EQ(exact_match_16(preds, trues), direct);
  EXPECT_NEAR(exact_match_16(preds, trues), expected, 3 * sigma);
}
