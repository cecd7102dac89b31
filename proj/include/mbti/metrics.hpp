#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace mbti {

struct Confusion2x2 {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion2x2&, const Confusion2x2&) = default;
};

inline Confusion2x2 confusion(std::span<const std::uint8_t> y_true, std::span<const std::uint8_t> y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error("confusion: " + std::to_string(y_true.size()) + " true labels vs " + std::to_string(y_pred.size()) +
                " predictions");
  if (y_true.empty()) throw Error("confusion: no samples");
  Confusion2x2 cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] != 0, p = y_pred[i] != 0;
    if (t && p) ++cm.tp;
    else if (!t && !p) ++cm.tn;
    else if (p) ++cm.fp;
    else ++cm.fn;
  }
  return cm;
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  // Set when the ratio was 0/0 and reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct AveragedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::array<ClassMetrics, 2> per_class;  // index = label
  double accuracy = 0.0;
  AveragedMetrics macro;
  AveragedMetrics weighted;  // weights are class supports
  Confusion2x2 cm;
};

namespace detail {

inline double safe_ratio(std::size_t num, std::size_t den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Metrics for the class whose "positive" counts are given.
inline ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.precision = safe_ratio(tp, tp + fp, m.precision_undefined);
  m.recall = safe_ratio(tp, tp + fn, m.recall_undefined);
  const double sum = m.precision + m.recall;
  m.f1_undefined = sum == 0.0;
  m.f1 = m.f1_undefined ? 0.0 : 2.0 * m.precision * m.recall / sum;
  m.support = tp + fn;
  return m;
}

}  // namespace detail

inline EvalReport report(const Confusion2x2& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw Error("report: empty confusion matrix");
  EvalReport r;
  r.cm = cm;
  r.per_class[1] = detail::class_metrics(cm.tp, cm.fp, cm.fn);
  r.per_class[0] = detail::class_metrics(cm.tn, cm.fn, cm.fp);
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);

  const auto n = static_cast<double>(total);
  for (const auto& c : r.per_class) {
    r.macro.precision += c.precision / 2.0;
    r.macro.recall += c.recall / 2.0;
    r.macro.f1 += c.f1 / 2.0;
    const double w = static_cast<double>(c.support) / n;
    r.weighted.precision += w * c.precision;
    r.weighted.recall += w * c.recall;
    r.weighted.f1 += w * c.f1;
  }
  return r;
}

// Fraction of samples whose four dimension predictions are all correct,
// i.e. the accuracy of the composed 4-letter codes.
inline double exact_match_16(const std::array<std::vector<std::uint8_t>, 4>& preds,
                             const std::array<std::vector<std::uint8_t>, 4>& trues) {
  const std::size_t n = trues[0].size();
  for (std::size_t d = 0; d < 4; ++d)
    if (preds[d].size() != n || trues[d].size() != n) throw Error("exact_match_16: length mismatch across dimensions");
  if (n == 0) throw Error("exact_match_16: no samples");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool all = true;
    for (std::size_t d = 0; d < 4 && all; ++d) all = (preds[d][i] != 0) == (trues[d][i] != 0);
    hits += all ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace mbti
