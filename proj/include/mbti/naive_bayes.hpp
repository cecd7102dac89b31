#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "binary_io.hpp"
#include "error.hpp"
#include "features.hpp"

namespace mbti {

// Multinomial Naive Bayes over two classes with additive smoothing.
struct NBModel {
  std::array<double, 2> log_prior{};
  // log_likelihood[c][j] is ln P(term j+1 | class c).
  std::array<std::vector<double>, 2> log_likelihood;
  double alpha = 1.0;
  std::size_t n_terms = 0;

  void write(BinaryWriter& w) const {
    w.put(alpha);
    w.put<std::uint64_t>(n_terms);
    for (double p : log_prior) w.put(p);
    for (const auto& ll : log_likelihood) w.put_array<double>(ll);
  }

  static NBModel read(BinaryReader& r) {
    NBModel m;
    m.alpha = r.get<double>();
    m.n_terms = r.get<std::uint64_t>();
    for (double& p : m.log_prior) p = r.get<double>();
    for (auto& ll : m.log_likelihood) {
      ll = r.get_array<double>();
      if (ll.size() != m.n_terms) throw Error("naive Bayes payload: likelihood length mismatch");
    }
    return m;
  }
};

namespace detail {

inline void require_both_classes(std::span<const std::uint8_t> y, const char* who) {
  bool seen[2] = {false, false};
  for (auto v : y) {
    if (v > 1) throw Error(std::string(who) + ": labels must be 0 or 1");
    seen[v] = true;
  }
  if (!seen[0] || !seen[1]) throw Error(std::string(who) + ": training labels contain a single class");
}

}  // namespace detail

inline NBModel nb_fit(const FeatureMatrix& x, std::span<const std::uint8_t> y, double alpha = 1.0) {
  if (x.size() == 0 || x.size() != y.size())
    throw Error("nb_fit: need equal, non-zero numbers of rows and labels");
  if (!(alpha > 0.0)) throw Error("nb_fit: alpha must be positive");
  detail::require_both_classes(y, "nb_fit");

  NBModel m;
  m.alpha = alpha;
  m.n_terms = x.n_cols;
  std::array<std::vector<double>, 2> counts{std::vector<double>(x.n_cols, 0.0), std::vector<double>(x.n_cols, 0.0)};
  std::array<double, 2> totals{0.0, 0.0};
  std::array<std::size_t, 2> docs{0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = y[i];
    ++docs[c];
    for (const auto& [j, v] : x.rows[i]) {
      if (j == 0 || j > x.n_cols) throw Error("nb_fit: feature index out of range");
      counts[c][j - 1] += v;
      totals[c] += v;
    }
  }
  const auto n = static_cast<double>(x.size());
  for (int c = 0; c < 2; ++c) {
    m.log_prior[c] = std::log(static_cast<double>(docs[c]) / n);
    const double denom = totals[c] + alpha * static_cast<double>(x.n_cols);
    m.log_likelihood[c].resize(x.n_cols);
    for (std::size_t j = 0; j < x.n_cols; ++j) m.log_likelihood[c][j] = std::log((counts[c][j] + alpha) / denom);
  }
  return m;
}

inline std::array<double, 2> nb_log_posterior(const NBModel& m, const SparseVector& x) {
  std::array<double, 2> score = m.log_prior;
  for (const auto& [j, v] : x) {
    if (j == 0 || j > m.n_terms) continue;
    for (int c = 0; c < 2; ++c) score[c] += v * m.log_likelihood[c][j - 1];
  }
  return score;
}

// Ties go to label 0.
inline std::uint8_t nb_predict(const NBModel& m, const SparseVector& x) {
  const auto s = nb_log_posterior(m, x);
  return s[1] > s[0] ? 1 : 0;
}

// P(class 1 | x), from a numerically stable softmax of the two log scores.
inline double nb_probability(const NBModel& m, const SparseVector& x) {
  const auto s = nb_log_posterior(m, x);
  return 1.0 / (1.0 + std::exp(s[0] - s[1]));
}

}  // namespace mbti
