#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "binary_io.hpp"
#include "error.hpp"
#include "features.hpp"
#include "naive_bayes.hpp"
#include "random.hpp"

namespace mbti {

struct SVMModel {
  std::vector<double> weights;  // weights[j] belongs to feature index j+1
  double bias = 0.0;
  double C = 1.0;
  int epochs_run = 0;

  std::size_t dim() const noexcept { return weights.size(); }

  void write(BinaryWriter& w) const {
    w.put(C);
    w.put<std::int32_t>(epochs_run);
    w.put(bias);
    w.put_array<double>(weights);
  }

  static SVMModel read(BinaryReader& r) {
    SVMModel m;
    m.C = r.get<double>();
    m.epochs_run = r.get<std::int32_t>();
    m.bias = r.get<double>();
    m.weights = r.get_array<double>();
    return m;
  }
};

struct SVMOptions {
  double C = 1.0;
  int epochs = 20;
  std::uint64_t seed = 0;
  // Keep the epoch-end iterate with the lowest training objective instead of
  // the last one. Costs one extra pass over the rows per epoch.
  bool keep_best_epoch = true;
  // Called after every epoch with the model as it would be returned now.
  std::function<void(int epoch, const SVMModel&)> on_epoch;
};

inline double svm_decision(const SVMModel& m, const SparseVector& x) {
  double s = m.bias;
  for (const auto& [j, v] : x) {
    if (j == 0 || j > m.dim())
      throw Error("svm_decision: feature index " + std::to_string(j) + " outside model dimension " +
                  std::to_string(m.dim()));
    s += m.weights[j - 1] * v;
  }
  return s;
}

inline double svm_decision(const SVMModel& m, std::span<const double> x) {
  if (x.size() != m.dim())
    throw Error("svm_decision: input has dimension " + std::to_string(x.size()) + ", model expects " +
                std::to_string(m.dim()));
  double s = m.bias;
  for (std::size_t j = 0; j < x.size(); ++j) s += m.weights[j] * x[j];
  return s;
}

// Label 1 iff the margin is strictly positive.
template <typename X>
std::uint8_t svm_predict(const SVMModel& m, const X& x) {
  return svm_decision(m, x) > 0.0 ? 1 : 0;
}

// (1/2)||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b)), y in {-1, +1}.
inline double svm_objective(const SVMModel& m, const FeatureMatrix& x, std::span<const std::uint8_t> y) {
  double sq = 0.0;
  for (double w : m.weights) sq += w * w;
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double sign = y[i] ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - sign * svm_decision(m, x.rows[i]));
  }
  return 0.5 * sq + m.C * hinge;
}

// Pegasos stochastic subgradient descent on the primal with
// lambda = 1 / (C N) and step 1 / (lambda (t + t0)), t0 = ceil(C N). The weight vector is kept as
// scale * v so that the per-step shrink costs O(1) on sparse rows, and is
// projected onto the ball of radius 1/sqrt(lambda). The intercept is not
// regularized and moves with the same step.
inline SVMModel svm_fit(const FeatureMatrix& x, std::span<const std::uint8_t> y, const SVMOptions& opts) {
  if (x.size() == 0 || x.size() != y.size())
    throw Error("svm_fit: need equal, non-zero numbers of rows and labels");
  if (!(opts.C > 0.0)) throw Error("svm_fit: C must be positive");
  if (opts.epochs < 1) throw Error("svm_fit: epochs must be >= 1");
  detail::require_both_classes(y, "svm_fit");

  const std::size_t n = x.size();
  const std::size_t dim = x.n_cols;
  const double lambda = 1.0 / (opts.C * static_cast<double>(n));
  const double radius_sq = 1.0 / lambda;
  // Step offset: the first step is ~1 instead of C*N.
  const double t0 = std::ceil(1.0 / lambda);

  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double v_sq = 0.0;  // ||v||^2
  double bias = 0.0;

  std::vector<double> row_sq(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, val] : x.rows[i]) {
      if (j == 0 || j > dim) throw Error("svm_fit: feature index out of range");
      row_sq[i] += val * val;
    }

  SVMModel current;
  current.C = opts.C;
  auto snapshot = [&](int epochs_done) {
    current.weights.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) current.weights[j] = scale * v[j];
    current.bias = bias;
    current.epochs_run = epochs_done;
  };
  SVMModel best;
  double best_objective = std::numeric_limits<double>::infinity();

  Rng rng(opts.seed);
  auto order = iota_indices(n);
  std::uint64_t t = 0;
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * (static_cast<double>(t) + t0));
      const double sign = y[i] ? 1.0 : -1.0;
      double dot = 0.0;
      for (const auto& [j, val] : x.rows[i]) dot += v[j - 1] * val;
      const double margin = sign * (scale * dot + bias);

      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_sq = 0.0;
        dot = 0.0;
      } else {
        scale *= shrink;
      }

      if (margin < 1.0) {
        const double a = eta * sign / scale;
        v_sq += 2.0 * a * dot + a * a * row_sq[i];
        for (const auto& [j, val] : x.rows[i]) v[j - 1] += a * val;
        bias += eta * sign;
      }

      const double w_sq = scale * scale * v_sq;
      if (w_sq > radius_sq) scale *= std::sqrt(radius_sq / w_sq);

      if (scale < 1e-9) {
        for (double& e : v) e *= scale;
        v_sq *= scale * scale;
        scale = 1.0;
      }
    }
    v_sq = 0.0;
    for (double e : v) v_sq += e * e;

    snapshot(epoch);
    if (opts.keep_best_epoch) {
      const double obj = svm_objective(current, x, y);
      if (obj < best_objective) {
        best_objective = obj;
        best.weights = current.weights;
        best.bias = current.bias;
      }
      best.C = opts.C;
      best.epochs_run = epoch;
    }
    if (opts.on_epoch) opts.on_epoch(epoch, opts.keep_best_epoch ? best : current);
  }
  return opts.keep_best_epoch ? best : current;
}

}  // namespace mbti
