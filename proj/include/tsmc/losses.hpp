#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsmc/matrix.hpp"
#include "tsmc/model.hpp"
#include "tsmc/sparse_vector.hpp"

namespace tsmc {

enum class LossKind { margin, maxent };

inline LossKind parse_loss_kind(const std::string& s) {
  if (s == "margin") return LossKind::margin;
  if (s == "maxent") return LossKind::maxent;
  throw std::invalid_argument("unknown loss '" + s + "' (expected margin or maxent)");
}

inline const char* loss_kind_name(LossKind k) {
  return k == LossKind::margin ? "margin" : "maxent";
}

// Numerically safe log(sum_y exp(s_y)); subtracts the max before
// exponentiating and sums in ascending index order.
inline double log_sum_exp(std::span<const double> s) {
  double hi = s[0];
  for (double v : s)
    if (v > hi) hi = v;
  double sum = 0.0;
  for (double v : s) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

inline void softmax_into(std::span<const double> s, std::span<double> p) {
  double hi = s[0];
  for (double v : s)
    if (v > hi) hi = v;
  double sum = 0.0;
  for (std::size_t y = 0; y < s.size(); ++y) {
    p[y] = std::exp(s[y] - hi);
    sum += p[y];
  }
  for (std::size_t y = 0; y < s.size(); ++y) p[y] /= sum;
}

// Argmax over y of s_y + cost(y_true, y) with the unit misclassification
// cost (0 on the true label, 1 elsewhere); lowest index wins ties.
inline int margin_argmax(std::span<const double> s, int y_true) {
  int best = -1;
  double best_v = 0.0;
  for (int y = 0; y < static_cast<int>(s.size()); ++y) {
    const double v = s[y] + (y == y_true ? 0.0 : 1.0);
    if (best < 0 || v > best_v) {
      best = y;
      best_v = v;
    }
  }
  return best;
}

// Multi-class hinge: max_y [s_y + cost(y_true, y)] - s_{y_true}. The true
// label participates in the max, so the value is never negative.
inline double margin_loss_from_scores(std::span<const double> s, int y_true) {
  const int y_star = margin_argmax(s, y_true);
  return s[y_star] + (y_star == y_true ? 0.0 : 1.0) - s[y_true];
}

// Negative conditional log-likelihood: log sum_y exp(s_y) - s_{y_true}.
inline double maxent_loss_from_scores(std::span<const double> s, int y_true) {
  return log_sum_exp(s) - s[y_true];
}

inline double loss_from_scores(std::span<const double> s, int y_true, LossKind kind) {
  return kind == LossKind::margin ? margin_loss_from_scores(s, y_true)
                                  : maxent_loss_from_scores(s, y_true);
}

/// Scratch buffers reused across per-example loss and gradient calls.
struct LossWorkspace {
  std::vector<double> scores;   // one per leaf
  std::vector<double> probs;    // one per leaf
  std::vector<double> coeff;    // one per tree node, kept zeroed between calls
  std::vector<int> touched;     // nodes with nonzero coeff this call

  explicit LossWorkspace(const Model& m)
      : scores(m.num_leaves()), probs(m.num_leaves()), coeff(m.paths.num_nodes, 0.0) {
    touched.reserve(static_cast<std::size_t>(m.paths.num_nodes));
  }
};

// Single entry point for the loss of one example under a hypothesized
// label; the transduction cost matrix and the training objective both go
// through here, so their values agree bit for bit.
inline double loss_value(const Model& m, LossWorkspace& ws, const SparseVector& x,
                         int y_true, LossKind kind) {
  m.score_all(x, ws.scores);
  return loss_from_scores(ws.scores, y_true, kind);
}

// Per-node coefficients of dLoss/dw given the example's leaf scores in
// ws.scores; the gradient contribution of node t is coeff[t] * x.
// Accumulating per node first means prefix nodes shared between paths get
// their exact net coefficient. Fills ws.touched; callers must re-zero
// ws.coeff[t] for the touched nodes once done.
inline void loss_gradient_coefficients(const Model& m, LossWorkspace& ws, int y_true,
                                       LossKind kind) {
  ws.touched.clear();
  auto bump = [&](int node, double c) {
    if (ws.coeff[node] == 0.0) ws.touched.push_back(node);
    ws.coeff[node] += c;
  };
  if (kind == LossKind::margin) {
    const int y_star = margin_argmax(ws.scores, y_true);
    if (y_star == y_true) return;
    for (int node : m.paths.paths[y_star]) bump(node, 1.0);
    for (int node : m.paths.paths[y_true]) bump(node, -1.0);
  } else {
    softmax_into(ws.scores, ws.probs);
    for (int y = 0; y < m.num_leaves(); ++y)
      for (int node : m.paths.paths[y]) bump(node, ws.probs[y]);
    for (int node : m.paths.paths[y_true]) bump(node, -1.0);
  }
}

// Applies w <- w - step * dLoss/dw for one example.
inline void apply_loss_subgradient(Model& m, LossWorkspace& ws, const SparseVector& x,
                                   int y_true, LossKind kind, double step) {
  m.score_all(x, ws.scores);
  loss_gradient_coefficients(m, ws, y_true, kind);
  for (int node : ws.touched) {
    if (ws.coeff[node] != 0.0) axpy(-step * ws.coeff[node], x, m.node_w(node));
    ws.coeff[node] = 0.0;
  }
}

// C(i, y) = loss of example i when its label is hypothesized to be y.
inline Matrix cost_matrix(const Model& m, const std::vector<SparseVector>& xs,
                          LossKind kind) {
  LossWorkspace ws(m);
  const int num_leaves = m.num_leaves();
  Matrix c(xs.size(), static_cast<std::size_t>(num_leaves));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m.score_all(xs[i], ws.scores);
    for (int y = 0; y < num_leaves; ++y)
      c(i, static_cast<std::size_t>(y)) = loss_from_scores(ws.scores, y, kind);
  }
  return c;
}

}  // namespace tsmc
