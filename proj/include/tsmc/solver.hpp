#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tsmc/dataset.hpp"
#include "tsmc/errors.hpp"
#include "tsmc/losses.hpp"
#include "tsmc/model.hpp"
#include "tsmc/rng.hpp"

namespace tsmc {

struct SolverConfig {
  double lambda = 10.0;  // L2 regularization strength
  double cu = 0.0;       // weight of the pseudo-labeled term
  int max_epochs = 30;
  double tolerance = 1e-4;  // relative objective decrease per epoch
  std::uint64_t seed = 1;
};

struct TrainResult {
  Model model;
  double objective = 0.0;
  int epochs_used = 0;
  std::vector<double> objective_trace;  // best-so-far per epoch, entry 0 = start
};

namespace detail {

inline void validate_solver_config(const SolverConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ConfigError("solver: lambda must be positive");
  if (!(cfg.cu >= 0.0)) throw ConfigError("solver: cu must be non-negative");
  if (cfg.max_epochs < 1) throw ConfigError("solver: max_epochs must be at least 1");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("solver: tolerance must be positive");
}

inline void validate_training_inputs(const Model& m, const Dataset& labeled,
                                     const Dataset* unlabeled,
                                     const std::vector<int>* pseudo_labels) {
  if (labeled.size() == 0) throw ConfigError("solver: labeled set is empty");
  if (!labeled.is_labeled()) throw ConfigError("solver: labeled set carries no labels");
  if (labeled.feature_dim > m.dim)
    throw ConfigError("solver: labeled features exceed model dimension");
  for (int y : *labeled.labels)
    if (y < 0 || y >= m.num_leaves()) throw ConfigError("solver: label out of range");
  if (unlabeled) {
    if (!pseudo_labels || pseudo_labels->size() != unlabeled->size())
      throw ConfigError("solver: pseudo labels do not match the unlabeled set");
    if (unlabeled->feature_dim > m.dim)
      throw ConfigError("solver: unlabeled features exceed model dimension");
    for (int y : *pseudo_labels)
      if (y < 0 || y >= m.num_leaves()) throw ConfigError("solver: pseudo label out of range");
  }
}

}  // namespace detail

// (lambda/2)*||w||^2 + mean labeled loss + (cu/n) * summed pseudo-labeled
// loss. The pseudo term is dropped entirely when cu = 0 or n = 0, and its
// inner sum runs in ascending example order so it matches the assignment
// objective on the cost matrix bit for bit.
inline double objective(const Model& m, const Dataset& labeled,
                        const Dataset* unlabeled, const std::vector<int>* pseudo_labels,
                        const SolverConfig& cfg, LossKind kind) {
  detail::validate_solver_config(cfg);
  detail::validate_training_inputs(m, labeled, unlabeled, pseudo_labels);
  LossWorkspace ws(m);
  double labeled_sum = 0.0;
  for (std::size_t i = 0; i < labeled.size(); ++i)
    labeled_sum += loss_value(m, ws, labeled.examples[i], (*labeled.labels)[i], kind);
  double obj = 0.5 * cfg.lambda * m.squared_norm() +
               labeled_sum / static_cast<double>(labeled.size());
  if (unlabeled && cfg.cu > 0.0 && unlabeled->size() > 0) {
    double pseudo_sum = 0.0;
    for (std::size_t i = 0; i < unlabeled->size(); ++i)
      pseudo_sum += loss_value(m, ws, unlabeled->examples[i], (*pseudo_labels)[i], kind);
    obj += (cfg.cu / static_cast<double>(unlabeled->size())) * pseudo_sum;
  }
  return obj;
}

inline double objective(const Model& m, const Dataset& labeled, const SolverConfig& cfg,
                        LossKind kind) {
  return objective(m, labeled, nullptr, nullptr, cfg, kind);
}

// Stochastic subgradient descent on the regularized objective with a
// deterministic per-epoch shuffle, 1/(lambda*(t+t0)) step sizes, and
// tail averaging of epoch-end iterates (the window initially includes
// the starting point, so a warm start anchors the early averages).
// Keeps the best smoothed iterate seen, so the returned objective never
// exceeds the starting one. Stops once an epoch neither improves the
// best value nor leaves the smoothed objective meaningfully above it;
// requiring both keeps a cold start from quitting while early iterates
// still oscillate. When cu = 0 the pseudo-labeled examples never enter
// the update stream and the run is identical to a purely supervised one.
inline TrainResult train(const Dataset& labeled, const Dataset* unlabeled,
                         const std::vector<int>* pseudo_labels, const SolverConfig& cfg,
                         LossKind kind, const Model& init) {
  detail::validate_solver_config(cfg);
  detail::validate_training_inputs(init, labeled, unlabeled, pseudo_labels);
  const bool use_pseudo = unlabeled && cfg.cu > 0.0 && unlabeled->size() > 0;
  const std::size_t l = labeled.size();
  const std::size_t n_u = use_pseudo ? unlabeled->size() : 0;
  const std::size_t stream_len = l + n_u;
  const double scale_labeled = static_cast<double>(stream_len) / static_cast<double>(l);
  const double scale_pseudo =
      use_pseudo ? static_cast<double>(stream_len) * cfg.cu / static_cast<double>(n_u) : 0.0;

  Model work = init;  // scaled representation: actual weights = alpha * work.w
  double alpha = 1.0;
  LossWorkspace ws(work);

  TrainResult result;
  result.model = init;
  result.objective = objective(init, labeled, unlabeled, pseudo_labels, cfg, kind);
  result.objective_trace.push_back(result.objective);
  std::vector<double> best_w = init.w;

  constexpr int kWindow = 5;
  std::vector<std::vector<double>> ring;
  ring.push_back(init.w);
  std::vector<double> averaged(init.w.size());
  Model probe = init;  // reused shell for evaluating candidate weights

  const double t0 = std::max(2.0, 1.0 / cfg.lambda);
  long long t = 0;
  std::vector<std::uint32_t> stream(stream_len);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::iota(stream.begin(), stream.end(), 0u);
    Rng rng = Rng::derive(cfg.seed, static_cast<std::uint64_t>(epoch));
    rng.shuffle(stream);
    for (std::uint32_t k : stream) {
      const bool is_pseudo = k >= l;
      const SparseVector& x =
          is_pseudo ? unlabeled->examples[k - l] : labeled.examples[k];
      const int y = is_pseudo ? (*pseudo_labels)[k - l] : (*labeled.labels)[k];
      const double eta = 1.0 / (cfg.lambda * (static_cast<double>(t) + t0));
      ++t;
      work.score_all(x, ws.scores);
      for (double& s : ws.scores) s *= alpha;
      loss_gradient_coefficients(work, ws, y, kind);
      alpha *= 1.0 - eta * cfg.lambda;
      const double step = eta * (is_pseudo ? scale_pseudo : scale_labeled) / alpha;
      for (int node : ws.touched) {
        if (ws.coeff[node] != 0.0) axpy(-step * ws.coeff[node], x, work.node_w(node));
        ws.coeff[node] = 0.0;
      }
      if (alpha < 1e-120) {
        work.scale(alpha);
        alpha = 1.0;
      }
    }

    if (static_cast<int>(ring.size()) == kWindow) ring.erase(ring.begin());
    ring.emplace_back(work.w.size());
    for (std::size_t j = 0; j < work.w.size(); ++j) ring.back()[j] = alpha * work.w[j];
    std::fill(averaged.begin(), averaged.end(), 0.0);
    for (const auto& snap : ring)
      for (std::size_t j = 0; j < snap.size(); ++j) averaged[j] += snap[j];
    const double inv = 1.0 / static_cast<double>(ring.size());
    for (double& v : averaged) v *= inv;

    probe.w = averaged;
    const double cand = objective(probe, labeled, unlabeled, pseudo_labels, cfg, kind);
    if (!std::isfinite(cand))
      throw SolverError("solver: objective diverged (non-finite value at epoch " +
                        std::to_string(epoch) + ")");
    const double prev_best = result.objective;
    if (cand < result.objective) {
      result.objective = cand;
      best_w = averaged;
    }
    result.objective_trace.push_back(result.objective);
    result.epochs_used = epoch;
    const double rel =
        (prev_best - result.objective) / std::max(1.0, std::abs(prev_best));
    const double drift =
        (cand - result.objective) / std::max(1.0, std::abs(result.objective));
    if (rel <= cfg.tolerance && drift <= cfg.tolerance) break;
  }

  result.model.w = std::move(best_w);
  return result;
}

inline TrainResult train(const Dataset& labeled, const SolverConfig& cfg, LossKind kind,
                         const Model& init) {
  return train(labeled, nullptr, nullptr, cfg, kind, init);
}

}  // namespace tsmc
