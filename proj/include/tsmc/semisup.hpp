#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tsmc/assignment.hpp"
#include "tsmc/dataset.hpp"
#include "tsmc/errors.hpp"
#include "tsmc/losses.hpp"
#include "tsmc/model.hpp"
#include "tsmc/rng.hpp"
#include "tsmc/solver.hpp"
#include "tsmc/taxonomy.hpp"
#include "tsmc/transportation.hpp"

namespace tsmc {

enum class AssignmentSolver { switching, simplex };

inline AssignmentSolver parse_assignment_solver(const std::string& s) {
  if (s == "switching") return AssignmentSolver::switching;
  if (s == "simplex") return AssignmentSolver::simplex;
  throw ConfigError("unknown solver '" + s + "' (expected switching or simplex)");
}

inline const char* assignment_solver_name(AssignmentSolver s) {
  return s == AssignmentSolver::switching ? "switching" : "simplex";
}

// The annealing ladder for the unlabeled-term weight; scaled uniformly
// when the final target is not 1.
inline std::vector<double> default_anneal_schedule(double target = 1.0) {
  if (target == 0.0) return {0.0};
  std::vector<double> s = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0};
  if (target != 1.0)
    for (double& v : s) v *= target;
  return s;
}

struct SemisupConfig {
  SolverConfig solver;  // cu is driven by the schedule; the field is ignored
  std::vector<double> schedule = default_anneal_schedule();
  int inner_cap = 20;      // alternating w/y iterations per schedule stage
  int switching_cap = 50;  // major iterations inside the switching solver
  AssignmentSolver assignment_solver = AssignmentSolver::switching;
};

/// One alternating iteration: a w-step followed by a y-step.
struct SemisupStep {
  int stage = 0;  // index into the schedule
  double cu = 0.0;
  int inner = 0;  // 1-based within the stage
  double obj_before_w = 0.0;
  double obj_after_w = 0.0;
  double obj_before_y = 0.0;
  double obj_after_y = 0.0;
  int labels_changed = 0;
  int solver_epochs = 0;
  double wall_seconds = 0.0;
};

struct SemisupResult {
  Model model;
  Assignment transduction;
  std::vector<SemisupStep> trace;
  Model supervised_model;  // the warm-start model, kept for baselines
  bool hit_inner_cap = false;
  bool hit_switching_cap = false;
};

namespace detail {

inline void validate_schedule(const std::vector<double>& schedule) {
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!std::isfinite(schedule[k]) || schedule[k] < 0.0)
      throw ConfigError("semisup: schedule values must be finite and non-negative");
    if (k > 0 && schedule[k] <= schedule[k - 1])
      throw ConfigError("semisup: schedule must be strictly increasing");
  }
}

}  // namespace detail

// Full semi-supervised run: supervised warm start, count-respecting greedy
// label initialization, then for each schedule value an alternating loop
// that retrains the weights on labeled plus pseudo-labeled data and
// reassigns the pseudo labels by minimum cost under the count constraints.
// A reassignment is accepted only when it strictly lowers the assignment
// cost, so the combined objective never increases across a y-step.
inline SemisupResult train_semisup(const Dataset& labeled, const Dataset& unlabeled,
                                   const LabelCounts& counts, const SemisupConfig& cfg,
                                   LossKind kind, const PathSet& paths) {
  const int m = paths.num_leaves();
  const int n = static_cast<int>(unlabeled.size());
  if (counts.num_classes() != m)
    throw ConfigError("semisup: counts do not match the number of classes");
  if (counts.total() != n)
    throw ConfigError("semisup: counts must sum to the unlabeled-set size");
  if (n == 0) throw ConfigError("semisup: unlabeled set is empty");
  if (cfg.inner_cap < 1) throw ConfigError("semisup: inner_cap must be at least 1");
  detail::validate_schedule(cfg.schedule);

  SemisupResult result;
  const std::size_t dim = std::max(labeled.feature_dim, unlabeled.feature_dim);

  SolverConfig sup_cfg = cfg.solver;
  sup_cfg.cu = 0.0;
  TrainResult sup = train(labeled, sup_cfg, kind, Model::create(paths, dim));
  result.supervised_model = sup.model;
  Model model = std::move(sup.model);

  Matrix scores(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i)
    model.score_all(unlabeled.examples[i],
                    {scores.data.data() + static_cast<std::size_t>(i) * m,
                     static_cast<std::size_t>(m)});
  Assignment a = greedy_init(scores, counts);
  if (!assignment_matches_counts(a, counts))
    throw std::logic_error("semisup: infeasible initial assignment");

  for (std::size_t stage = 0; stage < cfg.schedule.size(); ++stage) {
    const double cu = cfg.schedule[stage];
    if (cu == 0.0) continue;  // the unlabeled term vanishes; nothing to do
    SolverConfig stage_cfg = cfg.solver;
    stage_cfg.cu = cu;
    for (int inner = 1; inner <= cfg.inner_cap; ++inner) {
      const auto wall_start = std::chrono::steady_clock::now();
      SemisupStep step;
      step.stage = static_cast<int>(stage);
      step.cu = cu;
      step.inner = inner;

      stage_cfg.seed = hash_combine(cfg.solver.seed,
                                    (stage + 1) * 10000 + static_cast<std::uint64_t>(inner));
      step.obj_before_w =
          objective(model, labeled, &unlabeled, &a.label_of, stage_cfg, kind);
      TrainResult tr =
          train(labeled, &unlabeled, &a.label_of, stage_cfg, kind, model);
      model = std::move(tr.model);
      step.obj_after_w = tr.objective;
      step.solver_epochs = tr.epochs_used;

      const Matrix c = cost_matrix(model, unlabeled.examples, kind);
      step.obj_before_y = step.obj_after_w;
      const double old_cost = assignment_objective(c, a.label_of);
      Assignment candidate;
      if (cfg.assignment_solver == AssignmentSolver::switching) {
        SwitchStats sstats;
        candidate = solve_switching(c, counts, a, &sstats, cfg.switching_cap);
        result.hit_switching_cap = result.hit_switching_cap || sstats.hit_cap;
      } else {
        candidate = solve_simplex(c, counts, &a);
      }
      if (candidate.objective < old_cost) {
        step.labels_changed = 0;
        for (int i = 0; i < n; ++i)
          if (candidate.label_of[i] != a.label_of[i]) ++step.labels_changed;
        a = std::move(candidate);
      } else {
        step.labels_changed = 0;
        a.objective = old_cost;
      }
      if (!assignment_matches_counts(a, counts))
        throw std::logic_error("semisup: count constraint violated after y-step");
      step.obj_after_y =
          objective(model, labeled, &unlabeled, &a.label_of, stage_cfg, kind);

      step.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
              .count();
      result.trace.push_back(step);
      if (step.labels_changed == 0) break;
      if (inner == cfg.inner_cap) result.hit_inner_cap = true;
    }
  }

  result.model = std::move(model);
  result.transduction = std::move(a);
  return result;
}

// Ablation arm: jump straight to the final schedule value.
inline SemisupResult run_no_anneal(const Dataset& labeled, const Dataset& unlabeled,
                                   const LabelCounts& counts, SemisupConfig cfg,
                                   LossKind kind, const PathSet& paths) {
  cfg.schedule = {cfg.schedule.empty() ? 1.0 : cfg.schedule.back()};
  return train_semisup(labeled, unlabeled, counts, cfg, kind, paths);
}

}  // namespace tsmc
