#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsmc/dataset.hpp"
#include "tsmc/matrix.hpp"

namespace tsmc {

/// A feasible labeling of n examples into m classes with fixed per-class
/// counts. objective is filled in by the cost-aware solvers; greedy_init
/// works from scores alone and leaves it at 0.
struct Assignment {
  std::vector<int> label_of;
  std::vector<std::vector<int>> class_members;  // ascending example ids
  double objective = 0.0;
};

/// One candidate switch: example i (in class y) trades labels with example
/// i_bar (in class y_bar); rho is the resulting objective change.
struct SwitchTuple {
  int i;
  int y;
  int i_bar;
  int y_bar;
  double rho;
};

struct SwitchStats {
  int major_iterations = 0;
  long long switches_applied = 0;
  bool converged = false;
  bool hit_cap = false;
  std::vector<SwitchTuple> applied;  // in application order, across iterations
};

inline void rebuild_members(Assignment& a, int num_classes) {
  a.class_members.assign(num_classes, {});
  for (int i = 0; i < static_cast<int>(a.label_of.size()); ++i) {
    const int y = a.label_of[i];
    if (y < 0 || y >= num_classes)
      throw std::invalid_argument("assignment label out of range");
    a.class_members[y].push_back(i);
  }
}

// Fixed ascending-index summation so repeated evaluations of the same
// labeling agree bit for bit.
inline double assignment_objective(const Matrix& c, const std::vector<int>& label_of) {
  double s = 0.0;
  for (std::size_t i = 0; i < label_of.size(); ++i)
    s += c(i, static_cast<std::size_t>(label_of[i]));
  return s;
}

inline Assignment assignment_from_labels(std::vector<int> labels, int num_classes) {
  Assignment a;
  a.label_of = std::move(labels);
  rebuild_members(a, num_classes);
  return a;
}

inline Assignment assignment_from_labels(std::vector<int> labels, const Matrix& c) {
  Assignment a = assignment_from_labels(std::move(labels), static_cast<int>(c.cols));
  a.objective = assignment_objective(c, a.label_of);
  return a;
}

inline bool assignment_matches_counts(const Assignment& a, const LabelCounts& counts) {
  if (static_cast<int>(a.label_of.size()) != counts.total()) return false;
  std::vector<int> seen(counts.counts.size(), 0);
  for (int y : a.label_of) {
    if (y < 0 || y >= counts.num_classes()) return false;
    ++seen[y];
  }
  return seen == counts.counts;
}

// Rank-and-fill initialization from classifier scores. Rounds: every
// unallocated example keys on its best still-open class, examples are
// taken in decreasing key order, and the round ends the moment a class
// fills so the remaining examples re-key against the updated open set.
inline Assignment greedy_init(const Matrix& scores, const LabelCounts& counts) {
  const int n = static_cast<int>(scores.rows);
  const int m = static_cast<int>(scores.cols);
  if (m != counts.num_classes())
    throw std::invalid_argument("greedy_init: counts/classes mismatch");
  if (counts.total() != n)
    throw std::invalid_argument("greedy_init: counts must sum to the number of examples");
  for (int c : counts.counts)
    if (c < 0) throw std::invalid_argument("greedy_init: negative count");

  std::vector<int> remaining = counts.counts;
  std::vector<int> labels(n, -1);
  std::vector<int> unassigned(n);
  std::iota(unassigned.begin(), unassigned.end(), 0);
  std::vector<int> best_class(n, -1);
  std::vector<double> key(n, 0.0);

  while (!unassigned.empty()) {
    for (int i : unassigned) {
      int best = -1;
      for (int y = 0; y < m; ++y) {
        if (remaining[y] == 0) continue;
        if (best < 0 || scores(i, y) > scores(i, best)) best = y;
      }
      best_class[i] = best;
      key[i] = scores(i, best);
    }
    std::vector<int> order = unassigned;  // ascending ids, kept stable below
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key[a] > key[b]; });
    std::size_t taken = 0;
    for (int i : order) {
      const int y = best_class[i];
      labels[i] = y;
      --remaining[y];
      ++taken;
      if (remaining[y] == 0) break;  // a class filled; re-key the rest
    }
    std::vector<int> next;
    next.reserve(unassigned.size() - taken);
    for (int i : unassigned)
      if (labels[i] < 0) next.push_back(i);
    unassigned = std::move(next);
  }
  return assignment_from_labels(std::move(labels), m);
}

// Pairwise label-switching local search. Each major iteration builds, for
// every class pair, two ascending lists of per-example move deltas, zips
// them rank for rank into candidate switches, keeps the strictly improving
// ones, and applies them best-first while skipping any switch that touches
// an example already moved this iteration.
inline Assignment solve_switching(const Matrix& c, const LabelCounts& counts,
                                  const Assignment& init, SwitchStats* stats = nullptr,
                                  int max_major_iterations = 50) {
  const int n = static_cast<int>(c.rows);
  const int m = static_cast<int>(c.cols);
  if (m != counts.num_classes() || counts.total() != n)
    throw std::invalid_argument("solve_switching: counts/instance mismatch");
  if (!assignment_matches_counts(init, counts))
    throw std::invalid_argument("solve_switching: infeasible initialization");
  if (max_major_iterations < 1)
    throw std::invalid_argument("solve_switching: iteration cap must be positive");

  Assignment a = init;
  rebuild_members(a, m);
  SwitchStats local;
  SwitchStats& st = stats ? *stats : local;
  st = SwitchStats{};

  std::vector<std::pair<double, int>> side_a, side_b;  // (delta, example)
  std::vector<SwitchTuple> tuples;
  std::vector<char> alive(n, 1);

  for (int iter = 0; iter < max_major_iterations; ++iter) {
    ++st.major_iterations;
    tuples.clear();
    for (int y = 0; y < m; ++y) {
      if (a.class_members[y].empty()) continue;
      for (int yb = y + 1; yb < m; ++yb) {
        if (a.class_members[yb].empty()) continue;
        side_a.clear();
        for (int i : a.class_members[y]) side_a.emplace_back(c(i, yb) - c(i, y), i);
        side_b.clear();
        for (int i : a.class_members[yb]) side_b.emplace_back(c(i, y) - c(i, yb), i);
        std::stable_sort(side_a.begin(), side_a.end(),
                         [](const auto& p, const auto& q) { return p.first < q.first; });
        std::stable_sort(side_b.begin(), side_b.end(),
                         [](const auto& p, const auto& q) { return p.first < q.first; });
        const std::size_t depth = std::min(side_a.size(), side_b.size());
        for (std::size_t k = 0; k < depth; ++k) {
          const double rho = side_a[k].first + side_b[k].first;
          if (rho >= 0.0) continue;
          tuples.push_back({side_a[k].second, y, side_b[k].second, yb, rho});
        }
      }
    }
    if (tuples.empty()) {
      st.converged = true;
      break;
    }
    std::stable_sort(tuples.begin(), tuples.end(),
                     [](const SwitchTuple& p, const SwitchTuple& q) { return p.rho < q.rho; });
    std::fill(alive.begin(), alive.end(), 1);
    for (const SwitchTuple& t : tuples) {
      if (!alive[t.i] || !alive[t.i_bar]) continue;
      a.label_of[t.i] = t.y_bar;
      a.label_of[t.i_bar] = t.y;
      alive[t.i] = alive[t.i_bar] = 0;
      ++st.switches_applied;
      st.applied.push_back(t);
    }
    rebuild_members(a, m);
    if (!assignment_matches_counts(a, counts))
      throw std::logic_error("solve_switching: count constraint violated");
  }
  st.hit_cap = !st.converged;
  a.objective = assignment_objective(c, a.label_of);
  return a;
}

// Number of labelings consistent with the counts (multinomial coefficient),
// saturated at 2^63-1 on overflow.
inline long long count_feasible_assignments(const LabelCounts& counts) {
  constexpr long long kSat = std::numeric_limits<long long>::max();
  unsigned __int128 total = 1;
  long long rem = counts.total();
  for (int k : counts.counts) {
    unsigned __int128 binom = 1;
    for (long long j = 1; j <= k; ++j) {
      binom = binom * static_cast<unsigned __int128>(rem - k + j) / static_cast<unsigned __int128>(j);
      if (binom > static_cast<unsigned __int128>(kSat)) return kSat;
    }
    total *= binom;
    if (total > static_cast<unsigned __int128>(kSat)) return kSat;
    rem -= k;
  }
  return static_cast<long long>(total);
}

// Exhaustive minimum over all count-feasible labelings, enumerated in
// lexicographic label-vector order so ties resolve to the smallest vector.
inline Assignment brute_force(const Matrix& c, const LabelCounts& counts) {
  const int n = static_cast<int>(c.rows);
  const int m = static_cast<int>(c.cols);
  if (m != counts.num_classes() || counts.total() != n)
    throw std::invalid_argument("brute_force: counts/instance mismatch");
  if (count_feasible_assignments(counts) > 10'000'000LL)
    throw std::invalid_argument("brute_force: instance too large");

  std::vector<int> remaining = counts.counts;
  std::vector<int> current(n, -1);
  std::vector<int> best;
  double best_obj = std::numeric_limits<double>::infinity();

  auto recurse = [&](auto&& self, int i, double partial) -> void {
    if (i == n) {
      if (partial < best_obj) {
        best_obj = partial;
        best = current;
      }
      return;
    }
    for (int y = 0; y < m; ++y) {
      if (remaining[y] == 0) continue;
      --remaining[y];
      current[i] = y;
      self(self, i + 1, partial + c(i, y));
      ++remaining[y];
    }
    current[i] = -1;
  };
  recurse(recurse, 0, 0.0);

  Assignment a = assignment_from_labels(std::move(best), m);
  a.objective = assignment_objective(c, a.label_of);
  return a;
}

}  // namespace tsmc
