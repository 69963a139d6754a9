// Solves one random count-constrained assignment instance with every
// available method and prints the objectives side by side.

#include <chrono>
#include <cstdio>

#include "tsmc/tsmc.hpp"

using namespace tsmc;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main() {
  const int n = 12;
  const int m = 3;
  Rng rng(19);
  Matrix costs(n, m);
  for (double& v : costs.data) v = rng.uniform();
  LabelCounts counts;
  counts.counts = {4, 4, 4};

  Matrix negated = costs;
  for (double& v : negated.data) v = -v;
  const Assignment start = greedy_init(negated, counts);
  std::printf("greedy start objective     %.6f\n",
              assignment_objective(costs, start.label_of));

  auto t = std::chrono::steady_clock::now();
  SwitchStats sw_stats;
  const Assignment sw = solve_switching(costs, counts, start, &sw_stats);
  std::printf("switching objective        %.6f (%lld switches, %.4fs)\n", sw.objective,
              sw_stats.switches_applied, seconds_since(t));

  t = std::chrono::steady_clock::now();
  SimplexStats sx_stats;
  const Assignment sx = solve_simplex(costs, counts, nullptr, &sx_stats);
  std::printf("simplex objective          %.6f (%lld pivots, %.4fs)\n", sx.objective,
              sx_stats.pivots, seconds_since(t));

  t = std::chrono::steady_clock::now();
  const Assignment exact = brute_force(costs, counts);
  std::printf("brute force objective      %.6f (%.4fs over %lld assignments)\n",
              exact.objective, seconds_since(t), count_feasible_assignments(counts));
  return 0;
}
