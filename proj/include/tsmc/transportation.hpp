#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tsmc/assignment.hpp"
#include "tsmc/dataset.hpp"
#include "tsmc/errors.hpp"
#include "tsmc/matrix.hpp"

namespace tsmc {

struct SimplexStats {
  long long pivots = 0;
  long long degenerate_pivots = 0;
};

// Exact solver for the count-constrained assignment problem, posed as a
// transportation problem with unit supplies (one per example) and demands
// n(y). The constraint matrix is totally unimodular, so the optimal basic
// solution found here is integral and solves the integer program.
//
// Basis bookkeeping: the basic cells always form a spanning tree over the
// n example vertices and m class vertices. Heavy degeneracy (every supply
// is 1) is handled by Bland's rule on a fixed lexicographic cell order for
// both the entering and the leaving choice, which rules out cycling.
inline Assignment solve_simplex(const Matrix& c, const LabelCounts& counts,
                                const Assignment* init = nullptr,
                                SimplexStats* stats = nullptr,
                                long long max_pivots = -1) {
  const int n = static_cast<int>(c.rows);
  const int m = static_cast<int>(c.cols);
  if (m != counts.num_classes() || counts.total() != n)
    throw std::invalid_argument("solve_simplex: counts/instance mismatch");
  if (n == 0) throw std::invalid_argument("solve_simplex: empty instance");
  if (init && !assignment_matches_counts(*init, counts))
    throw std::invalid_argument("solve_simplex: infeasible initialization");
  if (max_pivots < 0) max_pivots = 50LL * (n + m) + 10000;

  std::vector<int> start_labels;
  if (init) {
    start_labels = init->label_of;
  } else {
    Matrix negated = c;
    for (double& v : negated.data) v = -v;
    start_labels = greedy_init(negated, counts).label_of;
  }

  // Cells (i, label_i) carry flow 1; zero-flow connectors (0, y) for the
  // classes example 0 does not use complete the spanning tree (they are
  // the lexicographically lowest cells available).
  struct Cell {
    int row;
    int col;
    int flow;
  };
  std::vector<Cell> basis;
  basis.reserve(static_cast<std::size_t>(n + m - 1));
  for (int i = 0; i < n; ++i) basis.push_back({i, start_labels[i], 1});
  for (int y = 0; y < m; ++y)
    if (y != start_labels[0]) basis.push_back({0, y, 0});

  double max_abs = 0.0;
  for (double v : c.data) max_abs = std::max(max_abs, std::abs(v));
  const double eps = 1e-10 * (1.0 + max_abs);

  const int num_vertices = n + m;  // examples: 0..n-1, classes: n..n+m-1
  std::vector<std::vector<int>> adj(num_vertices);  // incident basis cell ids
  std::vector<double> u(n), v(m);
  std::vector<char> known(num_vertices);
  std::vector<int> stack;
  std::vector<int> parent_vertex(num_vertices), parent_cell(num_vertices);
  std::vector<int> path_cells;

  SimplexStats local;
  SimplexStats& st = stats ? *stats : local;
  st = SimplexStats{};

  while (true) {
    for (auto& list : adj) list.clear();
    for (int b = 0; b < static_cast<int>(basis.size()); ++b) {
      adj[basis[b].row].push_back(b);
      adj[n + basis[b].col].push_back(b);
    }

    // Potentials u_i + v_y = c_iy on basic cells, rooted at example 0.
    std::fill(known.begin(), known.end(), 0);
    known[0] = 1;
    u[0] = 0.0;
    stack.assign(1, 0);
    while (!stack.empty()) {
      const int vertex = stack.back();
      stack.pop_back();
      for (int b : adj[vertex]) {
        const Cell& cell = basis[b];
        const int other = vertex < n ? n + cell.col : cell.row;
        if (known[other]) continue;
        if (other < n)
          u[other] = c(cell.row, cell.col) - v[cell.col];
        else
          v[other - n] = c(cell.row, cell.col) - u[cell.row];
        known[other] = 1;
        stack.push_back(other);
      }
    }

    // Entering cell: first (lexicographic) with negative reduced cost.
    int enter_row = -1, enter_col = -1;
    for (int i = 0; i < n && enter_row < 0; ++i)
      for (int y = 0; y < m; ++y)
        if (c(i, y) - u[i] - v[y] < -eps) {
          enter_row = i;
          enter_col = y;
          break;
        }
    if (enter_row < 0) break;  // optimal

    if (++st.pivots > max_pivots)
      throw SolverError("solve_simplex: pivot cap exceeded");

    // Unique tree path from the entering cell's class vertex back to its
    // example vertex; with the entering cell it closes the pivot cycle.
    std::fill(known.begin(), known.end(), 0);
    known[enter_row] = 1;
    stack.assign(1, enter_row);
    while (!stack.empty() && !known[n + enter_col]) {
      const int vertex = stack.back();
      stack.pop_back();
      for (int b : adj[vertex]) {
        const Cell& cell = basis[b];
        const int other = vertex < n ? n + cell.col : cell.row;
        if (known[other]) continue;
        known[other] = 1;
        parent_vertex[other] = vertex;
        parent_cell[other] = b;
        stack.push_back(other);
      }
    }
    if (!known[n + enter_col])
      throw std::logic_error("solve_simplex: basis lost connectivity");
    path_cells.clear();
    for (int vertex = n + enter_col; vertex != enter_row;
         vertex = parent_vertex[vertex])
      path_cells.push_back(parent_cell[vertex]);

    // Entering cell gains theta; path cells alternate minus, plus, minus...
    // starting at the class-vertex end. Theta is the min flow on the minus
    // cells; ties for the leaving cell break to the lexicographically
    // smallest, again per Bland.
    int theta = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < path_cells.size(); k += 2)
      theta = std::min(theta, basis[path_cells[k]].flow);
    int leave = -1;
    for (std::size_t k = 0; k < path_cells.size(); k += 2) {
      const Cell& cell = basis[path_cells[k]];
      if (cell.flow != theta) continue;
      if (leave < 0 || cell.row < basis[leave].row ||
          (cell.row == basis[leave].row && cell.col < basis[leave].col))
        leave = path_cells[k];
    }
    if (theta == 0) ++st.degenerate_pivots;
    for (std::size_t k = 0; k < path_cells.size(); ++k)
      basis[path_cells[k]].flow += (k % 2 == 0) ? -theta : theta;
    basis[leave] = {enter_row, enter_col, theta};
  }

  std::vector<int> labels(n, -1);
  for (const Cell& cell : basis) {
    if (cell.flow == 0) continue;
    if (cell.flow != 1 || labels[cell.row] != -1)
      throw std::logic_error("solve_simplex: non-unit flow in final basis");
    labels[cell.row] = cell.col;
  }
  for (int y : labels)
    if (y < 0) throw std::logic_error("solve_simplex: unassigned example");
  Assignment a = assignment_from_labels(std::move(labels), c);
  if (!assignment_matches_counts(a, counts))
    throw std::logic_error("solve_simplex: count constraint violated");
  return a;
}

}  // namespace tsmc
