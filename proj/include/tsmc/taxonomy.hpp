#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsmc {

/// Rooted tree over class nodes. Node ids are contiguous 0..T-1; the root
/// is its own parent; `leaves` lists the predictable labels in order, so
/// label y corresponds to node leaves[y]. A flat m-class problem is the
/// depth-1 tree root + m leaf children.
struct Taxonomy {
  std::vector<int> parent;  // parent[root] == root
  std::vector<int> leaves;  // leaf node ids in label order
  int root = 0;

  int num_nodes() const { return static_cast<int>(parent.size()); }
  int num_leaves() const { return static_cast<int>(leaves.size()); }

  static Taxonomy flat(int num_classes) {
    if (num_classes < 2)
      throw std::invalid_argument("taxonomy: need at least 2 classes, got " +
                                  std::to_string(num_classes));
    Taxonomy t;
    t.parent.assign(static_cast<std::size_t>(num_classes) + 1, 0);
    t.leaves.resize(num_classes);
    for (int y = 0; y < num_classes; ++y) t.leaves[y] = y + 1;
    t.root = 0;
    t.validate();
    return t;
  }

  void validate() const {
    const int t = num_nodes();
    if (t < 3) throw std::invalid_argument("taxonomy: fewer than 3 nodes");
    int root_count = 0;
    int found_root = -1;
    for (int v = 0; v < t; ++v) {
      if (parent[v] < 0 || parent[v] >= t)
        throw std::invalid_argument("taxonomy: parent id out of range for node " +
                                    std::to_string(v));
      if (parent[v] == v) {
        ++root_count;
        found_root = v;
      }
    }
    if (root_count != 1)
      throw std::invalid_argument("taxonomy: expected exactly one root, found " +
                                  std::to_string(root_count));
    if (found_root != root)
      throw std::invalid_argument("taxonomy: root field does not match parent array");
    // Acyclic iff every node reaches the root in < T steps.
    for (int v = 0; v < t; ++v) {
      int cur = v;
      int steps = 0;
      while (cur != root) {
        cur = parent[cur];
        if (++steps >= t) throw std::invalid_argument("taxonomy: cycle detected");
      }
    }
    if (leaves.size() < 2)
      throw std::invalid_argument("taxonomy: need at least 2 leaves for classification");
    std::vector<int> child_count(t, 0);
    for (int v = 0; v < t; ++v)
      if (v != root) ++child_count[parent[v]];
    std::vector<bool> seen(t, false);
    for (int leaf : leaves) {
      if (leaf < 0 || leaf >= t)
        throw std::invalid_argument("taxonomy: leaf id out of range");
      if (seen[leaf]) throw std::invalid_argument("taxonomy: duplicate leaf id");
      seen[leaf] = true;
      if (child_count[leaf] != 0)
        throw std::invalid_argument("taxonomy: listed leaf " + std::to_string(leaf) +
                                    " has children");
      if (leaf == root) throw std::invalid_argument("taxonomy: root cannot be a leaf");
    }
  }
};

/// Per-leaf root-to-leaf node paths with the root excluded (a root block
/// would add the same constant to every class score).
struct PathSet {
  int num_nodes = 0;
  std::vector<std::vector<int>> paths;  // per label, order root->leaf

  int num_leaves() const { return static_cast<int>(paths.size()); }

  static PathSet from(const Taxonomy& taxo) {
    taxo.validate();
    PathSet ps;
    ps.num_nodes = taxo.num_nodes();
    ps.paths.resize(taxo.leaves.size());
    for (std::size_t y = 0; y < taxo.leaves.size(); ++y) {
      std::vector<int> rev;
      for (int cur = taxo.leaves[y]; cur != taxo.root; cur = taxo.parent[cur])
        rev.push_back(cur);
      ps.paths[y].assign(rev.rbegin(), rev.rend());
      if (ps.paths[y].empty())
        throw std::invalid_argument("taxonomy: empty path for label " + std::to_string(y));
    }
    return ps;
  }
};

// File format: one line per node, "<node_id> <parent_id> <leaf_flag>";
// the root has parent_id equal to its own id; '#' lines are comments.
// Label order follows the order of leaf-flagged lines.
inline Taxonomy load_taxonomy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open taxonomy file: " + path);
  std::vector<std::pair<int, int>> rows;  // (node, parent)
  std::vector<int> leaf_order;
  std::string line;
  int line_no = 0;
  int max_id = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int node = -1, par = -1, leaf_flag = -1;
    if (!(ls >> node >> par >> leaf_flag) || node < 0 || par < 0 ||
        (leaf_flag != 0 && leaf_flag != 1)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected '<node_id> <parent_id> <leaf_flag>'");
    }
    rows.emplace_back(node, par);
    if (leaf_flag == 1) leaf_order.push_back(node);
    max_id = std::max(max_id, std::max(node, par));
  }
  Taxonomy t;
  t.parent.assign(static_cast<std::size_t>(max_id) + 1, -1);
  for (const auto& [node, par] : rows) {
    if (t.parent[node] != -1)
      throw std::runtime_error(path + ": node " + std::to_string(node) + " defined twice");
    t.parent[node] = par;
  }
  for (int v = 0; v <= max_id; ++v)
    if (t.parent[v] == -1)
      throw std::runtime_error(path + ": node ids not contiguous, missing " +
                               std::to_string(v));
  for (int v = 0; v <= max_id; ++v)
    if (t.parent[v] == v) t.root = v;
  t.leaves = leaf_order;
  t.validate();
  return t;
}

inline void save_taxonomy(const std::string& path, const Taxonomy& taxo) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write taxonomy file: " + path);
  std::vector<bool> is_leaf(taxo.parent.size(), false);
  for (int leaf : taxo.leaves) is_leaf[leaf] = true;
  for (int v = 0; v < taxo.num_nodes(); ++v)
    out << v << ' ' << taxo.parent[v] << ' ' << (is_leaf[v] ? 1 : 0) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tsmc
