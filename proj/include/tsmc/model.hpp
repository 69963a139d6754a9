#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsmc/dataset.hpp"
#include "tsmc/sparse_vector.hpp"
#include "tsmc/taxonomy.hpp"

namespace tsmc {

/// Linear scorer over a label tree: one weight block per node, and the
/// score of a leaf is the sum of its path nodes' dot products with the
/// input. A flat label set is the special case of depth-one paths.
struct Model {
  PathSet paths;
  std::size_t dim = 0;
  std::vector<double> w;  // paths.num_nodes blocks of dim doubles
  std::string metadata;   // free-form, carried through serialization

  static Model create(PathSet ps, std::size_t dim) {
    Model m;
    m.paths = std::move(ps);
    m.dim = dim;
    m.w.assign(static_cast<std::size_t>(m.paths.num_nodes) * dim, 0.0);
    return m;
  }

  int num_leaves() const { return paths.num_leaves(); }

  std::span<double> node_w(int node) {
    return {w.data() + static_cast<std::size_t>(node) * dim, dim};
  }
  std::span<const double> node_w(int node) const {
    return {w.data() + static_cast<std::size_t>(node) * dim, dim};
  }

  double score(const SparseVector& x, int leaf) const {
    double s = 0.0;
    for (int node : paths.paths[leaf]) s += dot(node_w(node), x);
    return s;
  }

  // Fills out[y] with score(x, y); per-leaf arithmetic matches score()
  // exactly so the two entry points never disagree in the last bit.
  void score_all(const SparseVector& x, std::span<double> out) const {
    for (int y = 0; y < num_leaves(); ++y) {
      double s = 0.0;
      for (int node : paths.paths[y]) s += dot(node_w(node), x);
      out[y] = s;
    }
  }

  // Argmax of score over leaves, lowest index on ties.
  int predict(const SparseVector& x) const {
    std::vector<double> s(num_leaves());
    score_all(x, s);
    int best = 0;
    for (int y = 1; y < num_leaves(); ++y)
      if (s[y] > s[best]) best = y;
    return best;
  }

  // Adds step * x to every node block on the leaf's path.
  void accumulate_feature(int leaf, const SparseVector& x, double step) {
    for (int node : paths.paths[leaf]) axpy(step, x, node_w(node));
  }

  double squared_norm() const {
    double s = 0.0;
    for (double v : w) s += v * v;
    return s;
  }

  void scale(double factor) {
    for (double& v : w) v *= factor;
  }
};

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

template <class T>
void write_raw(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::ifstream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated model file: " + path);
  return v;
}

}  // namespace detail

inline constexpr char kModelMagic[8] = {'T', 'S', 'M', 'C', 'M', 'D', '0', '1'};

inline void save_model(const std::string& path, const Model& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out.write(kModelMagic, sizeof(kModelMagic));
  detail::write_raw<std::uint64_t>(out, m.dim);
  detail::write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(m.paths.num_nodes));
  detail::write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(m.num_leaves()));
  for (const auto& path_nodes : m.paths.paths) {
    detail::write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(path_nodes.size()));
    for (int node : path_nodes)
      detail::write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(node));
  }
  detail::write_raw<std::uint64_t>(out, m.metadata.size());
  out.write(m.metadata.data(), static_cast<std::streamsize>(m.metadata.size()));
  out.write(reinterpret_cast<const char*>(m.w.data()),
            static_cast<std::streamsize>(m.w.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a model file (bad magic): " + path);
  Model m;
  m.dim = detail::read_raw<std::uint64_t>(in, path);
  m.paths.num_nodes = static_cast<int>(detail::read_raw<std::uint32_t>(in, path));
  const auto num_leaves = detail::read_raw<std::uint32_t>(in, path);
  m.paths.paths.resize(num_leaves);
  for (auto& path_nodes : m.paths.paths) {
    const auto len = detail::read_raw<std::uint32_t>(in, path);
    if (len == 0) throw std::runtime_error("empty leaf path in model file: " + path);
    path_nodes.resize(len);
    for (auto& node : path_nodes) {
      const auto id = detail::read_raw<std::uint32_t>(in, path);
      if (id >= static_cast<std::uint32_t>(m.paths.num_nodes))
        throw std::runtime_error("node id out of range in model file: " + path);
      node = static_cast<int>(id);
    }
  }
  const auto meta_len = detail::read_raw<std::uint64_t>(in, path);
  m.metadata.resize(meta_len);
  in.read(m.metadata.data(), static_cast<std::streamsize>(meta_len));
  m.w.resize(static_cast<std::size_t>(m.paths.num_nodes) * m.dim);
  in.read(reinterpret_cast<char*>(m.w.data()),
          static_cast<std::streamsize>(m.w.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated model file: " + path);
  for (double v : m.w)
    if (!std::isfinite(v))
      throw std::runtime_error("non-finite weight in model file: " + path);
  return m;
}

// Human-readable dump: one line per node listing its nonzero coordinates.
inline void save_model_text(const std::string& path, const Model& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model dump: " + path);
  out << "# dim " << m.dim << " nodes " << m.paths.num_nodes << " leaves "
      << m.num_leaves() << '\n';
  for (int y = 0; y < m.num_leaves(); ++y) {
    out << "# leaf " << y << " path";
    for (int node : m.paths.paths[y]) out << ' ' << node;
    out << '\n';
  }
  for (int node = 0; node < m.paths.num_nodes; ++node) {
    out << "node " << node;
    const auto block = m.node_w(node);
    for (std::size_t j = 0; j < block.size(); ++j)
      if (block[j] != 0.0) out << ' ' << j << ':' << detail::format_double(block[j]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tsmc
