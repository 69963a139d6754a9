#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsmc {

struct FeatureEntry {
  std::uint32_t id = 0;
  double value = 0.0;

  bool operator==(const FeatureEntry&) const = default;
};

/// Sparse feature vector: entries strictly increasing by feature id,
/// all values nonzero and finite.
struct SparseVector {
  std::vector<FeatureEntry> entries;

  bool operator==(const SparseVector&) const = default;

  std::size_t nnz() const { return entries.size(); }

  // One past the largest feature id, 0 when empty.
  std::size_t min_dim() const {
    return entries.empty() ? 0 : static_cast<std::size_t>(entries.back().id) + 1;
  }
};

// Sorts entries by id, drops exact zeros, rejects duplicates and
// non-finite values. Throws std::invalid_argument with `context` prefixed.
inline SparseVector make_sparse_vector(std::vector<FeatureEntry> raw,
                                       const std::string& context = {}) {
  auto fail = [&](const std::string& msg) -> void {
    throw std::invalid_argument(context.empty() ? msg : context + ": " + msg);
  };
  std::stable_sort(raw.begin(), raw.end(),
                   [](const FeatureEntry& a, const FeatureEntry& b) { return a.id < b.id; });
  SparseVector out;
  out.entries.reserve(raw.size());
  for (const auto& e : raw) {
    if (!std::isfinite(e.value)) fail("non-finite value for feature " + std::to_string(e.id));
    if (!out.entries.empty() && out.entries.back().id == e.id)
      fail("duplicate feature id " + std::to_string(e.id));
    if (e.value == 0.0) continue;
    out.entries.push_back(e);
  }
  return out;
}

inline double dot(std::span<const double> dense, const SparseVector& x) {
  double s = 0.0;
  for (const auto& e : x.entries) s += dense[e.id] * e.value;
  return s;
}

inline void axpy(double scale, const SparseVector& x, std::span<double> dense) {
  for (const auto& e : x.entries) dense[e.id] += scale * e.value;
}

}  // namespace tsmc
