#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "tsmc/dataset.hpp"
#include "tsmc/rng.hpp"
#include "tsmc/sparse_vector.hpp"

namespace tsmc {

/// Gaussian blobs with one signature feature block per class plus shared
/// nuisance features; classes appear round-robin so any prefix is nearly
/// balanced.
struct ClustersParams {
  int num_classes = 4;
  int per_class = 100;
  int features_per_class = 2;
  int noise_features = 4;
  double signature_mean = 1.0;
  double noise_sigma = 0.5;
};

inline Dataset make_clusters(const ClustersParams& p, std::uint64_t seed) {
  if (p.num_classes < 2) throw std::invalid_argument("make_clusters: need >= 2 classes");
  if (p.per_class < 1) throw std::invalid_argument("make_clusters: need >= 1 per class");
  if (p.features_per_class < 1 || p.noise_features < 0)
    throw std::invalid_argument("make_clusters: bad feature counts");
  if (!(p.noise_sigma > 0.0)) throw std::invalid_argument("make_clusters: bad sigma");

  const int dim = p.num_classes * p.features_per_class + p.noise_features;
  const int total = p.num_classes * p.per_class;
  Rng rng(seed);
  Dataset d;
  d.feature_dim = static_cast<std::size_t>(dim);
  d.labels.emplace();
  for (int i = 0; i < total; ++i) {
    const int y = i % p.num_classes;
    std::vector<FeatureEntry> entries;
    entries.reserve(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      const bool signature =
          j >= y * p.features_per_class && j < (y + 1) * p.features_per_class;
      const double mu = signature ? p.signature_mean : 0.0;
      entries.push_back({static_cast<std::uint32_t>(j), rng.normal(mu, p.noise_sigma)});
    }
    d.examples.push_back(make_sparse_vector(std::move(entries)));
    d.labels->push_back(y);
  }
  return d;
}

/// Bag-of-words documents: each class boosts its own slice of the
/// vocabulary, token counts become feature values.
struct SparseTextParams {
  int num_classes = 4;
  int per_class = 100;
  int vocab = 256;
  int doc_length = 40;
  double boost = 8.0;
};

inline Dataset make_sparse_text(const SparseTextParams& p, std::uint64_t seed) {
  if (p.num_classes < 2) throw std::invalid_argument("make_sparse_text: need >= 2 classes");
  if (p.per_class < 1) throw std::invalid_argument("make_sparse_text: need >= 1 per class");
  if (p.vocab < p.num_classes) throw std::invalid_argument("make_sparse_text: vocab too small");
  if (p.doc_length < 1) throw std::invalid_argument("make_sparse_text: bad doc length");
  if (!(p.boost >= 1.0)) throw std::invalid_argument("make_sparse_text: boost must be >= 1");

  const int block = p.vocab / p.num_classes;
  std::vector<std::vector<double>> cdf(p.num_classes, std::vector<double>(p.vocab));
  for (int y = 0; y < p.num_classes; ++y) {
    double acc = 0.0;
    for (int w = 0; w < p.vocab; ++w) {
      const bool boosted = w >= y * block && w < (y + 1) * block;
      acc += boosted ? p.boost : 1.0;
      cdf[y][w] = acc;
    }
  }

  const int total = p.num_classes * p.per_class;
  Rng rng(seed);
  Dataset d;
  d.feature_dim = static_cast<std::size_t>(p.vocab);
  d.labels.emplace();
  for (int i = 0; i < total; ++i) {
    const int y = i % p.num_classes;
    std::map<int, int> counts;
    for (int k = 0; k < p.doc_length; ++k) {
      const double u = rng.uniform() * cdf[y].back();
      const auto it = std::upper_bound(cdf[y].begin(), cdf[y].end(), u);
      const int w = static_cast<int>(it - cdf[y].begin());
      ++counts[std::min(w, p.vocab - 1)];
    }
    std::vector<FeatureEntry> entries;
    entries.reserve(counts.size());
    for (const auto& [w, cnt] : counts)
      entries.push_back({static_cast<std::uint32_t>(w), static_cast<double>(cnt)});
    d.examples.push_back(make_sparse_vector(std::move(entries)));
    d.labels->push_back(y);
  }
  return d;
}

}  // namespace tsmc
