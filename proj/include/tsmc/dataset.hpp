#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tsmc/rng.hpp"
#include "tsmc/sparse_vector.hpp"

namespace tsmc {

/// A set of sparse examples, optionally labeled (labels are leaf indices).
/// Unlabeled sets carry no labels at all; files must be homogeneous.
struct Dataset {
  std::vector<SparseVector> examples;
  std::optional<std::vector<int>> labels;
  std::size_t feature_dim = 0;

  std::size_t size() const { return examples.size(); }
  bool is_labeled() const { return labels.has_value(); }

  bool operator==(const Dataset&) const = default;
};

/// Integer per-class targets n(y); counts sum to the unlabeled-set size.
struct LabelCounts {
  std::vector<int> counts;

  int num_classes() const { return static_cast<int>(counts.size()); }
  long long total() const {
    return std::accumulate(counts.begin(), counts.end(), 0LL);
  }
};

namespace detail {

inline double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error(where + ": bad number '" + std::string(s) + "'");
  return v;
}

inline long parse_long(std::string_view s, const std::string& where) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error(where + ": bad integer '" + std::string(s) + "'");
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Line format: "<label> <id>:<val> ..." with label a leaf index or '?' for
// unlabeled lines; '#' lines are comments. Entries are canonicalized to
// ascending feature id; duplicate ids are rejected. When num_classes >= 0,
// labels are range-checked against it; when expected_dim >= 0, feature ids
// are range-checked and the result uses that dimension.
inline Dataset load_dataset(const std::string& path, long num_classes = -1,
                            long expected_dim = -1) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  Dataset d;
  bool saw_labeled = false, saw_unlabeled = false;
  std::vector<int> labels;
  std::string line;
  int line_no = 0;
  std::size_t max_dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line.empty() || line[0] == '#') continue;
    std::string_view rest(line);
    auto next_token = [&]() -> std::string_view {
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t' ||
                               rest.front() == '\r'))
        rest.remove_prefix(1);
      std::size_t end = 0;
      while (end < rest.size() && rest[end] != ' ' && rest[end] != '\t' &&
             rest[end] != '\r')
        ++end;
      const std::string_view tok = rest.substr(0, end);
      rest.remove_prefix(end);
      return tok;
    };
    const std::string_view label_tok = next_token();
    if (label_tok.empty()) continue;  // whitespace-only line
    if (label_tok == "?") {
      saw_unlabeled = true;
    } else {
      const long y = detail::parse_long(label_tok, where);
      if (y < 0 || (num_classes >= 0 && y >= num_classes))
        throw std::runtime_error(where + ": label " + std::to_string(y) +
                                 " out of range");
      labels.push_back(static_cast<int>(y));
      saw_labeled = true;
    }
    if (saw_labeled && saw_unlabeled)
      throw std::runtime_error(where + ": mixed labeled and unlabeled lines in one file");
    std::vector<FeatureEntry> entries;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size())
        throw std::runtime_error(where + ": expected '<id>:<val>', got '" +
                                 std::string(tok) + "'");
      const long id = detail::parse_long(tok.substr(0, colon), where);
      if (id < 0 || (expected_dim >= 0 && id >= expected_dim))
        throw std::runtime_error(where + ": feature id " + std::to_string(id) +
                                 " out of range");
      const double val = detail::parse_double(tok.substr(colon + 1), where);
      entries.push_back({static_cast<std::uint32_t>(id), val});
    }
    d.examples.push_back(make_sparse_vector(std::move(entries), where));
    max_dim = std::max(max_dim, d.examples.back().min_dim());
  }
  if (saw_labeled) d.labels = std::move(labels);
  d.feature_dim = expected_dim >= 0 ? static_cast<std::size_t>(expected_dim) : max_dim;
  return d;
}

// Writes the same line format load_dataset reads; values use shortest
// round-trip formatting so save/load is lossless. Extra header lines are
// emitted as '#' comments.
inline void save_dataset(const std::string& path, const Dataset& d,
                         const std::vector<std::string>& header_lines = {}) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const auto& h : header_lines) out << "# " << h << '\n';
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    if (d.labels)
      out << (*d.labels)[i];
    else
      out << '?';
    for (const auto& e : d.examples[i].entries)
      out << ' ' << e.id << ':' << detail::format_double(e.value);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct SplitResult {
  Dataset labeled;
  Dataset unlabeled;           // labels stripped
  std::vector<int> unlabeled_gold;  // kept aside for transduction scoring
  Dataset test;
};

// Shuffles with the given seed, takes floor(frac_unlabeled*N) examples for
// the unlabeled split and floor(frac_labeled*N) for the labeled split; the
// remainder is the test split.
inline SplitResult split_dataset(const Dataset& d, double frac_unlabeled,
                                 double frac_labeled, std::uint64_t seed) {
  if (!d.is_labeled())
    throw std::invalid_argument("split_dataset: input must be fully labeled");
  if (!(frac_unlabeled > 0.0) || !(frac_labeled > 0.0) ||
      !(frac_unlabeled + frac_labeled < 1.0))
    throw std::invalid_argument("split_dataset: fractions must be positive and sum below 1");
  const std::size_t n = d.size();
  const auto n_u = static_cast<std::size_t>(std::floor(frac_unlabeled * static_cast<double>(n)));
  const auto n_l = static_cast<std::size_t>(std::floor(frac_labeled * static_cast<double>(n)));
  if (n_u < 1 || n_l < 1 || n_u + n_l >= n)
    throw std::invalid_argument("split_dataset: dataset too small for requested fractions");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  SplitResult r;
  r.labeled.feature_dim = r.unlabeled.feature_dim = r.test.feature_dim = d.feature_dim;
  r.labeled.labels.emplace();
  r.test.labels.emplace();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (k < n_u) {
      r.unlabeled.examples.push_back(d.examples[i]);
      r.unlabeled_gold.push_back((*d.labels)[i]);
    } else if (k < n_u + n_l) {
      r.labeled.examples.push_back(d.examples[i]);
      r.labeled.labels->push_back((*d.labels)[i]);
    } else {
      r.test.examples.push_back(d.examples[i]);
      r.test.labels->push_back((*d.labels)[i]);
    }
  }
  return r;
}

// Largest-remainder (Hamilton) apportionment of n into round(phi*n);
// ties broken toward the lower class index.
inline LabelCounts derive_label_counts(const std::vector<double>& phi, int n) {
  if (phi.empty()) throw std::invalid_argument("derive_label_counts: empty phi");
  if (n < 0) throw std::invalid_argument("derive_label_counts: negative n");
  double sum = 0.0;
  for (double p : phi) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("derive_label_counts: phi entries must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("derive_label_counts: phi must sum to 1 (got " +
                                std::to_string(sum) + ")");
  const int m = static_cast<int>(phi.size());
  LabelCounts lc;
  lc.counts.resize(m);
  std::vector<double> remainder(m);
  long long assigned = 0;
  for (int y = 0; y < m; ++y) {
    const double raw = phi[y] * n;
    lc.counts[y] = static_cast<int>(std::floor(raw));
    remainder[y] = raw - std::floor(raw);
    assigned += lc.counts[y];
  }
  long long extra = n - assigned;
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int k = 0; k < m && extra > 0; ++k, --extra) ++lc.counts[idx[k]];
  return lc;
}

inline LabelCounts counts_from_labels(const std::vector<int>& labels, int m) {
  LabelCounts lc;
  lc.counts.assign(m, 0);
  for (int y : labels) {
    if (y < 0 || y >= m)
      throw std::invalid_argument("counts_from_labels: label out of range");
    ++lc.counts[y];
  }
  return lc;
}

inline std::vector<double> proportions_from_labels(const std::vector<int>& labels, int m) {
  const LabelCounts lc = counts_from_labels(labels, m);
  std::vector<double> phi(m);
  for (int y = 0; y < m; ++y)
    phi[y] = labels.empty() ? 0.0 : static_cast<double>(lc.counts[y]) / labels.size();
  return phi;
}

}  // namespace tsmc
