#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "test_util.hpp"
#include "tsmc/dataset.hpp"
#include "tsmc/sparse_vector.hpp"

using namespace tsmc;

TEST_CASE("make_sparse_vector canonicalizes entries", "[sparse]") {
  SparseVector x = make_sparse_vector({{5, 1.0}, {2, -3.0}, {9, 0.5}});
  REQUIRE(x.nnz() == 3);
  REQUIRE(x.entries[0].id == 2);
  REQUIRE(x.entries[1].id == 5);
  REQUIRE(x.entries[2].id == 9);
  REQUIRE(x.min_dim() == 10);

  SparseVector dropped = make_sparse_vector({{1, 0.0}, {3, 2.0}});
  REQUIRE(dropped.nnz() == 1);
  REQUIRE(dropped.entries[0].id == 3);

  REQUIRE_THROWS(make_sparse_vector({{1, 1.0}, {1, 2.0}}));
  REQUIRE_THROWS(make_sparse_vector({{0, std::numeric_limits<double>::quiet_NaN()}}));
}

TEST_CASE("dot and axpy agree with dense arithmetic", "[sparse]") {
  const SparseVector x = make_sparse_vector({{0, 2.0}, {3, -1.5}});
  std::vector<double> w = {1.0, 10.0, 10.0, 4.0};
  REQUIRE(dot(w, x) == 2.0 * 1.0 + (-1.5) * 4.0);
  axpy(2.0, x, w);
  REQUIRE(w == std::vector<double>{5.0, 10.0, 10.0, 1.0});
}

TEST_CASE("dataset files parse labels, comments, and features", "[dataset]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("train.txt");
  testutil::write_file(path,
                       "# a comment\n"
                       "1 0:1.5 3:2\n"
                       "\n"
                       "0 2:-1\n");
  const Dataset d = load_dataset(path, 3);
  REQUIRE(d.size() == 2);
  REQUIRE(d.is_labeled());
  REQUIRE(*d.labels == std::vector<int>{1, 0});
  REQUIRE(d.feature_dim == 4);
  REQUIRE(d.examples[0].entries[1].value == 2.0);
}

TEST_CASE("unlabeled files use question marks and stay unlabeled", "[dataset]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("unl.txt");
  testutil::write_file(path, "? 0:1\n? 1:2\n");
  const Dataset d = load_dataset(path);
  REQUIRE_FALSE(d.is_labeled());
  REQUIRE(d.size() == 2);
}

TEST_CASE("dataset parse errors carry file and line context", "[dataset]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("bad.txt");

  testutil::write_file(path, "1 0:1\n? 1:2\n");
  REQUIRE_THROWS_WITH(load_dataset(path), Catch::Matchers::ContainsSubstring(":2"));

  testutil::write_file(path, "1 0:abc\n");
  REQUIRE_THROWS_WITH(load_dataset(path), Catch::Matchers::ContainsSubstring("bad number"));

  testutil::write_file(path, "5 0:1\n");
  REQUIRE_THROWS_WITH(load_dataset(path, 3),
                      Catch::Matchers::ContainsSubstring("out of range"));

  testutil::write_file(path, "1 0:1 0:2\n");
  REQUIRE_THROWS(load_dataset(path));

  testutil::write_file(path, "1 7:1\n");
  REQUIRE_THROWS_WITH(load_dataset(path, -1, 4),
                      Catch::Matchers::ContainsSubstring("feature id"));

  REQUIRE_THROWS(load_dataset(tmp.file("missing.txt")));
}

TEST_CASE("dataset save/load round-trips exactly", "[dataset]") {
  testutil::TempDir tmp;
  Dataset d;
  d.labels.emplace();
  d.examples.push_back(make_sparse_vector({{0, 0.1}, {5, -2.25}}));
  d.labels->push_back(2);
  d.examples.push_back(make_sparse_vector({{1, 1e-17}}));
  d.labels->push_back(0);
  d.feature_dim = 6;

  const auto path = tmp.file("round.txt");
  save_dataset(path, d, {"header line"});
  const Dataset back = load_dataset(path, 3, 6);
  REQUIRE(back == d);
  REQUIRE(testutil::read_file(path).starts_with("# header line\n"));
}

TEST_CASE("split_dataset produces floor-sized unlabeled and labeled parts", "[dataset]") {
  Dataset d;
  d.labels.emplace();
  d.feature_dim = 1;
  for (int i = 0; i < 100; ++i) {
    d.examples.push_back(make_sparse_vector({{0, static_cast<double>(i + 1)}}));
    d.labels->push_back(i % 4);
  }
  const SplitResult r = split_dataset(d, 0.5, 0.2, 9);
  REQUIRE(r.unlabeled.size() == 50);
  REQUIRE(r.labeled.size() == 20);
  REQUIRE(r.test.size() == 30);
  REQUIRE_FALSE(r.unlabeled.is_labeled());
  REQUIRE(r.unlabeled_gold.size() == 50);
  REQUIRE(r.labeled.is_labeled());
  REQUIRE(r.test.is_labeled());

  // The gold labels kept aside match the true labels by feature identity.
  for (std::size_t i = 0; i < r.unlabeled.size(); ++i) {
    const int original = static_cast<int>(r.unlabeled.examples[i].entries[0].value) - 1;
    REQUIRE(r.unlabeled_gold[i] == original % 4);
  }

  // All 100 examples appear exactly once across the three parts.
  std::vector<int> seen;
  for (const auto& part : {r.labeled, r.unlabeled, r.test})
    for (const auto& x : part.examples)
      seen.push_back(static_cast<int>(x.entries[0].value));
  std::sort(seen.begin(), seen.end());
  for (int i = 0; i < 100; ++i) REQUIRE(seen[i] == i + 1);

  const SplitResult again = split_dataset(d, 0.5, 0.2, 9);
  REQUIRE(again.labeled == r.labeled);
  REQUIRE(again.unlabeled == r.unlabeled);
  REQUIRE(again.test == r.test);

  const SplitResult other = split_dataset(d, 0.5, 0.2, 10);
  REQUIRE(other.labeled.examples != r.labeled.examples);
}

TEST_CASE("split_dataset rejects bad fractions and small inputs", "[dataset]") {
  Dataset d;
  d.labels.emplace();
  d.feature_dim = 1;
  for (int i = 0; i < 10; ++i) {
    d.examples.push_back(make_sparse_vector({{0, 1.0}}));
    d.labels->push_back(0);
  }
  REQUIRE_THROWS(split_dataset(d, 0.0, 0.5, 1));
  REQUIRE_THROWS(split_dataset(d, 0.7, 0.3, 1));
  REQUIRE_THROWS(split_dataset(d, 0.95, 0.04, 1));
  Dataset unlabeled;
  unlabeled.examples = d.examples;
  REQUIRE_THROWS(split_dataset(unlabeled, 0.5, 0.2, 1));
}

TEST_CASE("derive_label_counts apportions by largest remainder", "[counts]") {
  const LabelCounts c = derive_label_counts({0.5, 0.3, 0.2}, 7);
  REQUIRE(c.counts == std::vector<int>{4, 2, 1});
  REQUIRE(c.total() == 7);

  // Remainder ties go to the lower class index.
  REQUIRE(derive_label_counts({0.5, 0.5}, 3).counts == std::vector<int>{2, 1});

  REQUIRE(derive_label_counts({0.25, 0.25, 0.25, 0.25}, 8).counts ==
          std::vector<int>{2, 2, 2, 2});
  REQUIRE(derive_label_counts({1.0}, 5).counts == std::vector<int>{5});
  REQUIRE(derive_label_counts({0.6, 0.4}, 0).counts == std::vector<int>{0, 0});

  REQUIRE_THROWS(derive_label_counts({0.5, 0.6}, 4));
  REQUIRE_THROWS(derive_label_counts({-0.1, 1.1}, 4));
  REQUIRE_THROWS(derive_label_counts({}, 4));
  REQUIRE_THROWS(derive_label_counts({0.5, 0.5}, -1));
}

TEST_CASE("counts_from_labels and proportions round-trip", "[counts]") {
  const std::vector<int> labels = {0, 2, 2, 1, 2};
  const LabelCounts c = counts_from_labels(labels, 3);
  REQUIRE(c.counts == std::vector<int>{1, 1, 3});
  const auto phi = proportions_from_labels(labels, 3);
  REQUIRE(phi[2] == Catch::Approx(0.6));
  REQUIRE(derive_label_counts(phi, 5).counts == c.counts);
  REQUIRE_THROWS(counts_from_labels({0, 3}, 3));
}
