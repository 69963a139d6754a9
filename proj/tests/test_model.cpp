#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <vector>

#include "test_util.hpp"
#include "tsmc/model.hpp"
#include "tsmc/rng.hpp"
#include "tsmc/taxonomy.hpp"

using namespace tsmc;

namespace {

Model flat_model(int m, std::size_t dim) {
  return Model::create(PathSet::from(Taxonomy::flat(m)), dim);
}

}  // namespace

TEST_CASE("zero model scores zero and predicts the first class", "[model]") {
  const Model m = flat_model(3, 4);
  const SparseVector x = make_sparse_vector({{0, 1.0}, {2, 5.0}});
  REQUIRE(m.score(x, 0) == 0.0);
  REQUIRE(m.predict(x) == 0);
}

TEST_CASE("score and score_all agree bit for bit", "[model]") {
  Model m = flat_model(4, 6);
  Rng rng(21);
  for (double& w : m.w) w = rng.normal();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FeatureEntry> raw;
    for (int j = 0; j < 6; ++j)
      if (rng.uniform() < 0.7) raw.push_back({static_cast<std::uint32_t>(j), rng.normal()});
    const SparseVector x = make_sparse_vector(std::move(raw));
    std::vector<double> all(4);
    m.score_all(x, all);
    for (int y = 0; y < 4; ++y) REQUIRE(m.score(x, y) == all[y]);
  }
}

TEST_CASE("predict breaks ties toward the lowest label", "[model]") {
  Model m = flat_model(3, 1);
  m.node_w(1)[0] = 2.0;
  m.node_w(3)[0] = 2.0;  // classes 0 and 2 tie
  const SparseVector x = make_sparse_vector({{0, 1.0}});
  REQUIRE(m.predict(x) == 0);
}

TEST_CASE("hierarchical scores sum weights along the leaf path", "[model]") {
  Taxonomy t;
  t.parent = {0, 0, 0, 1, 1, 2, 2};
  t.leaves = {3, 4, 5, 6};
  t.root = 0;
  Model m = Model::create(PathSet::from(t), 1);
  const SparseVector x = make_sparse_vector({{0, 1.0}});
  m.node_w(1)[0] = 1.0;  // shared internal node for labels 0 and 1
  m.node_w(3)[0] = 0.5;  // leaf for label 0
  REQUIRE(m.score(x, 0) == 1.5);
  REQUIRE(m.score(x, 1) == 1.0);
  REQUIRE(m.score(x, 2) == 0.0);
  REQUIRE(m.predict(x) == 0);

  m.accumulate_feature(2, x, 0.25);  // bumps nodes 2 and 5
  REQUIRE(m.score(x, 2) == 0.5);
  REQUIRE(m.score(x, 3) == 0.25);
}

TEST_CASE("squared_norm and scale cover every node block", "[model]") {
  Model m = flat_model(2, 2);
  m.node_w(1)[0] = 3.0;
  m.node_w(2)[1] = 4.0;
  REQUIRE(m.squared_norm() == 25.0);
  m.scale(0.5);
  REQUIRE(m.node_w(1)[0] == 1.5);
  REQUIRE(m.squared_norm() == 6.25);
}

TEST_CASE("model files round-trip weights, paths, and metadata", "[model]") {
  testutil::TempDir tmp;
  Taxonomy t;
  t.parent = {0, 0, 0, 1, 1, 2, 2};
  t.leaves = {3, 4, 5, 6};
  t.root = 0;
  Model m = Model::create(PathSet::from(t), 5);
  Rng rng(77);
  for (double& w : m.w) w = rng.normal();
  m.metadata = "loss=margin lambda=10";

  const auto path = tmp.file("model.bin");
  save_model(path, m);
  const Model back = load_model(path);
  REQUIRE(back.dim == m.dim);
  REQUIRE(back.metadata == m.metadata);
  REQUIRE(back.paths.num_nodes == m.paths.num_nodes);
  REQUIRE(back.paths.paths == m.paths.paths);
  REQUIRE(back.w.size() == m.w.size());
  REQUIRE(std::memcmp(back.w.data(), m.w.data(), m.w.size() * sizeof(double)) == 0);
}

TEST_CASE("model loader rejects corrupt files", "[model]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("bad.bin");
  testutil::write_file(path, "definitely not a model");
  REQUIRE_THROWS_WITH(load_model(path), Catch::Matchers::ContainsSubstring("magic"));

  Model m = flat_model(2, 3);
  const auto good = tmp.file("good.bin");
  save_model(good, m);
  const std::string bytes = testutil::read_file(good);
  testutil::write_file(path, bytes.substr(0, bytes.size() / 2));
  REQUIRE_THROWS_WITH(load_model(path), Catch::Matchers::ContainsSubstring("truncated"));

  REQUIRE_THROWS(load_model(tmp.file("missing.bin")));
}

TEST_CASE("text dump lists nodes and nonzero coordinates", "[model]") {
  testutil::TempDir tmp;
  Model m = flat_model(2, 2);
  m.node_w(1)[1] = -2.5;
  const auto path = tmp.file("model.txt");
  save_model_text(path, m);
  const std::string dump = testutil::read_file(path);
  REQUIRE(dump.find("node 1 1:-2.5") != std::string::npos);
  REQUIRE(dump.find("leaf 0 path 1") != std::string::npos);
}
