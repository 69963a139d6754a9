#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "test_util.hpp"
#include "tsmc/taxonomy.hpp"

using namespace tsmc;

TEST_CASE("flat taxonomy has the root plus one leaf per class", "[taxonomy]") {
  const Taxonomy t = Taxonomy::flat(4);
  REQUIRE(t.num_nodes() == 5);
  REQUIRE(t.num_leaves() == 4);
  REQUIRE(t.root == 0);
  REQUIRE(t.leaves == std::vector<int>{1, 2, 3, 4});

  const PathSet ps = PathSet::from(t);
  REQUIRE(ps.num_nodes == 5);
  for (int y = 0; y < 4; ++y) REQUIRE(ps.paths[y] == std::vector<int>{y + 1});

  REQUIRE_THROWS(Taxonomy::flat(1));
}

TEST_CASE("two-level taxonomy paths run root to leaf, root excluded", "[taxonomy]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("taxo.txt");
  testutil::write_file(path,
                       "# node parent leaf\n"
                       "0 0 0\n"
                       "1 0 0\n"
                       "2 0 0\n"
                       "3 1 1\n"
                       "4 1 1\n"
                       "5 2 1\n"
                       "6 2 1\n");
  const Taxonomy t = load_taxonomy(path);
  REQUIRE(t.num_nodes() == 7);
  REQUIRE(t.num_leaves() == 4);
  REQUIRE(t.root == 0);

  const PathSet ps = PathSet::from(t);
  REQUIRE(ps.paths[0] == std::vector<int>{1, 3});
  REQUIRE(ps.paths[1] == std::vector<int>{1, 4});
  REQUIRE(ps.paths[2] == std::vector<int>{2, 5});
  REQUIRE(ps.paths[3] == std::vector<int>{2, 6});
}

TEST_CASE("label order follows leaf line order in the file", "[taxonomy]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("taxo.txt");
  testutil::write_file(path,
                       "0 0 0\n"
                       "2 0 1\n"
                       "1 0 1\n");
  const Taxonomy t = load_taxonomy(path);
  REQUIRE(t.leaves == std::vector<int>{2, 1});
}

TEST_CASE("taxonomy loader rejects malformed trees", "[taxonomy]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("taxo.txt");

  testutil::write_file(path, "0 0 0\n1 0 1\n2 2 1\n");  // two roots
  REQUIRE_THROWS_WITH(load_taxonomy(path), Catch::Matchers::ContainsSubstring("root"));

  testutil::write_file(path, "0 0 0\n1 2 1\n2 1 1\n");  // cycle 1<->2
  REQUIRE_THROWS_WITH(load_taxonomy(path), Catch::Matchers::ContainsSubstring("cycle"));

  testutil::write_file(path, "0 0 0\n1 0 1\n3 0 1\n");  // missing node 2
  REQUIRE_THROWS_WITH(load_taxonomy(path),
                      Catch::Matchers::ContainsSubstring("contiguous"));

  testutil::write_file(path, "0 0 0\n1 0 1\n1 0 1\n2 0 1\n");  // duplicate node
  REQUIRE_THROWS_WITH(load_taxonomy(path), Catch::Matchers::ContainsSubstring("twice"));

  testutil::write_file(path, "0 0 0\n1 0 1\n2 1 1\n");  // leaf 1 has a child
  REQUIRE_THROWS_WITH(load_taxonomy(path), Catch::Matchers::ContainsSubstring("children"));

  testutil::write_file(path, "0 0 0\n1 0 1\n2 0 0\n");  // single leaf
  REQUIRE_THROWS(load_taxonomy(path));

  testutil::write_file(path, "0 0 x\n");
  REQUIRE_THROWS_WITH(load_taxonomy(path), Catch::Matchers::ContainsSubstring(":1"));

  REQUIRE_THROWS(load_taxonomy(tmp.file("missing.txt")));
}

TEST_CASE("taxonomy save/load round-trips", "[taxonomy]") {
  testutil::TempDir tmp;
  const auto path = tmp.file("taxo.txt");
  const Taxonomy t = Taxonomy::flat(3);
  save_taxonomy(path, t);
  const Taxonomy back = load_taxonomy(path);
  REQUIRE(back.parent == t.parent);
  REQUIRE(back.leaves == t.leaves);
  REQUIRE(back.root == t.root);
}
