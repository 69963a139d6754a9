#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "tsmc/metrics.hpp"
#include "tsmc/rng.hpp"

using namespace tsmc;

TEST_CASE("perfect predictions score macro-F of one", "[metrics]") {
  const std::vector<int> gold = {0, 1, 2, 1, 0};
  const ClassReport r = evaluate(gold, gold, 3);
  REQUIRE(r.macro_f == 1.0);
  REQUIRE(r.accuracy == 1.0);
}

TEST_CASE("entirely wrong binary predictions score zero", "[metrics]") {
  const ClassReport r = evaluate({1, 1, 0, 0}, {0, 0, 1, 1}, 2);
  REQUIRE(r.macro_f == 0.0);
  REQUIRE(r.accuracy == 0.0);
}

TEST_CASE("macro-F matches a hand-computed confusion", "[metrics]") {
  const ClassReport r = evaluate({0, 1, 1, 1}, {0, 0, 1, 1}, 2);
  REQUIRE(r.precision[0] == 1.0);
  REQUIRE(r.recall[0] == 0.5);
  REQUIRE(r.f1[0] == Catch::Approx(2.0 / 3.0));
  REQUIRE(r.precision[1] == Catch::Approx(2.0 / 3.0));
  REQUIRE(r.recall[1] == 1.0);
  REQUIRE(r.f1[1] == Catch::Approx(0.8));
  REQUIRE(r.macro_f == Catch::Approx(11.0 / 15.0));
  REQUIRE(r.accuracy == 0.75);
}

TEST_CASE("confusion rows sum to gold class counts", "[metrics]") {
  Rng rng(88);
  std::vector<int> pred, gold;
  for (int i = 0; i < 200; ++i) {
    pred.push_back(static_cast<int>(rng.uniform_int(4)));
    gold.push_back(static_cast<int>(rng.uniform_int(4)));
  }
  const ClassReport r = evaluate(pred, gold, 4);
  for (int y = 0; y < 4; ++y) {
    long long row = 0;
    for (int z = 0; z < 4; ++z) row += r.confusion[y][z];
    REQUIRE(row == std::count(gold.begin(), gold.end(), y));
  }
  long long trace = 0;
  for (int y = 0; y < 4; ++y) trace += r.confusion[y][y];
  REQUIRE(r.accuracy == static_cast<double>(trace) / 200.0);
}

TEST_CASE("jointly permuting pairs leaves the report unchanged", "[metrics]") {
  Rng rng(99);
  std::vector<int> pred, gold;
  for (int i = 0; i < 100; ++i) {
    pred.push_back(static_cast<int>(rng.uniform_int(3)));
    gold.push_back(static_cast<int>(rng.uniform_int(3)));
  }
  const ClassReport base = evaluate(pred, gold, 3);

  std::vector<std::size_t> order(pred.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<int> pred2, gold2;
  for (std::size_t i : order) {
    pred2.push_back(pred[i]);
    gold2.push_back(gold[i]);
  }
  const ClassReport shuffled = evaluate(pred2, gold2, 3);
  REQUIRE(shuffled.macro_f == base.macro_f);
  REQUIRE(shuffled.accuracy == base.accuracy);
  REQUIRE(shuffled.confusion == base.confusion);
}

TEST_CASE("relabeling by a permutation permutes per-class entries", "[metrics]") {
  const std::vector<int> pred = {0, 1, 1, 2, 0, 2, 1};
  const std::vector<int> gold = {0, 1, 2, 2, 1, 0, 1};
  const ClassReport base = evaluate(pred, gold, 3);

  const int perm[3] = {2, 0, 1};
  std::vector<int> pred2, gold2;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred2.push_back(perm[pred[i]]);
    gold2.push_back(perm[gold[i]]);
  }
  const ClassReport moved = evaluate(pred2, gold2, 3);
  REQUIRE(moved.macro_f == Catch::Approx(base.macro_f).margin(1e-15));
  for (int y = 0; y < 3; ++y) REQUIRE(moved.f1[perm[y]] == base.f1[y]);
}

TEST_CASE("classes absent from gold and predictions contribute zero F", "[metrics]") {
  const ClassReport r = evaluate({0, 1}, {0, 1}, 4);
  REQUIRE(r.f1[2] == 0.0);
  REQUIRE(r.f1[3] == 0.0);
  REQUIRE(r.macro_f == Catch::Approx(0.5));
}

TEST_CASE("evaluate validates its inputs", "[metrics]") {
  REQUIRE_THROWS(evaluate({0}, {0, 1}, 2));
  REQUIRE_THROWS(evaluate({}, {}, 2));
  REQUIRE_THROWS(evaluate({0, 5}, {0, 1}, 2));
  REQUIRE_THROWS(evaluate({0, 1}, {0, -1}, 2));
}
