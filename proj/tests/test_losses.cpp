#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tsmc/losses.hpp"
#include "tsmc/model.hpp"
#include "tsmc/rng.hpp"
#include "tsmc/taxonomy.hpp"

using namespace tsmc;

namespace {

Model flat_model(int m, std::size_t dim) {
  return Model::create(PathSet::from(Taxonomy::flat(m)), dim);
}

Model random_model(int m, std::size_t dim, std::uint64_t seed) {
  Model model = flat_model(m, dim);
  Rng rng(seed);
  for (double& w : model.w) w = rng.normal(0.0, 0.8);
  return model;
}

SparseVector random_example(std::size_t dim, Rng& rng) {
  std::vector<FeatureEntry> raw;
  for (std::size_t j = 0; j < dim; ++j)
    if (rng.uniform() < 0.8) raw.push_back({static_cast<std::uint32_t>(j), rng.normal()});
  if (raw.empty()) raw.push_back({0, 1.0});
  return make_sparse_vector(std::move(raw));
}

// Flat gradient of the loss at the model's current weights, assembled from
// the per-node coefficients.
std::vector<double> dense_gradient(Model& m, const SparseVector& x, int y, LossKind kind) {
  LossWorkspace ws(m);
  m.score_all(x, ws.scores);
  loss_gradient_coefficients(m, ws, y, kind);
  std::vector<double> g(m.w.size(), 0.0);
  for (int node : ws.touched) {
    for (const auto& e : x.entries)
      g[static_cast<std::size_t>(node) * m.dim + e.id] = ws.coeff[node] * e.value;
    ws.coeff[node] = 0.0;
  }
  return g;
}

}  // namespace

TEST_CASE("margin loss matches hand-computed values", "[losses]") {
  const std::vector<double> confident = {2.0, 0.5};
  REQUIRE(margin_loss_from_scores(confident, 0) == 0.0);
  REQUIRE(margin_argmax(confident, 0) == 0);

  const std::vector<double> wrong = {0.5, 2.0};
  REQUIRE(margin_loss_from_scores(wrong, 0) == 2.5);
  REQUIRE(margin_argmax(wrong, 0) == 1);

  // Correct by 0.4 but inside the unit margin: loss = 1 - 0.4.
  const std::vector<double> narrow = {1.0, 0.6};
  REQUIRE(margin_loss_from_scores(narrow, 0) == Catch::Approx(0.6));
}

TEST_CASE("margin argmax ties resolve to the lowest class", "[losses]") {
  const std::vector<double> tie = {1.0, 0.0, 1.0};
  REQUIRE(margin_argmax(tie, 1) == 0);
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  REQUIRE(margin_argmax(zero, 0) == 1);  // losing classes get the +1 bump
  REQUIRE(margin_loss_from_scores(zero, 0) == 1.0);
}

TEST_CASE("maxent loss matches closed forms", "[losses]") {
  const std::vector<double> s = {1.0, 0.0};
  REQUIRE(maxent_loss_from_scores(s, 0) ==
          Catch::Approx(std::log1p(std::exp(-1.0))).margin(1e-15));
  REQUIRE(maxent_loss_from_scores(s, 1) ==
          Catch::Approx(1.0 + std::log1p(std::exp(-1.0))).margin(1e-15));

  const std::vector<double> zeros = {0.0, 0.0, 0.0, 0.0};
  REQUIRE(maxent_loss_from_scores(zeros, 2) ==
          Catch::Approx(std::log(4.0)).margin(1e-15));
}

TEST_CASE("log_sum_exp is stable for large scores", "[losses]") {
  const std::vector<double> big = {1000.0, 1000.5};
  const double v = log_sum_exp(big);
  REQUIRE(std::isfinite(v));
  REQUIRE(v == Catch::Approx(1000.5 + std::log1p(std::exp(-0.5))).margin(1e-12));

  const std::vector<double> tiny = {-1000.0, -1000.5};
  REQUIRE(std::isfinite(log_sum_exp(tiny)));
}

TEST_CASE("softmax is a probability vector", "[losses]") {
  const std::vector<double> s = {3.0, -1.0, 0.5};
  std::vector<double> p(3);
  softmax_into(s, p);
  double sum = 0.0;
  for (double v : p) {
    REQUIRE(v > 0.0);
    sum += v;
  }
  REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(p[0] > p[2]);
  REQUIRE(p[2] > p[1]);
}

TEST_CASE("cost matrix entries equal direct loss evaluation bitwise", "[losses]") {
  for (const LossKind kind : {LossKind::margin, LossKind::maxent}) {
    Model m = random_model(4, 6, 910);
    Rng rng(33);
    std::vector<SparseVector> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(random_example(6, rng));
    const Matrix c = cost_matrix(m, xs, kind);
    LossWorkspace ws(m);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (int y = 0; y < 4; ++y)
        REQUIRE(c(i, static_cast<std::size_t>(y)) == loss_value(m, ws, xs[i], y, kind));
  }
}

TEST_CASE("maxent gradient matches central finite differences", "[losses]") {
  Rng rng(5150);
  for (int trial = 0; trial < 25; ++trial) {
    const int m_classes = 2 + static_cast<int>(rng.uniform_int(4));
    const std::size_t dim = 1 + rng.uniform_int(20);
    Model model = random_model(m_classes, dim, 1000 + trial);
    const SparseVector x = random_example(dim, rng);
    const int y = static_cast<int>(rng.uniform_int(m_classes));

    const std::vector<double> g = dense_gradient(model, x, y, LossKind::maxent);
    LossWorkspace ws(model);
    const double h = 1e-6;
    for (std::size_t j = 0; j < model.w.size(); ++j) {
      const double keep = model.w[j];
      model.w[j] = keep + h;
      const double up = loss_value(model, ws, x, y, LossKind::maxent);
      model.w[j] = keep - h;
      const double down = loss_value(model, ws, x, y, LossKind::maxent);
      model.w[j] = keep;
      const double fd = (up - down) / (2.0 * h);
      const double scale = std::max({1.0, std::abs(fd), std::abs(g[j])});
      REQUIRE(std::abs(fd - g[j]) / scale < 1e-5);
    }
  }
}

TEST_CASE("margin subgradient satisfies the subgradient inequality", "[losses]") {
  Rng rng(6001);
  for (int trial = 0; trial < 25; ++trial) {
    const int m_classes = 2 + static_cast<int>(rng.uniform_int(4));
    const std::size_t dim = 1 + rng.uniform_int(10);
    Model model = random_model(m_classes, dim, 2000 + trial);
    const SparseVector x = random_example(dim, rng);
    const int y = static_cast<int>(rng.uniform_int(m_classes));

    LossWorkspace ws(model);
    const double at = loss_value(model, ws, x, y, LossKind::margin);
    const std::vector<double> g = dense_gradient(model, x, y, LossKind::margin);

    Model probe = model;
    for (int k = 0; k < 4; ++k) {
      for (std::size_t j = 0; j < probe.w.size(); ++j)
        probe.w[j] = model.w[j] + rng.normal(0.0, 0.5);
      double linear = at;
      for (std::size_t j = 0; j < probe.w.size(); ++j)
        linear += g[j] * (probe.w[j] - model.w[j]);
      const double there = loss_value(probe, ws, x, y, LossKind::margin);
      REQUIRE(there >= linear - 1e-9);
    }
  }
}

TEST_CASE("apply_loss_subgradient moves weights against the gradient", "[losses]") {
  Model m = flat_model(2, 1);
  m.node_w(1)[0] = 0.5;
  m.node_w(2)[0] = 2.0;  // class 1 wins; true label 0
  const SparseVector x = make_sparse_vector({{0, 1.0}});
  LossWorkspace ws(m);
  const double before = loss_value(m, ws, x, 0, LossKind::margin);
  apply_loss_subgradient(m, ws, x, 0, LossKind::margin, 0.1);
  REQUIRE(m.node_w(1)[0] == Catch::Approx(0.6));
  REQUIRE(m.node_w(2)[0] == Catch::Approx(1.9));
  const double after = loss_value(m, ws, x, 0, LossKind::margin);
  REQUIRE(after < before);
}

TEST_CASE("loss kind names parse and print", "[losses]") {
  REQUIRE(parse_loss_kind("margin") == LossKind::margin);
  REQUIRE(parse_loss_kind("maxent") == LossKind::maxent);
  REQUIRE_THROWS(parse_loss_kind("hinge"));
  REQUIRE(std::string(loss_kind_name(LossKind::maxent)) == "maxent");
}
