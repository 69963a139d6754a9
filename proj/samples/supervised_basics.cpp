// Trains a supervised margin classifier on synthetic clusters, evaluates it
// on a held-out set, and round-trips the model through a file.

#include <cstdio>

#include "tsmc/tsmc.hpp"

using namespace tsmc;

int main() {
  ClustersParams params;
  params.num_classes = 4;
  params.per_class = 100;
  const Dataset train_set = make_clusters(params, 1);
  params.per_class = 50;
  const Dataset test_set = make_clusters(params, 2);

  const PathSet paths = PathSet::from(Taxonomy::flat(params.num_classes));
  SolverConfig cfg;
  cfg.lambda = 0.1;
  cfg.max_epochs = 40;

  const TrainResult tr = train(train_set, cfg, LossKind::margin,
                               Model::create(paths, train_set.feature_dim));
  std::printf("objective %.6f after %d epochs\n", tr.objective, tr.epochs_used);

  std::vector<int> pred;
  for (const SparseVector& x : test_set.examples) pred.push_back(tr.model.predict(x));
  const ClassReport report = evaluate(pred, *test_set.labels, params.num_classes);
  std::printf("test accuracy %.3f macro-F %.3f\n", report.accuracy, report.macro_f);

  save_model("supervised_demo.bin", tr.model);
  const Model back = load_model("supervised_demo.bin");
  std::printf("model round-trip ok: %s\n", back.w == tr.model.w ? "yes" : "no");
  return 0;
}
