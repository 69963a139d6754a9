// Semi-supervised training on clusters with only a couple of labeled
// examples per class: compares the supervised baseline against the
// transduction found by the annealed alternating optimization.

#include <cstdio>

#include "tsmc/tsmc.hpp"

using namespace tsmc;

int main() {
  const int m = 4;
  ClustersParams params;
  params.num_classes = m;
  params.noise_sigma = 0.6;

  params.per_class = 2;
  const Dataset labeled = make_clusters(params, 10);
  params.per_class = 100;
  Dataset unlabeled = make_clusters(params, 11);
  const std::vector<int> gold = *unlabeled.labels;
  unlabeled.labels.reset();
  const LabelCounts counts = counts_from_labels(gold, m);

  const PathSet paths = PathSet::from(Taxonomy::flat(m));
  SemisupConfig cfg;
  cfg.solver.lambda = 0.1;
  cfg.solver.max_epochs = 30;

  const SemisupResult res =
      train_semisup(labeled, unlabeled, counts, cfg, LossKind::margin, paths);

  std::vector<int> sup_pred;
  for (const SparseVector& x : unlabeled.examples)
    sup_pred.push_back(res.supervised_model.predict(x));
  const ClassReport sup = evaluate(sup_pred, gold, m);
  const ClassReport semi = evaluate(res.transduction.label_of, gold, m);

  std::printf("supervised baseline macro-F %.3f\n", sup.macro_f);
  std::printf("semi-supervised macro-F     %.3f\n", semi.macro_f);
  std::printf("alternating steps: %zu\n", res.trace.size());
  for (const SemisupStep& step : res.trace)
    std::printf("  cu=%-8g inner=%d objective %.5f -> %.5f (%d labels moved)\n",
                step.cu, step.inner, step.obj_before_w, step.obj_after_y,
                step.labels_changed);
  return 0;
}
