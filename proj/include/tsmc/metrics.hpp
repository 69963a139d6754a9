#pragma once

#include <stdexcept>
#include <vector>

namespace tsmc {

struct ClassReport {
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  double macro_f = 0.0;
  double accuracy = 0.0;
  std::vector<std::vector<long long>> confusion;  // [gold][pred]
};

// Per-class precision/recall/F1 plus unweighted macro-F over all classes;
// a class with no predictions or no gold instances scores 0 on the
// undefined components.
inline ClassReport evaluate(const std::vector<int>& pred, const std::vector<int>& gold,
                            int num_classes) {
  if (pred.size() != gold.size())
    throw std::invalid_argument("evaluate: pred/gold length mismatch");
  if (pred.empty()) throw std::invalid_argument("evaluate: empty label vectors");
  if (num_classes < 1) throw std::invalid_argument("evaluate: need at least one class");

  ClassReport r;
  r.confusion.assign(num_classes, std::vector<long long>(num_classes, 0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || pred[i] >= num_classes || gold[i] < 0 || gold[i] >= num_classes)
      throw std::invalid_argument("evaluate: label out of range");
    ++r.confusion[gold[i]][pred[i]];
  }

  r.precision.assign(num_classes, 0.0);
  r.recall.assign(num_classes, 0.0);
  r.f1.assign(num_classes, 0.0);
  long long correct = 0;
  for (int y = 0; y < num_classes; ++y) {
    const long long tp = r.confusion[y][y];
    correct += tp;
    long long predicted = 0, actual = 0;
    for (int z = 0; z < num_classes; ++z) {
      predicted += r.confusion[z][y];
      actual += r.confusion[y][z];
    }
    if (predicted > 0) r.precision[y] = static_cast<double>(tp) / predicted;
    if (actual > 0) r.recall[y] = static_cast<double>(tp) / actual;
    const double pr = r.precision[y] + r.recall[y];
    if (pr > 0.0) r.f1[y] = 2.0 * r.precision[y] * r.recall[y] / pr;
    r.macro_f += r.f1[y];
  }
  r.macro_f /= num_classes;
  r.accuracy = static_cast<double>(correct) / pred.size();
  return r;
}

}  // namespace tsmc
