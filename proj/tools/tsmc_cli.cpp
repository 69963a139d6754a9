#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsmc/tsmc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tsmc;

namespace {

double wall_seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string config_header(const json& config) {
  return "# tsmc " + config.at("command").get<std::string>() + "\n# config " +
         config.dump() + "\n";
}

std::vector<std::string> dataset_header(const json& config) {
  return {"tsmc " + config.at("command").get<std::string>(),
          "config " + config.dump()};
}

std::vector<int> load_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open labels file: " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string where = path + ":" + std::to_string(lineno);
    labels.push_back(static_cast<int>(
        detail::parse_long(std::string_view(line).substr(first, last - first + 1),
                           where)));
  }
  if (labels.empty()) throw ConfigError("labels file is empty: " + path);
  return labels;
}

void write_labels_file(const fs::path& path, const json& config,
                       const std::vector<int>& labels) {
  std::string body = config_header(config);
  for (int y : labels) {
    body += std::to_string(y);
    body += '\n';
  }
  write_text_atomic(path, body);
}

std::string render_report(const ClassReport& r) {
  std::string s;
  s += "accuracy " + detail::format_double(r.accuracy) + "\n";
  s += "macro_f " + detail::format_double(r.macro_f) + "\n";
  for (std::size_t y = 0; y < r.precision.size(); ++y) {
    s += "class " + std::to_string(y);
    s += " precision " + detail::format_double(r.precision[y]);
    s += " recall " + detail::format_double(r.recall[y]);
    s += " f1 " + detail::format_double(r.f1[y]);
    s += "\n";
  }
  for (std::size_t g = 0; g < r.confusion.size(); ++g) {
    s += "confusion " + std::to_string(g);
    for (long long c : r.confusion[g]) s += " " + std::to_string(c);
    s += "\n";
  }
  return s;
}

int max_label(const std::vector<int>& labels) {
  int mx = -1;
  for (int y : labels) mx = std::max(mx, y);
  return mx;
}

struct Structure {
  Taxonomy tax;
  PathSet paths;
  int m = 0;
};

// A taxonomy file wins; otherwise a flat hierarchy over the hinted class count.
Structure resolve_structure(const std::string& taxonomy_path, int fallback_m) {
  Structure s;
  if (!taxonomy_path.empty())
    s.tax = load_taxonomy(taxonomy_path);
  else
    s.tax = Taxonomy::flat(std::max(fallback_m, 2));
  s.paths = PathSet::from(s.tax);
  s.m = s.paths.num_leaves();
  return s;
}

double resolve_lambda(bool given, double value, LossKind kind, int m) {
  if (given) {
    if (!(value > 0.0)) throw ConfigError("--lambda must be positive");
    return value;
  }
  return (kind == LossKind::maxent && m == 2) ? 1e-3 : 10.0;
}

void check_labels_in_range(const std::vector<int>& labels, int m,
                           const std::string& what) {
  for (int y : labels)
    if (y < 0 || y >= m)
      throw ConfigError(what + ": label " + std::to_string(y) +
                        " outside the class range [0, " + std::to_string(m) + ")");
}

json taxonomy_field(const std::string& taxonomy_path) {
  return taxonomy_path.empty() ? json("flat") : json(taxonomy_path);
}

// ---------------------------------------------------------------- train

struct TrainOpts {
  std::string data;
  std::string taxonomy;
  std::string loss = "margin";
  double lambda = 0.0;
  bool lambda_given = false;
  int max_epochs = 30;
  double tolerance = 1e-4;
  std::uint64_t seed = 1;
  std::string out;
};

void cmd_train(const TrainOpts& o) {
  const Dataset data = load_dataset(o.data);
  if (!data.is_labeled()) throw ConfigError("train: data file carries no labels");
  const LossKind kind = parse_loss_kind(o.loss);
  const Structure st = resolve_structure(o.taxonomy, max_label(*data.labels) + 1);
  check_labels_in_range(*data.labels, st.m, "train");

  SolverConfig cfg;
  cfg.lambda = resolve_lambda(o.lambda_given, o.lambda, kind, st.m);
  cfg.cu = 0.0;
  cfg.max_epochs = o.max_epochs;
  cfg.tolerance = o.tolerance;
  cfg.seed = o.seed;

  const json config = {{"command", "train"},
                       {"data", o.data},
                       {"taxonomy", taxonomy_field(o.taxonomy)},
                       {"classes", st.m},
                       {"loss", loss_kind_name(kind)},
                       {"lambda", cfg.lambda},
                       {"max_epochs", cfg.max_epochs},
                       {"tolerance", cfg.tolerance},
                       {"seed", cfg.seed}};

  TrainResult tr = train(data, cfg, kind, Model::create(st.paths, data.feature_dim));
  tr.model.metadata = config.dump();

  fs::create_directories(o.out);
  save_model((fs::path(o.out) / "model.bin").string(), tr.model);
  std::string trace = json{{"config", config}}.dump() + "\n";
  for (std::size_t k = 0; k < tr.objective_trace.size(); ++k)
    trace += json{{"epoch", k}, {"objective", tr.objective_trace[k]}}.dump() + "\n";
  write_text_atomic(fs::path(o.out) / "trace.jsonl", trace);

  std::cout << "train: objective=" << detail::format_double(tr.objective)
            << " epochs=" << tr.epochs_used << "\n"
            << "wrote " << (fs::path(o.out) / "model.bin").string() << "\n";
}

// ---------------------------------------------------------------- predict

struct PredictOpts {
  std::string model;
  std::string data;
  std::string out;
};

void cmd_predict(const PredictOpts& o) {
  const Model model = load_model(o.model);
  const Dataset data = load_dataset(o.data);
  if (data.feature_dim > model.dim)
    throw ConfigError("predict: data uses feature ids beyond the model dimension");

  std::vector<int> pred;
  pred.reserve(data.size());
  for (const SparseVector& x : data.examples) pred.push_back(model.predict(x));

  const json config = {
      {"command", "predict"}, {"model", o.model}, {"data", o.data}};
  fs::create_directories(o.out);
  write_labels_file(fs::path(o.out) / "predictions.txt", config, pred);
  std::cout << "predict: wrote " << pred.size() << " labels to "
            << (fs::path(o.out) / "predictions.txt").string() << "\n";
}

// ---------------------------------------------------------------- eval

struct EvalOpts {
  std::string pred;
  std::string gold;
  int classes = 0;
  std::string out;
};

void cmd_eval(const EvalOpts& o) {
  const std::vector<int> pred = load_labels_file(o.pred);
  const Dataset gold_ds = load_dataset(o.gold);
  if (!gold_ds.is_labeled()) throw ConfigError("eval: gold file carries no labels");
  const std::vector<int>& gold = *gold_ds.labels;
  const int m =
      o.classes > 0 ? o.classes : std::max(max_label(pred), max_label(gold)) + 1;

  const ClassReport report = evaluate(pred, gold, m);
  const json config = {{"command", "eval"},
                       {"pred", o.pred},
                       {"gold", o.gold},
                       {"classes", m}};
  fs::create_directories(o.out);
  write_text_atomic(fs::path(o.out) / "report.txt",
                    config_header(config) + render_report(report));
  std::cout << "eval: accuracy=" << detail::format_double(report.accuracy)
            << " macro_f=" << detail::format_double(report.macro_f) << "\n";
}

// ---------------------------------------------------------------- semisup

struct SemisupOpts {
  std::string labeled;
  std::string unlabeled;
  std::string gold;
  std::string taxonomy;
  std::string loss = "margin";
  double lambda = 0.0;
  bool lambda_given = false;
  double cu = 1.0;
  std::vector<double> schedule;
  std::string solver = "switching";
  std::vector<int> counts;
  std::vector<double> phi;
  bool phi_from_labeled = false;
  int max_epochs = 30;
  double tolerance = 1e-4;
  int inner_cap = 20;
  int switching_cap = 50;
  std::uint64_t seed = 1;
  std::string out;
};

void cmd_semisup(const SemisupOpts& o) {
  const Dataset labeled = load_dataset(o.labeled);
  if (!labeled.is_labeled()) throw ConfigError("semisup: labeled file carries no labels");
  const Dataset unlabeled = load_dataset(o.unlabeled);
  if (unlabeled.is_labeled())
    throw ConfigError(
        "semisup: unlabeled file carries labels; strip them or pass them via --gold");
  const LossKind kind = parse_loss_kind(o.loss);

  const int sources = (!o.counts.empty() ? 1 : 0) + (!o.phi.empty() ? 1 : 0) +
                      (o.phi_from_labeled ? 1 : 0);
  if (sources != 1)
    throw ConfigError(
        "semisup: provide exactly one of --counts, --phi, --phi-from-labeled");

  int hint = max_label(*labeled.labels) + 1;
  if (!o.counts.empty()) hint = static_cast<int>(o.counts.size());
  if (!o.phi.empty()) hint = static_cast<int>(o.phi.size());
  const Structure st = resolve_structure(o.taxonomy, hint);
  check_labels_in_range(*labeled.labels, st.m, "semisup");

  LabelCounts counts;
  if (!o.counts.empty()) {
    if (static_cast<int>(o.counts.size()) != st.m)
      throw ConfigError("semisup: --counts length does not match the class count");
    counts.counts = o.counts;
  } else if (!o.phi.empty()) {
    if (static_cast<int>(o.phi.size()) != st.m)
      throw ConfigError("semisup: --phi length does not match the class count");
    counts = derive_label_counts(o.phi, static_cast<int>(unlabeled.size()));
  } else {
    counts = derive_label_counts(proportions_from_labels(*labeled.labels, st.m),
                                 static_cast<int>(unlabeled.size()));
  }

  SemisupConfig cfg;
  cfg.solver.lambda = resolve_lambda(o.lambda_given, o.lambda, kind, st.m);
  cfg.solver.max_epochs = o.max_epochs;
  cfg.solver.tolerance = o.tolerance;
  cfg.solver.seed = o.seed;
  cfg.inner_cap = o.inner_cap;
  cfg.switching_cap = o.switching_cap;
  cfg.assignment_solver = parse_assignment_solver(o.solver);
  cfg.schedule = o.schedule.empty() ? default_anneal_schedule(o.cu) : o.schedule;

  const json config = {{"command", "semisup"},
                       {"labeled", o.labeled},
                       {"unlabeled", o.unlabeled},
                       {"taxonomy", taxonomy_field(o.taxonomy)},
                       {"classes", st.m},
                       {"loss", loss_kind_name(kind)},
                       {"lambda", cfg.solver.lambda},
                       {"cu", o.cu},
                       {"schedule", cfg.schedule},
                       {"solver", assignment_solver_name(cfg.assignment_solver)},
                       {"counts", counts.counts},
                       {"max_epochs", cfg.solver.max_epochs},
                       {"tolerance", cfg.solver.tolerance},
                       {"inner_cap", cfg.inner_cap},
                       {"switching_cap", cfg.switching_cap},
                       {"seed", cfg.solver.seed}};

  SemisupResult res = train_semisup(labeled, unlabeled, counts, cfg, kind, st.paths);
  if (res.hit_inner_cap)
    std::cerr << "warning: inner alternating loop hit its iteration cap\n";
  if (res.hit_switching_cap)
    std::cerr << "warning: switching solver hit its major-iteration cap\n";

  fs::create_directories(o.out);
  res.model.metadata = config.dump();
  save_model((fs::path(o.out) / "model.bin").string(), res.model);
  write_labels_file(fs::path(o.out) / "transduced_labels.txt", config,
                    res.transduction.label_of);

  std::string trace = json{{"config", config}}.dump() + "\n";
  for (const SemisupStep& s : res.trace)
    trace += json{{"stage", s.stage},
                  {"cu", s.cu},
                  {"inner", s.inner},
                  {"obj_before_w", s.obj_before_w},
                  {"obj_after_w", s.obj_after_w},
                  {"obj_before_y", s.obj_before_y},
                  {"obj_after_y", s.obj_after_y},
                  {"labels_changed", s.labels_changed},
                  {"solver_epochs", s.solver_epochs},
                  {"wall_seconds", s.wall_seconds}}
                 .dump() +
             "\n";
  write_text_atomic(fs::path(o.out) / "trace.jsonl", trace);

  std::string report = config_header(config);
  report += "steps " + std::to_string(res.trace.size()) + "\n";
  report += "assignment_cost " +
            detail::format_double(res.transduction.objective) + "\n";
  std::string sup_f = "n/a";
  std::string semi_f = "n/a";
  if (!o.gold.empty()) {
    const Dataset gold_ds = load_dataset(o.gold);
    if (!gold_ds.is_labeled()) throw ConfigError("semisup: gold file carries no labels");
    const std::vector<int>& gold = *gold_ds.labels;
    if (gold.size() != unlabeled.size())
      throw ConfigError("semisup: gold labels do not match the unlabeled set size");
    std::vector<int> sup_pred;
    sup_pred.reserve(unlabeled.size());
    for (const SparseVector& x : unlabeled.examples)
      sup_pred.push_back(res.supervised_model.predict(x));
    const ClassReport sup_report = evaluate(sup_pred, gold, st.m);
    const ClassReport semi_report = evaluate(res.transduction.label_of, gold, st.m);
    sup_f = detail::format_double(sup_report.macro_f);
    semi_f = detail::format_double(semi_report.macro_f);
    report += "supervised_macro_f " + sup_f + "\n";
    report += "semisup_macro_f " + semi_f + "\n";
    report += render_report(semi_report);
  }
  write_text_atomic(fs::path(o.out) / "report.txt", report);

  std::cout << "semisup: supervised macro_f=" << sup_f << " semisup macro_f=" << semi_f
            << "\n"
            << "wrote " << (fs::path(o.out) / "transduced_labels.txt").string() << "\n";
}

// ---------------------------------------------------------------- bench-assign

struct BenchOpts {
  int n = 100;
  int m = 4;
  int num_seeds = 5;
  std::uint64_t seed = 1;
  std::string out;
};

void cmd_bench_assign(const BenchOpts& o) {
  if (o.n < 1 || o.m < 1) throw ConfigError("bench-assign: need n >= 1 and m >= 1");
  if (o.num_seeds < 1) throw ConfigError("bench-assign: need at least one seed");

  const json config = {{"command", "bench-assign"},
                       {"n", o.n},
                       {"m", o.m},
                       {"num_seeds", o.num_seeds},
                       {"seed", o.seed}};

  const std::vector<double> phi(o.m, 1.0 / o.m);
  const LabelCounts counts = derive_label_counts(phi, o.n);
  const long long space = count_feasible_assignments(counts);

  std::string records = json{{"config", config}}.dump() + "\n";
  std::string table = config_header(config);
  table += "# seed simplex_obj switching_obj gap simplex_s switching_s\n";
  std::vector<double> gaps, ratios;
  for (int k = 0; k < o.num_seeds; ++k) {
    Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(k));
    Matrix c(static_cast<std::size_t>(o.n), static_cast<std::size_t>(o.m));
    for (double& v : c.data) v = rng.uniform();

    auto t0 = std::chrono::steady_clock::now();
    SimplexStats sx_stats;
    const Assignment sx = solve_simplex(c, counts, nullptr, &sx_stats);
    const double sx_time = wall_seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    Matrix neg = c;
    for (double& v : neg.data) v = -v;
    SwitchStats sw_stats;
    const Assignment sw = solve_switching(c, counts, greedy_init(neg, counts), &sw_stats);
    const double sw_time = wall_seconds_since(t0);

    const double gap = (sw.objective - sx.objective) /
                       std::max(1.0, std::abs(sx.objective));
    gaps.push_back(gap);
    ratios.push_back(sw_time / std::max(1e-9, sx_time));

    json rec = {{"seed", k},
                {"n", o.n},
                {"m", o.m},
                {"simplex_objective", sx.objective},
                {"simplex_seconds", sx_time},
                {"simplex_pivots", sx_stats.pivots},
                {"switching_objective", sw.objective},
                {"switching_seconds", sw_time},
                {"switching_major_iterations", sw_stats.major_iterations},
                {"gap", gap}};
    if (space <= 2'000'000) {
      const Assignment exact = brute_force(c, counts);
      rec["brute_objective"] = exact.objective;
      rec["simplex_gap_vs_brute"] = sx.objective - exact.objective;
      rec["switching_gap_vs_brute"] = sw.objective - exact.objective;
    }
    records += rec.dump() + "\n";
    table += std::to_string(k) + " " + detail::format_double(sx.objective) + " " +
             detail::format_double(sw.objective) + " " + detail::format_double(gap) +
             " " + detail::format_double(sx_time) + " " +
             detail::format_double(sw_time) + "\n";
  }

  const double mean_gap =
      std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const double median_ratio = sorted[sorted.size() / 2];

  fs::create_directories(o.out);
  write_text_atomic(fs::path(o.out) / "bench.jsonl", records);
  write_text_atomic(fs::path(o.out) / "bench.txt", table);
  std::cout << "bench-assign: mean_gap=" << detail::format_double(mean_gap)
            << " median_time_ratio=" << detail::format_double(median_ratio) << "\n";
}

// ---------------------------------------------------------------- learning-curve

struct CurveOpts {
  std::vector<int> sizes;
  int num_seeds = 3;
  int classes = 4;
  int unlabeled_per_class = 50;
  int test_per_class = 50;
  double sigma = 0.5;
  std::string loss = "margin";
  double lambda = 0.0;
  bool lambda_given = false;
  double cu = 1.0;
  std::vector<double> schedule;
  std::string solver = "switching";
  int max_epochs = 30;
  double tolerance = 1e-4;
  std::uint64_t seed = 1;
  std::string out;
};

struct ArmStats {
  double mean = 0.0;
  double stdev = 0.0;
};

ArmStats summarize(const std::vector<double>& xs) {
  ArmStats s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  for (double x : xs) s.stdev += (x - s.mean) * (x - s.mean);
  s.stdev = std::sqrt(s.stdev / static_cast<double>(xs.size()));
  return s;
}

void cmd_learning_curve(const CurveOpts& o) {
  if (o.sizes.empty()) throw ConfigError("learning-curve: --sizes is required");
  for (int s : o.sizes)
    if (s < 1) throw ConfigError("learning-curve: sizes must be positive");
  if (o.num_seeds < 1) throw ConfigError("learning-curve: need at least one seed");
  if (o.classes < 2) throw ConfigError("learning-curve: need at least two classes");
  const LossKind kind = parse_loss_kind(o.loss);
  const double lambda = resolve_lambda(o.lambda_given, o.lambda, kind, o.classes);

  const json config = {{"command", "learning-curve"},
                       {"sizes", o.sizes},
                       {"num_seeds", o.num_seeds},
                       {"classes", o.classes},
                       {"unlabeled_per_class", o.unlabeled_per_class},
                       {"test_per_class", o.test_per_class},
                       {"sigma", o.sigma},
                       {"loss", loss_kind_name(kind)},
                       {"lambda", lambda},
                       {"cu", o.cu},
                       {"solver", o.solver},
                       {"max_epochs", o.max_epochs},
                       {"seed", o.seed}};

  const PathSet paths = PathSet::from(Taxonomy::flat(o.classes));
  const int max_size = *std::max_element(o.sizes.begin(), o.sizes.end());
  const int pool_per_class = (max_size + o.classes - 1) / o.classes;

  SolverConfig sup_cfg;
  sup_cfg.lambda = lambda;
  sup_cfg.max_epochs = o.max_epochs;
  sup_cfg.tolerance = o.tolerance;

  SemisupConfig semi_cfg;
  semi_cfg.solver = sup_cfg;
  semi_cfg.assignment_solver = parse_assignment_solver(o.solver);
  semi_cfg.schedule = o.schedule.empty() ? default_anneal_schedule(o.cu) : o.schedule;

  std::string records = json{{"config", config}}.dump() + "\n";
  std::string table = config_header(config);
  table += "# size arm mean_macro_f std_macro_f\n";
  const char* arm_names[3] = {"supervised", "semisup", "ceiling"};

  for (int size : o.sizes) {
    std::vector<double> arm_f[3];
    for (int k = 0; k < o.num_seeds; ++k) {
      const std::uint64_t base =
          hash_combine(hash_combine(o.seed, static_cast<std::uint64_t>(size)),
                       static_cast<std::uint64_t>(k));
      ClustersParams p;
      p.num_classes = o.classes;
      p.noise_sigma = o.sigma;

      p.per_class = pool_per_class;
      const Dataset pool = make_clusters(p, base + 1);
      Dataset labeled;
      labeled.feature_dim = pool.feature_dim;
      labeled.labels.emplace();
      const int take = std::min<int>(size, static_cast<int>(pool.size()));
      for (int i = 0; i < take; ++i) {
        labeled.examples.push_back(pool.examples[i]);
        labeled.labels->push_back((*pool.labels)[i]);
      }

      p.per_class = o.unlabeled_per_class;
      Dataset unlabeled = make_clusters(p, base + 2);
      const std::vector<int> gold = *unlabeled.labels;
      unlabeled.labels.reset();
      const LabelCounts counts = counts_from_labels(gold, o.classes);

      p.per_class = o.test_per_class;
      const Dataset test = make_clusters(p, base + 3);

      sup_cfg.seed = base + 4;
      semi_cfg.solver.seed = base + 4;

      const TrainResult sup =
          train(labeled, sup_cfg, kind, Model::create(paths, pool.feature_dim));
      const SemisupResult semi =
          train_semisup(labeled, unlabeled, counts, semi_cfg, kind, paths);

      Dataset ceiling_data = labeled;
      for (std::size_t i = 0; i < unlabeled.size(); ++i) {
        ceiling_data.examples.push_back(unlabeled.examples[i]);
        ceiling_data.labels->push_back(gold[i]);
      }
      ceiling_data.feature_dim = std::max(labeled.feature_dim, unlabeled.feature_dim);
      const TrainResult ceiling =
          train(ceiling_data, sup_cfg, kind, Model::create(paths, pool.feature_dim));

      const Model* models[3] = {&sup.model, &semi.model, &ceiling.model};
      for (int arm = 0; arm < 3; ++arm) {
        std::vector<int> pred;
        pred.reserve(test.size());
        for (const SparseVector& x : test.examples)
          pred.push_back(models[arm]->predict(x));
        const ClassReport rep = evaluate(pred, *test.labels, o.classes);
        arm_f[arm].push_back(rep.macro_f);
        records += json{{"size", size},
                        {"seed", k},
                        {"arm", arm_names[arm]},
                        {"macro_f", rep.macro_f}}
                       .dump() +
                   "\n";
      }
    }
    for (int arm = 0; arm < 3; ++arm) {
      const ArmStats s = summarize(arm_f[arm]);
      table += std::to_string(size);
      table += " ";
      table += arm_names[arm];
      table += " " + detail::format_double(s.mean);
      table += " " + detail::format_double(s.stdev);
      table += "\n";
      records += json{{"size", size},
                      {"arm", arm_names[arm]},
                      {"mean_macro_f", s.mean},
                      {"std_macro_f", s.stdev}}
                     .dump() +
                 "\n";
    }
  }

  fs::create_directories(o.out);
  write_text_atomic(fs::path(o.out) / "curve.jsonl", records);
  write_text_atomic(fs::path(o.out) / "curve.txt", table);
  std::cout << table;
}

// ---------------------------------------------------------------- synth

struct SynthOpts {
  std::string kind = "clusters";
  int classes = 4;
  int per_class = 100;
  int features_per_class = 2;
  int noise_features = 4;
  double signature_mean = 1.0;
  double sigma = 0.5;
  int vocab = 256;
  int doc_length = 40;
  double boost = 8.0;
  double frac_unlabeled = 0.5;
  double frac_labeled = 0.25;
  std::uint64_t seed = 1;
  std::string out;
};

void cmd_synth(const SynthOpts& o) {
  Dataset full;
  if (o.kind == "clusters") {
    ClustersParams p;
    p.num_classes = o.classes;
    p.per_class = o.per_class;
    p.features_per_class = o.features_per_class;
    p.noise_features = o.noise_features;
    p.signature_mean = o.signature_mean;
    p.noise_sigma = o.sigma;
    full = make_clusters(p, o.seed);
  } else if (o.kind == "sparse-text") {
    SparseTextParams p;
    p.num_classes = o.classes;
    p.per_class = o.per_class;
    p.vocab = o.vocab;
    p.doc_length = o.doc_length;
    p.boost = o.boost;
    full = make_sparse_text(p, o.seed);
  } else {
    throw ConfigError("synth: unknown kind '" + o.kind +
                      "' (expected clusters or sparse-text)");
  }

  const json config = {{"command", "synth"},
                       {"kind", o.kind},
                       {"classes", o.classes},
                       {"per_class", o.per_class},
                       {"frac_unlabeled", o.frac_unlabeled},
                       {"frac_labeled", o.frac_labeled},
                       {"seed", o.seed}};

  const SplitResult split =
      split_dataset(full, o.frac_unlabeled, o.frac_labeled, o.seed);
  Dataset gold_ds = split.unlabeled;
  gold_ds.labels = split.unlabeled_gold;

  const std::vector<std::string> header = dataset_header(config);
  fs::create_directories(o.out);
  save_dataset((fs::path(o.out) / "labeled.txt").string(), split.labeled, header);
  save_dataset((fs::path(o.out) / "unlabeled.txt").string(), split.unlabeled, header);
  save_dataset((fs::path(o.out) / "unlabeled_gold.txt").string(), gold_ds, header);
  save_dataset((fs::path(o.out) / "test.txt").string(), split.test, header);

  const LabelCounts counts =
      counts_from_labels(split.unlabeled_gold, o.classes);
  std::string counts_text = config_header(config);
  for (std::size_t y = 0; y < counts.counts.size(); ++y)
    counts_text += (y ? "," : "") + std::to_string(counts.counts[y]);
  counts_text += "\n";
  write_text_atomic(fs::path(o.out) / "counts.txt", counts_text);

  std::cout << "synth: labeled=" << split.labeled.size()
            << " unlabeled=" << split.unlabeled.size() << " test=" << split.test.size()
            << " dim=" << full.feature_dim << "\n"
            << "wrote datasets to " << o.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear multi-class and hierarchical text classification with "
               "semi-supervised alternating optimization"};
  app.require_subcommand(1);

  TrainOpts t;
  CLI::App* train_cmd = app.add_subcommand("train", "fit a supervised classifier");
  train_cmd->add_option("--data", t.data, "labeled dataset file")->required();
  train_cmd->add_option("--taxonomy", t.taxonomy, "taxonomy file (default: flat)");
  train_cmd->add_option("--loss", t.loss, "margin or maxent");
  CLI::Option* t_lambda = train_cmd->add_option("--lambda", t.lambda, "L2 strength");
  train_cmd->add_option("--max-epochs", t.max_epochs, "solver epoch budget");
  train_cmd->add_option("--tolerance", t.tolerance, "relative convergence tolerance");
  train_cmd->add_option("--seed", t.seed, "RNG seed");
  train_cmd->add_option("--out", t.out, "output directory")->required();
  train_cmd->callback([&] {
    t.lambda_given = t_lambda->count() > 0;
    cmd_train(t);
  });

  PredictOpts p;
  CLI::App* predict_cmd = app.add_subcommand("predict", "label a dataset with a model");
  predict_cmd->add_option("--model", p.model, "model file")->required();
  predict_cmd->add_option("--data", p.data, "dataset file")->required();
  predict_cmd->add_option("--out", p.out, "output directory")->required();
  predict_cmd->callback([&] { cmd_predict(p); });

  EvalOpts e;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score predictions against gold labels");
  eval_cmd->add_option("--pred", e.pred, "predicted labels file")->required();
  eval_cmd->add_option("--gold", e.gold, "labeled dataset file")->required();
  eval_cmd->add_option("--classes", e.classes, "class count (default: inferred)");
  eval_cmd->add_option("--out", e.out, "output directory")->required();
  eval_cmd->callback([&] { cmd_eval(e); });

  SemisupOpts s;
  CLI::App* semisup_cmd =
      app.add_subcommand("semisup", "semi-supervised training with label counts");
  semisup_cmd->add_option("--labeled", s.labeled, "labeled dataset file")->required();
  semisup_cmd->add_option("--unlabeled", s.unlabeled, "unlabeled dataset file")
      ->required();
  semisup_cmd->add_option("--gold", s.gold,
                          "labeled dataset with gold labels for the unlabeled set");
  semisup_cmd->add_option("--taxonomy", s.taxonomy, "taxonomy file (default: flat)");
  semisup_cmd->add_option("--loss", s.loss, "margin or maxent");
  CLI::Option* s_lambda = semisup_cmd->add_option("--lambda", s.lambda, "L2 strength");
  semisup_cmd->add_option("--cu", s.cu, "final unlabeled-term weight");
  semisup_cmd->add_option("--schedule", s.schedule, "annealing schedule override")
      ->delimiter(',');
  semisup_cmd->add_option("--solver", s.solver, "switching or simplex");
  semisup_cmd->add_option("--counts", s.counts, "per-class unlabeled counts")
      ->delimiter(',');
  semisup_cmd->add_option("--phi", s.phi, "per-class unlabeled proportions")
      ->delimiter(',');
  semisup_cmd->add_flag("--phi-from-labeled", s.phi_from_labeled,
                        "derive counts from labeled-set proportions");
  semisup_cmd->add_option("--max-epochs", s.max_epochs, "solver epoch budget per stage");
  semisup_cmd->add_option("--tolerance", s.tolerance, "relative convergence tolerance");
  semisup_cmd->add_option("--inner-cap", s.inner_cap, "alternating iterations per stage");
  semisup_cmd->add_option("--switching-cap", s.switching_cap,
                          "switching major-iteration cap");
  semisup_cmd->add_option("--seed", s.seed, "RNG seed");
  semisup_cmd->add_option("--out", s.out, "output directory")->required();
  semisup_cmd->callback([&] {
    s.lambda_given = s_lambda->count() > 0;
    cmd_semisup(s);
  });

  BenchOpts b;
  CLI::App* bench_cmd =
      app.add_subcommand("bench-assign", "benchmark the assignment solvers");
  bench_cmd->add_option("--n", b.n, "number of examples")->required();
  bench_cmd->add_option("--m", b.m, "number of classes")->required();
  bench_cmd->add_option("--num-seeds", b.num_seeds, "instances to benchmark");
  bench_cmd->add_option("--seed", b.seed, "base RNG seed");
  bench_cmd->add_option("--out", b.out, "output directory")->required();
  bench_cmd->callback([&] { cmd_bench_assign(b); });

  CurveOpts c;
  CLI::App* curve_cmd =
      app.add_subcommand("learning-curve", "sweep labeled-set sizes over three arms");
  curve_cmd->add_option("--sizes", c.sizes, "labeled-set sizes")
      ->required()
      ->delimiter(',');
  curve_cmd->add_option("--num-seeds", c.num_seeds, "seeds per size");
  curve_cmd->add_option("--classes", c.classes, "number of classes");
  curve_cmd->add_option("--unlabeled-per-class", c.unlabeled_per_class,
                        "unlabeled examples per class");
  curve_cmd->add_option("--test-per-class", c.test_per_class,
                        "test examples per class");
  curve_cmd->add_option("--sigma", c.sigma, "cluster noise level");
  curve_cmd->add_option("--loss", c.loss, "margin or maxent");
  CLI::Option* c_lambda = curve_cmd->add_option("--lambda", c.lambda, "L2 strength");
  curve_cmd->add_option("--cu", c.cu, "final unlabeled-term weight");
  curve_cmd->add_option("--schedule", c.schedule, "annealing schedule override")
      ->delimiter(',');
  curve_cmd->add_option("--solver", c.solver, "switching or simplex");
  curve_cmd->add_option("--max-epochs", c.max_epochs, "solver epoch budget");
  curve_cmd->add_option("--seed", c.seed, "base RNG seed");
  curve_cmd->add_option("--out", c.out, "output directory")->required();
  curve_cmd->callback([&] {
    c.lambda_given = c_lambda->count() > 0;
    cmd_learning_curve(c);
  });

  SynthOpts y;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate synthetic datasets");
  synth_cmd->add_option("--kind", y.kind, "clusters or sparse-text");
  synth_cmd->add_option("--classes", y.classes, "number of classes");
  synth_cmd->add_option("--per-class", y.per_class, "examples per class");
  synth_cmd->add_option("--features-per-class", y.features_per_class,
                        "signature features per class (clusters)");
  synth_cmd->add_option("--noise-features", y.noise_features,
                        "shared noise features (clusters)");
  synth_cmd->add_option("--signature-mean", y.signature_mean,
                        "signature feature mean (clusters)");
  synth_cmd->add_option("--sigma", y.sigma, "noise level (clusters)");
  synth_cmd->add_option("--vocab", y.vocab, "vocabulary size (sparse-text)");
  synth_cmd->add_option("--doc-length", y.doc_length, "tokens per document (sparse-text)");
  synth_cmd->add_option("--boost", y.boost, "class-slice boost factor (sparse-text)");
  synth_cmd->add_option("--frac-unlabeled", y.frac_unlabeled,
                        "fraction of examples moved to the unlabeled split");
  synth_cmd->add_option("--frac-labeled", y.frac_labeled,
                        "fraction of examples kept labeled");
  synth_cmd->add_option("--seed", y.seed, "RNG seed");
  synth_cmd->add_option("--out", y.out, "output directory")->required();
  synth_cmd->callback([&] { cmd_synth(y); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  } catch (const SolverError& ex) {
    std::cerr << "solver error: " << ex.what() << "\n";
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
