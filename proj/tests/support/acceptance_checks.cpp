#include "acceptance_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "metric_oracle.hpp"
#include "refpred/cli/commands.hpp"
#include "refpred/dataset/store.hpp"
#include "refpred/error.hpp"
#include "refpred/history/process_metrics.hpp"
#include "refpred/mining/history_walker.hpp"
#include "refpred/mining/repository.hpp"
#include "refpred/ml/decision_tree.hpp"
#include "refpred/ml/logistic_regression.hpp"
#include "refpred/ml/model.hpp"
#include "refpred/ml/naive_bayes.hpp"
#include "refpred/ml/neural_network.hpp"
#include "refpred/ml/sampling.hpp"
#include "refpred/pipeline/evaluation.hpp"
#include "refpred/pipeline/importance_table.hpp"
#include "refpred/pipeline/report.hpp"
#include "refpred/rng.hpp"

namespace refpred::testing {

namespace fs = std::filesystem;

namespace {

struct Failures {
  std::vector<std::string> items;
  void add(std::string s) { items.push_back(std::move(s)); }
  CheckOutcome outcome(std::string ok) const {
    if (items.empty()) return {true, std::move(ok)};
    std::string d = items.front();
    if (items.size() > 1) d += " (+" + std::to_string(items.size() - 1) + " more)";
    return {false, d};
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- 1

CheckOutcome metric_oracles(const fs::path& java_dir) {
  const auto files = oracle_fixtures(java_dir);
  Failures f;
  if (files.size() < 12) f.add("only " + std::to_string(files.size()) + " oracle fixtures");
  for (const auto& j : files) {
    auto o = j;
    o.replace_extension(".oracle");
    for (const auto& p : check_metric_oracle(j, o)) f.add(j.filename().string() + ": " + p);
  }
  return f.outcome(std::to_string(files.size()) + " fixtures match");
}

// ---------------------------------------------------------------- 2

struct ExpectedEvent {
  mining::EventKind kind;
  int commit;  // 1-based
  std::string file;
  std::string class_name;
  std::optional<std::string> method;
  std::optional<RefactoringType> refactoring;
  int snapshot;
  std::string snapshot_path;
  std::size_t history_commits;
  std::int64_t previous_refactorings;
};

CheckOutcome miner_semantics(const fs::path& workdir) {
  using K = mining::EventKind;
  const auto fx = build_miner_fixture(workdir / "miner-repo");
  const std::string A = "src/p/A.java", B = "src/p/B.java", C = "src/p/C.java", D = "src/p/D.java";
  // Hand trace for k = 3 (see build_miner_fixture for the commit list).
  const std::vector<ExpectedEvent> expected = {
      {K::NonRefactoring, 3, A, "p.A", {}, {}, 3, A, 2, 0},
      {K::Refactoring, 4, A, "p.A", "foo()", RefactoringType::ExtractMethod, 3, A, 2, 0},
      {K::NonRefactoring, 5, B, "p.B", {}, {}, 5, B, 2, 0},
      {K::NonRefactoring, 5, B, "p.B.Inner", {}, {}, 5, B, 2, 0},
      {K::Refactoring, 9, A, "p.A", "foo()", RefactoringType::RenameMethod, 8, A, 5, 1},
      {K::Refactoring, 11, D, "p.Mover", {}, RefactoringType::MoveClass, 10, C, 0, 0},
      {K::NonRefactoring, 15, D, "p.Mover", {}, {}, 15, D, 4, 1},
      {K::NonRefactoring, 17, A, "p.A", {}, {}, 17, A, 9, 2},
  };

  mining::GitRepository repo(fx.repo);
  mining::WalkOptions opts;
  opts.k = 3;
  const auto walk = mining::walk_history(repo, fx.detections, opts);
  Failures f;
  if (walk.events.size() != expected.size()) {
    f.add("expected " + std::to_string(expected.size()) + " events, got " + std::to_string(walk.events.size()));
  }
  for (std::size_t i = 0; i < std::min(expected.size(), walk.events.size()); ++i) {
    const auto& e = expected[i];
    const auto& g = walk.events[i];
    const auto tag = "event " + std::to_string(i + 1) + ": ";
    if (g.kind != e.kind) f.add(tag + "kind " + std::string(mining::to_string(g.kind)));
    if (g.key.commit != fx.commits[static_cast<std::size_t>(e.commit - 1)]) f.add(tag + "commit");
    if (g.key.file != e.file) f.add(tag + "file " + g.key.file);
    if (g.key.class_name != e.class_name) f.add(tag + "class " + g.key.class_name);
    if (g.key.method != e.method) f.add(tag + "method");
    if (g.refactoring != e.refactoring) f.add(tag + "refactoring");
    if (g.snapshot_commit != fx.commits[static_cast<std::size_t>(e.snapshot - 1)]) f.add(tag + "snapshot commit");
    if (g.snapshot_path != e.snapshot_path) f.add(tag + "snapshot path " + g.snapshot_path);
    if (!g.history || g.history->commits.size() != e.history_commits) {
      f.add(tag + "history length " + std::to_string(g.history ? g.history->commits.size() : 0));
    } else {
      const auto stats = history::compute_process_stats(g.history->commits, g.history->detection_commits);
      if (stats.previous_refactoring_count != e.previous_refactorings) f.add(tag + "previous refactorings");
    }
  }
  if (walk.stats.commits != 17) f.add("commit count " + std::to_string(walk.stats.commits));
  if (walk.stats.unmatched_detections != 1) f.add("unmatched detections");
  if (walk.stats.test_file_detections != 1) f.add("test-file detections");
  if (walk.stats.timed_out_commits != 0 || walk.stats.discarded_snapshots != 0) f.add("unexpected discards");

  const auto again = mining::walk_history(repo, fx.detections, opts);
  bool same = again.events.size() == walk.events.size();
  for (std::size_t i = 0; same && i < again.events.size(); ++i) {
    same = again.events[i].key == walk.events[i].key && again.events[i].snapshot_commit == walk.events[i].snapshot_commit;
  }
  if (!same) f.add("replay differs");
  return f.outcome(std::to_string(walk.events.size()) + " events match the hand trace");
}

// ---------------------------------------------------------------- 3

double gini_or_entropy(ml::Criterion c, int pos, int n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(pos) / n;
  if (c == ml::Criterion::Gini) return 2.0 * p * (1.0 - p);
  double h = 0.0;
  for (double q : {p, 1.0 - p}) {
    if (q > 0) h -= q * std::log(q) / std::log(2.0);
  }
  return h;
}

void tree_root_oracle(Failures& f) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(seed, "dt-oracle"));
    const auto n = static_cast<Eigen::Index>(rng.integer(2, 50));
    const auto d = static_cast<Eigen::Index>(rng.integer(1, 3));
    const bool discrete = seed % 2 == 0;
    ml::Matrix X(n, d);
    ml::Labels y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = discrete ? static_cast<double>(rng.integer(0, 6)) : rng.normal();
      y[static_cast<std::size_t>(i)] = static_cast<int>(rng.integer(0, 1));
    }
    const auto criterion = seed % 3 == 0 ? ml::Criterion::Entropy : ml::Criterion::Gini;

    // Every split "x_j <= v" over the distinct values v of every feature
    // (except the largest), scored by direct counting.
    int best_f = -1;
    double best_v = 0.0, best_score = HUGE_VAL;
    const int total_pos = std::accumulate(y.begin(), y.end(), 0);
    if (total_pos != 0 && total_pos != n) {
      for (Eigen::Index j = 0; j < d; ++j) {
        std::set<double> values(X.col(j).data(), X.col(j).data() + n);
        values.erase(std::prev(values.end()));
        for (double v : values) {
          int ln = 0, lp = 0;
          for (Eigen::Index i = 0; i < n; ++i) {
            if (X(i, j) <= v) {
              ++ln;
              lp += y[static_cast<std::size_t>(i)];
            }
          }
          const double score = ln * gini_or_entropy(criterion, lp, ln) +
                               (n - ln) * gini_or_entropy(criterion, total_pos - lp, static_cast<int>(n) - ln);
          if (score < best_score - 1e-12) {
            best_score = score;
            best_f = static_cast<int>(j);
            best_v = v;
          }
        }
      }
    }

    ml::TreeParams p;
    p.criterion = criterion;
    const auto tree = ml::DecisionTree::fit(X, y, p, seed);
    const auto& root = tree.nodes().front();
    const auto tag = "seed " + std::to_string(seed) + ": ";
    if (root.feature != best_f) {
      f.add(tag + "root feature " + std::to_string(root.feature) + " vs " + std::to_string(best_f));
      continue;
    }
    if (best_f < 0) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((X(i, best_f) <= root.threshold) != (X(i, best_f) <= best_v)) {
        f.add(tag + "root partition differs");
        break;
      }
    }
  }
}

void naive_bayes_oracle(Failures& f) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(seed, "nb-oracle"));
    const auto n = static_cast<Eigen::Index>(rng.integer(6, 50));
    const auto d = static_cast<Eigen::Index>(rng.integer(1, 3));
    ml::Matrix X(n, d);
    ml::Labels y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      y[static_cast<std::size_t>(i)] = i < 3 ? 1 : (i < 6 ? 0 : static_cast<int>(rng.integer(0, 1)));
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal() + 1.5 * y[static_cast<std::size_t>(i)];
    }
    ml::NaiveBayesParams p;
    const auto nb = ml::GaussianNaiveBayes::fit(X, y, p);

    // closed form
    double max_var = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      double m = 0.0, s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) m += X(i, j);
      m /= static_cast<double>(n);
      for (Eigen::Index i = 0; i < n; ++i) s += (X(i, j) - m) * (X(i, j) - m);
      max_var = std::max(max_var, s / static_cast<double>(n));
    }
    const double eps = p.var_smoothing * max_var;
    double prior[2], mean[2][3], var[2][3];
    for (int c = 0; c < 2; ++c) {
      int cnt = 0;
      for (auto v : y) cnt += v == c;
      prior[c] = static_cast<double>(cnt) / static_cast<double>(n);
      for (Eigen::Index j = 0; j < d; ++j) {
        double m = 0.0, s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (y[static_cast<std::size_t>(i)] == c) m += X(i, j);
        }
        m /= cnt;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (y[static_cast<std::size_t>(i)] == c) s += (X(i, j) - m) * (X(i, j) - m);
        }
        mean[c][j] = m;
        var[c][j] = s / cnt + eps;
      }
    }
    ml::Matrix T(5, d);
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      for (Eigen::Index j = 0; j < d; ++j) T(i, j) = rng.uniform(-1.0, 2.5);
    }
    const auto got = nb.predict_proba(T);
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      double like[2];
      for (int c = 0; c < 2; ++c) {
        like[c] = prior[c];
        for (Eigen::Index j = 0; j < d; ++j) {
          const double z = T(i, j) - mean[c][j];
          like[c] *= std::exp(-z * z / (2 * var[c][j])) / std::sqrt(2 * M_PI * var[c][j]);
        }
      }
      const double want = like[1] / (like[0] + like[1]);
      if (std::abs(got(i) - want) > 1e-10) f.add("naive Bayes seed " + std::to_string(seed) + " off by " + num(got(i) - want));
    }
  }
}

double relative_gap(const ml::Vector& a, const ml::Vector& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-12});
  return (a - b).norm() / scale;
}

void logistic_gradient_oracle(Failures& f) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, "lr-grad"));
    const Eigen::Index n = 30, d = 4;
    ml::Matrix X(n, d);
    ml::Labels y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal();
      y[static_cast<std::size_t>(i)] = static_cast<int>(rng.integer(0, 1));
    }
    ml::Vector theta(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) theta(j) = rng.normal();
    const double C = std::exp(rng.uniform(-3.0, 3.0));
    ml::Vector grad;
    ml::LogisticRegression::objective(theta, X, y, C, &grad);
    ml::Vector fd(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta(j)));
      ml::Vector up = theta, down = theta;
      up(j) += h;
      down(j) -= h;
      fd(j) = (ml::LogisticRegression::objective(up, X, y, C, nullptr) -
               ml::LogisticRegression::objective(down, X, y, C, nullptr)) /
              (2 * h);
    }
    const double gap = relative_gap(grad, fd);
    if (gap > 1e-5) f.add("logistic gradient seed " + std::to_string(seed) + " gap " + num(gap));
  }
}

void network_gradient_oracle(Failures& f) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(derive_seed(seed, "nn-grad"));
    const Eigen::Index n = 6, d = 3;
    ml::Matrix X(n, d);
    ml::Labels y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform();
      y[static_cast<std::size_t>(i)] = static_cast<int>(i % 2);
    }
    auto net = ml::NeuralNetwork::initialise(d, seed);
    ml::NeuralNetwork::DropoutMasks masks{ml::Matrix(n, ml::kHidden1), ml::Matrix(n, ml::kHidden2)};
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < ml::kHidden1; ++j) masks.hidden1(i, j) = rng.uniform() < 0.8 ? 1.0 : 0.0;
      for (Eigen::Index j = 0; j < ml::kHidden2; ++j) masks.hidden2(i, j) = rng.uniform() < 0.8 ? 1.0 : 0.0;
    }
    for (const bool dropout : {false, true}) {
      const auto* m = dropout ? &masks : nullptr;
      const double keep = dropout ? 0.8 : 1.0;
      ml::Vector grad;
      net.loss_and_gradient(X, y, &grad, m, keep);
      const ml::Vector theta = net.parameters();
      ml::Vector fd(theta.size());
      auto probe = net;
      for (Eigen::Index k = 0; k < theta.size(); ++k) {
        const double h = 1e-6;
        ml::Vector t = theta;
        t(k) += h;
        probe.set_parameters(t);
        const double up = probe.loss_and_gradient(X, y, nullptr, m, keep);
        t(k) -= 2 * h;
        probe.set_parameters(t);
        const double down = probe.loss_and_gradient(X, y, nullptr, m, keep);
        fd(k) = (up - down) / (2 * h);
      }
      const double gap = relative_gap(grad, fd);
      if (gap > 1e-5) {
        f.add("network gradient seed " + std::to_string(seed) + (dropout ? " with dropout" : "") + " gap " + num(gap));
      }
    }
  }
}

CheckOutcome ml_oracles(const fs::path&) {
  Failures f;
  tree_root_oracle(f);
  naive_bayes_oracle(f);
  logistic_gradient_oracle(f);
  network_gradient_oracle(f);
  return f.outcome("tree roots, naive Bayes posteriors and gradients agree");
}

// ---------------------------------------------------------------- 4

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

CheckOutcome pipeline_determinism(const fs::path& workdir) {
  Failures f;
  const auto ds = workdir / "determinism-ds";
  fs::remove_all(ds);
  const std::size_t pos = 30, neg = 80;
  dataset::append_instances(ds, synthetic_class_instances(pos, neg, RefactoringType::ExtractClass, 11));

  std::vector<fs::path> dirs{workdir / "determinism-m1", workdir / "determinism-m2"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    const int rc = run_cli({"--seed", "5", "train", "--dataset", ds.string(), "--refactoring", "extract_class",
                            "--algorithm", "all", "--iterations", "4", "--folds", "3", "--nn-epochs", "30", "--out",
                            d.string()});
    if (rc != 0) f.add("train exited with " + std::to_string(rc));
  }
  std::size_t reports = 0;
  for (const auto a : ml::kAllAlgorithms) {
    const auto name = cli::report_file_name("extract_class", ml::algorithm_id(a));
    const auto first = slurp(dirs[0] / name), second = slurp(dirs[1] / name);
    if (first.empty()) {
      f.add("missing " + name);
      continue;
    }
    ++reports;
    if (first != second) f.add(name + " differs between runs");
    const auto model = cli::model_file_name("extract_class", ml::algorithm_id(a));
    if (slurp(dirs[0] / model) != slurp(dirs[1] / model)) f.add(model + " differs between runs");

    const auto r = pipeline::EvaluationReport::from_json(nlohmann::json::parse(first));
    if (r.positives != static_cast<std::int64_t>(pos) || r.negatives != static_cast<std::int64_t>(pos)) {
      f.add(name + ": balanced counts " + std::to_string(r.positives) + "/" + std::to_string(r.negatives));
    }
    std::int64_t rows = 0, truth_pos = 0;
    double sp = 0, sr = 0, sa = 0;
    for (const auto& fold : r.folds) {
      const auto& c = fold.confusion;
      rows += c.tp + c.fp + c.tn + c.fn;
      truth_pos += c.tp + c.fn;
      const double p = c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
      const double rc = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
      const double acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.tp + c.fp + c.tn + c.fn);
      if (p != fold.precision || rc != fold.recall || acc != fold.accuracy) f.add(name + ": fold metrics");
      sp += p;
      sr += rc;
      sa += acc;
    }
    const double k = static_cast<double>(r.folds.size());
    if (sp / k != r.mean_precision || sr / k != r.mean_recall || sa / k != r.mean_accuracy) f.add(name + ": means");
    if (rows != 2 * static_cast<std::int64_t>(pos) || truth_pos != static_cast<std::int64_t>(pos)) {
      f.add(name + ": folds do not cover the balanced table");
    }
  }

  ml::Labels y;
  for (std::size_t i = 0; i < 200; ++i) y.push_back(i < 37 ? 1 : 0);
  const auto kept = ml::random_undersample_indices(y, 3);
  std::size_t kp = 0;
  for (auto i : kept) kp += static_cast<std::size_t>(y[i]);
  if (kp != 37 || kept.size() != 74) f.add("under-sampling 37 of 200 kept " + std::to_string(kept.size()));
  return f.outcome(std::to_string(reports) + " reports identical and recomputable");
}

// ---------------------------------------------------------------- 5

CheckOutcome separable_data(const fs::path&) {
  Failures f;
  pipeline::TrainConfig cfg;
  cfg.seed = 17;
  cfg.iterations = 5;
  const auto blobs = two_blob_table(100, 2, 4.0, 23);
  const auto sep = pipeline::train_and_evaluate(blobs, ml::Algorithm::RandomForest, cfg);
  auto shuffled = blobs;
  Rng rng(29);
  rng.shuffle(std::span<int>(shuffled.labels));
  const auto noise = pipeline::train_and_evaluate(shuffled, ml::Algorithm::RandomForest, cfg);
  const double a = sep.report.mean_accuracy, b = noise.report.mean_accuracy;
  if (a < 0.95) f.add("separable accuracy " + num(a));
  if (b < 0.4 || b > 0.6) f.add("shuffled-label accuracy " + num(b));
  return f.outcome("accuracy " + num(a) + ", shuffled " + num(b));
}

// ---------------------------------------------------------------- 6

CheckOutcome forest_tree_degeneracy(const fs::path&) {
  Failures f;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(derive_seed(s, "rf-dt"));
    const auto n = static_cast<Eigen::Index>(rng.integer(20, 80));
    const auto d = static_cast<Eigen::Index>(rng.integer(2, 6));
    ml::Matrix X(n, d);
    ml::Labels y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal();
      y[static_cast<std::size_t>(i)] = X(i, 0) + 0.5 * rng.normal() > 0 ? 1 : 0;
    }
    ml::TreeParams tp;
    if (rng.integer(0, 1)) tp.max_depth = static_cast<int>(rng.integer(1, 8));
    tp.max_features = rng.integer(0, 1) ? ml::MaxFeatures::Sqrt : ml::MaxFeatures::All;
    tp.min_samples_split = static_cast<int>(rng.integer(2, 6));
    tp.splitter = rng.integer(0, 1) ? ml::Splitter::Random : ml::Splitter::Best;
    tp.criterion = rng.integer(0, 1) ? ml::Criterion::Entropy : ml::Criterion::Gini;
    ml::RandomForestParams rp;
    rp.tree = tp;
    rp.bootstrap = false;
    rp.n_estimators = 1;
    const auto seed = derive_seed(s, "fit");
    const auto forest = ml::RandomForest::fit(X, y, rp, seed);
    const auto tree = ml::DecisionTree::fit(X, y, tp, seed);
    ml::Matrix T(n + 50, d);
    T.topRows(n) = X;
    for (Eigen::Index i = n; i < T.rows(); ++i) {
      for (Eigen::Index j = 0; j < d; ++j) T(i, j) = 2 * rng.normal();
    }
    const ml::Vector pf = forest.predict_proba(T);
    const ml::Labels lt = tree.predict(T);
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      if ((pf(i) > 0.5 ? 1 : 0) != lt[static_cast<std::size_t>(i)]) {
        f.add("dataset " + std::to_string(s) + " row " + std::to_string(i) + " differs");
        break;
      }
    }
  }
  return f.outcome("20 datasets predict identically");
}

// ---------------------------------------------------------------- 7

CheckOutcome cross_dataset(const fs::path& workdir) {
  Failures f;
  const auto a = two_blob_table(100, 2, 3.0, 41);
  const auto b = two_blob_table(100, 2, 3.0, 43, 2.0);
  pipeline::TrainConfig cfg;
  cfg.seed = 3;
  cfg.iterations = 5;
  cfg.folds = 5;
  const auto trained = pipeline::train_and_evaluate(a, ml::Algorithm::LogisticRegression, cfg);
  const auto file = workdir / "cross-model.json";
  trained.model.save(file);
  const auto model = ml::TrainedModel::load(file, a.catalog_hash);

  const auto xa = ml::make_dataset(a.features, a.labels);
  if (!(model.scaler() == ml::MinMaxScaler::fit(xa.X))) f.add("stored scaler is not the one fit on dataset A");
  const auto xb = ml::make_dataset(b.features, b.labels);
  if (ml::MinMaxScaler::fit(xb.X) == model.scaler()) f.add("datasets too similar to tell scalers apart");

  const auto report = pipeline::cross_dataset_evaluate(model, b, cfg.seed);
  const auto manual = pipeline::confusion(xb.y, ml::predict(model.estimator(), model.scaler().transform(xb.X)));
  const auto& c = report.folds.at(0).confusion;
  if (c.tp != manual.tp || c.fp != manual.fp || c.tn != manual.tn || c.fn != manual.fn) {
    f.add("cross-dataset predictions do not use dataset A's scaler");
  }
  const double drop = trained.report.mean_accuracy - report.mean_accuracy;
  if (!(drop > 0.02)) f.add("accuracy drop " + num(drop));

  auto other = b;
  other.catalog_hash = "another-catalog";
  try {
    pipeline::cross_dataset_evaluate(model, other, cfg.seed);
    f.add("catalog mismatch not detected");
  } catch (const CatalogMismatch&) {
  }
  return f.outcome("in-distribution " + num(trained.report.mean_accuracy) + ", shifted " + num(report.mean_accuracy));
}

// ---------------------------------------------------------------- 8

CheckOutcome importance_tables(const fs::path&) {
  Failures f;
  std::vector<std::string> names;
  for (int i = 0; i < 13; ++i) names.push_back("f" + std::to_string(i));
  const std::vector<std::vector<double>> weights = {
      {9, 8, 7, 6, 5, 4, 3, 2, 1, 0.5, 0.25, 0, 0},
      {-1, 10, 0, 3, -3, 2, 0, 0, 4, 5, 6, 7, 0},
      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
  };
  std::vector<pipeline::ImportanceInput> models;
  for (std::size_t m = 0; m < weights.size(); ++m) {
    const ml::LogisticRegression lr(Eigen::Map<const ml::Vector>(weights[m].data(), 13), 0.5);
    const ml::Vector imp = lr.feature_importance();
    models.push_back({"m" + std::to_string(m), ElementLevel::Class, names,
                      std::vector<double>(imp.data(), imp.data() + imp.size())});
  }
  // Tabulated by hand from the three weight vectors.
  const std::vector<std::int64_t> top1 = {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0};
  const std::vector<std::int64_t> top5 = {2, 3, 2, 2, 1, 0, 0, 0, 1, 1, 1, 2, 0};
  const std::vector<std::int64_t> top10 = {3, 3, 3, 3, 3, 3, 2, 2, 3, 2, 1, 2, 0};
  const auto tables = pipeline::build_importance_tables(models);
  if (tables.size() != 1) return {false, "expected one table"};
  const auto& t = tables.front();
  for (std::size_t i = 0; i < 13; ++i) {
    const auto& r = t.rows[i];
    if (r.top1 != top1[i] || r.top5 != top5[i] || r.top10 != top10[i]) f.add("counts of " + r.feature);
  }
  if (t.never_in_top10() != std::vector<std::string>{"f12"}) f.add("never-appearing set");

  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = static_cast<std::size_t>(rng.integer(1, 30));
    const auto m = rng.integer(1, 5);
    std::vector<std::string> nm;
    for (std::size_t i = 0; i < d; ++i) nm.push_back("g" + std::to_string(i));
    std::vector<pipeline::ImportanceInput> in;
    for (std::int64_t k = 0; k < m; ++k) {
      std::vector<double> imp(d);
      for (auto& v : imp) v = static_cast<double>(rng.integer(0, 6));
      in.push_back({"r", ElementLevel::Method, nm, imp});
    }
    const auto& tt = pipeline::build_importance_tables(in).front();
    std::int64_t s1 = 0, s5 = 0, s10 = 0;
    for (const auto& r : tt.rows) {
      if (!(r.top1 <= r.top5 && r.top5 <= r.top10 && r.top10 <= m)) {
        f.add("monotonicity broken in trial " + std::to_string(trial));
        break;
      }
      s1 += r.top1;
      s5 += r.top5;
      s10 += r.top10;
    }
    const auto di = static_cast<std::int64_t>(d);
    if (s1 != m || s5 != m * std::min<std::int64_t>(5, di) || s10 != m * std::min<std::int64_t>(10, di)) {
      f.add("column sums in trial " + std::to_string(trial));
    }
  }
  return f.outcome("hand tabulation matches; 1000 random rankings monotone");
}

// ---------------------------------------------------------------- 9

CheckOutcome end_to_end(const fs::path& workdir) {
  Failures f;
  const auto fx = build_end_to_end_fixture(workdir / "e2e");
  const auto ds = workdir / "e2e" / "dataset";
  const auto models = workdir / "e2e" / "models";
  fs::remove_all(models);
  std::string out;
  if (run_cli({"mine", "--repo", fx.repo.string(), "--detections", fx.detections_file.string(), "--k", "2", "--out",
               ds.string()},
              &out) != 0) {
    return {false, "mine failed"};
  }
  const auto manifest = dataset::read_manifest(ds);
  const auto n_pos = static_cast<std::int64_t>(fx.positives_per_refactoring);
  if (manifest.count(ElementLevel::Method, RefactoringType::ExtractMethod) != n_pos ||
      manifest.count(ElementLevel::Class, RefactoringType::ExtractClass) != n_pos) {
    f.add("mined positives do not match the injected detections");
  }
  if (run_cli({"build", "--dataset", ds.string(), "--refactoring", "extract_method,extract_class", "--out",
               (workdir / "e2e" / "tables").string()}) != 0) {
    f.add("build failed");
  }
  if (run_cli({"--seed", "1", "train", "--dataset", ds.string(), "--refactoring", "extract_method,extract_class",
               "--algorithm", "lr,rf", "--iterations", "5", "--folds", "3", "--out", models.string()}) != 0) {
    return {false, "train failed"};
  }
  if (run_cli({"--log-level", "error", "recommend", "--models", models.string(), "--repo", fx.snapshot.string(),
               "--top", "5"},
              &out) != 0) {
    return {false, "recommend failed"};
  }
  std::istringstream lines(out);
  std::string first;
  std::getline(lines, first);
  std::vector<std::string> cols;
  std::stringstream ss(first);
  for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
  if (cols.size() < 5 || cols[4] != "p.Engineered") f.add("top recommendation is: " + first);
  return f.outcome("top recommendation: " + first);
}

CheckOutcome timed(const std::function<CheckOutcome(const fs::path&)>& fn, const fs::path& workdir, double limit) {
  const auto start = std::chrono::steady_clock::now();
  CheckOutcome r;
  try {
    r = fn(workdir);
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit > 0 && r.seconds >= limit) {
    r.pass = false;
    r.detail += " (took " + num(r.seconds) + " s, limit " + num(limit) + " s)";
  }
  return r;
}

}  // namespace

std::vector<AcceptanceCheck> acceptance_checks(const fs::path& java_fixtures) {
  const auto with_limit = [](auto fn, double limit) {
    return [fn, limit](const fs::path& w) { return timed(fn, w, limit); };
  };
  return {
      {1, "metric oracles", with_limit([java_fixtures](const fs::path&) { return metric_oracles(java_fixtures); }, 5)},
      {2, "miner semantics", with_limit(miner_semantics, 10)},
      {3, "ml oracle equivalence", with_limit(ml_oracles, 60)},
      {4, "pipeline determinism", with_limit(pipeline_determinism, 0)},
      {5, "separable data", with_limit(separable_data, 30)},
      {6, "forest/tree degeneracy", with_limit(forest_tree_degeneracy, 0)},
      {7, "cross-dataset protocol", with_limit(cross_dataset, 0)},
      {8, "importance tables", with_limit(importance_tables, 0)},
      {9, "end-to-end smoke", with_limit(end_to_end, 120)},
  };
}

}  // namespace refpred::testing
