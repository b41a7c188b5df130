#include "refpred/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <spdlog/spdlog.h>

#include "refpred/cli/recommend.hpp"
#include "refpred/dataset/store.hpp"
#include "refpred/error.hpp"
#include "refpred/mining/detections.hpp"
#include "refpred/mining/feature_assembly.hpp"
#include "refpred/mining/history_walker.hpp"
#include "refpred/mining/repository.hpp"
#include "refpred/ml/sampling.hpp"
#include "refpred/pipeline/evaluation.hpp"
#include "refpred/pipeline/folds.hpp"
#include "refpred/pipeline/importance_table.hpp"
#include "refpred/rng.hpp"

namespace refpred::cli {

namespace fs = std::filesystem;

std::string model_file_name(std::string_view refactoring_slug, std::string_view algorithm_id) {
  return std::string(refactoring_slug) + "__" + std::string(algorithm_id) + ".model.json";
}

std::string report_file_name(std::string_view refactoring_slug, std::string_view algorithm_id) {
  return std::string(refactoring_slug) + "__" + std::string(algorithm_id) + ".report.json";
}

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::string config;
  std::string log_level = "warn";

  // mine
  std::string repo;
  std::string detections;
  int k = mining::kDefaultK;
  double timeout_secs = mining::kDefaultCommitTimeoutSeconds;
  std::string source = "custom";
  std::string project;
  bool history_adjuncts = false;
  bool append = false;

  // build, train, eval, cross-eval, ordered-eval
  std::string dataset;
  std::string refactoring = "all";
  std::string algorithm = "all";
  std::string out;
  std::optional<int> iterations;
  std::optional<int> folds;
  int nn_epochs = ml::SearchSpace{}.nn_epochs;
  bool global_scaling = false;
  std::string sampler = "random";
  std::string model;
  double fraction = 0.9;

  // importance, recommend
  std::string models;
  std::size_t top = 10;
};

void require_exists(const std::string& path, const std::string& what) {
  if (path.empty() || !fs::exists(path)) throw IOFailure(what + " " + path + " does not exist");
}

std::vector<RefactoringType> refactorings_of(const std::string& text) {
  std::vector<RefactoringType> out;
  if (text == "all") {
    for (const auto& i : canonical_taxonomy()) out.push_back(i.type);
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(refactoring_from_string(part));
  }
  return out;
}

std::vector<ml::Algorithm> algorithms_of(const std::string& text) {
  std::vector<ml::Algorithm> out;
  if (text == "all") return {std::begin(ml::kAllAlgorithms), std::end(ml::kAllAlgorithms)};
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(ml::algorithm_from_string(part));
  return out;
}

pipeline::TrainConfig train_config(const Options& o) {
  pipeline::TrainConfig c;
  c.seed = o.seed;
  c.iterations = o.iterations;
  c.folds = o.folds;
  c.global_scaling = o.global_scaling;
  if (o.sampler == "random") {
    c.sampler = pipeline::Sampler::Random;
  } else if (o.sampler == "near-miss") {
    c.sampler = pipeline::Sampler::NearMiss;
  } else {
    throw Error("unknown sampler " + o.sampler + " (random, near-miss)");
  }
  c.space.nn_epochs = o.nn_epochs;
  c.dataset_name = fs::path(o.dataset).lexically_normal().filename().string();
  return c;
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) throw IOFailure("cannot write " + file.string());
}

void emit_report(const Options& o, const pipeline::EvaluationReport& report, std::ostream& out) {
  if (o.out.empty()) {
    out << report.dump();
  } else {
    write_text(o.out, report.dump());
    out << fmt::format("precision {:.4f} recall {:.4f} accuracy {:.4f}\n", report.mean_precision,
                       report.mean_recall, report.mean_accuracy);
  }
}

// Removes the files a previous mine run left in `dir`.
void reset_dataset(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.json")) return;
  fs::remove(dir / "manifest.json");
  for (const auto level : kAllLevels) fs::remove_all(dir / std::string(to_string(level)));
}

int cmd_mine(const Options& o, std::ostream& out) {
  require_exists(o.detections, "detections file");
  require_exists(o.repo, "repository");
  if (o.out.empty()) throw Error("--out is required");
  const auto detections = mining::ingest_detections(o.detections);
  mining::GitRepository repo(o.repo);
  mining::WalkOptions wo;
  wo.k = o.k;
  wo.commit_timeout_seconds = o.timeout_secs;
  wo.project = o.project;
  const auto walk = mining::walk_history(repo, detections, wo);
  mining::AssemblyOptions ao;
  ao.history_adjuncts = o.history_adjuncts;
  ao.commit_timeout_seconds = o.timeout_secs;
  const auto assembled = mining::assemble_instances(repo, walk.events, ao);

  if (!o.append) reset_dataset(o.out);
  dataset::StoreOptions so;
  so.source = o.source;
  so.k = o.k;
  so.history_adjuncts = o.history_adjuncts;
  dataset::append_instances(o.out, assembled.instances, so);

  std::map<std::pair<ElementLevel, std::string>, std::size_t> counts;
  for (const auto& i : assembled.instances) ++counts[{i.level, dataset::label_class(i.refactoring)}];
  for (const auto& [key, n] : counts) out << to_string(key.first) << '\t' << key.second << '\t' << n << '\n';
  const auto& s = walk.stats;
  out << fmt::format("commits {} events {} discarded {} timed-out {} unmatched-detections {} test-detections {}\n",
                     s.commits, walk.events.size(), s.discarded_snapshots + assembled.stats.discarded,
                     s.timed_out_commits + assembled.stats.timed_out_commits, s.unmatched_detections,
                     s.test_file_detections);
  return kExitOk;
}

int cmd_build(const Options& o, std::ostream& out) {
  require_exists(o.dataset, "dataset");
  if (o.out.empty()) throw Error("--out is required");
  fs::create_directories(o.out);
  const bool all = o.refactoring == "all";
  for (const auto r : refactorings_of(o.refactoring)) {
    try {
      const auto table = dataset::build_training_table(o.dataset, r);
      dataset::write_training_table(table, fs::path(o.out) / (std::string(info(r).slug) + ".csv"));
      out << info(r).slug << '\t' << table.positives() << '\t' << table.negatives() << '\n';
    } catch (const EmptyClass& e) {
      if (!all) throw;
      spdlog::warn("{}: {}", info(r).slug, e.what());
    }
  }
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  require_exists(o.dataset, "dataset");
  if (o.out.empty()) throw Error("--out is required");
  const auto config = train_config(o);
  const bool all = o.refactoring == "all";
  for (const auto r : refactorings_of(o.refactoring)) {
    std::optional<dataset::TrainingTable> table;
    try {
      table = dataset::build_training_table(o.dataset, r);
    } catch (const EmptyClass& e) {
      if (!all) throw;
      spdlog::warn("{}: {}", info(r).slug, e.what());
      continue;
    }
    for (const auto a : algorithms_of(o.algorithm)) {
      const auto id = ml::algorithm_id(a);
      auto outcome = pipeline::train_and_evaluate(*table, a, config);
      const fs::path dir(o.out);
      fs::create_directories(dir);
      outcome.model.save(dir / model_file_name(info(r).slug, id));
      write_text(dir / report_file_name(info(r).slug, id), outcome.report.dump());
      out << fmt::format("{}\t{}\taccuracy {:.4f}\n", info(r).slug, id, outcome.report.mean_accuracy);
    }
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  require_exists(o.model, "model");
  require_exists(o.dataset, "dataset");
  const auto model = ml::TrainedModel::load(o.model);
  if (!model.refactoring()) throw Error("model " + o.model + " names no refactoring");
  const auto table = dataset::build_training_table(o.dataset, *model.refactoring());
  if (model.catalog_hash() != table.catalog_hash) {
    throw CatalogMismatch("model catalog " + model.catalog_hash() + " does not match dataset catalog " +
                          table.catalog_hash);
  }
  const auto full = ml::make_dataset(table.features, table.labels);
  const auto d = ml::subset(full, ml::random_undersample_indices(full.y, derive_seed(o.seed, "undersample")));
  const int k = o.folds.value_or(pipeline::default_search_config(model.algorithm()).folds);
  const auto folds = pipeline::stratified_folds(d.y, k, derive_seed(o.seed, "eval-folds"));

  pipeline::EvaluationReport report;
  report.protocol = "cv";
  report.algorithm = std::string(ml::algorithm_id(model.algorithm()));
  report.refactoring = std::string(to_string(table.refactoring));
  report.dataset = fs::path(o.dataset).lexically_normal().filename().string();
  report.catalog_hash = table.catalog_hash;
  report.seed = o.seed;
  report.rows_before_balancing = static_cast<std::int64_t>(table.size());
  report.positives = static_cast<std::int64_t>(ml::count_positive(d.y));
  report.negatives = static_cast<std::int64_t>(d.rows()) - report.positives;
  report.best_hyperparameters = ml::to_json(model.hyperparameters());
  report.folds = pipeline::cross_validate(d, model.hyperparameters(), folds, derive_seed(o.seed, "eval-fit"), true);
  report.compute_means();
  emit_report(o, report, out);
  return kExitOk;
}

int cmd_cross_eval(const Options& o, std::ostream& out) {
  require_exists(o.model, "model");
  require_exists(o.dataset, "dataset");
  emit_report(o, pipeline::cross_dataset_evaluate(o.model, o.dataset, o.seed), out);
  return kExitOk;
}

int cmd_ordered_eval(const Options& o, std::ostream& out) {
  require_exists(o.dataset, "dataset");
  const auto rs = refactorings_of(o.refactoring);
  const auto as = algorithms_of(o.algorithm);
  if (rs.size() != 1 || as.size() != 1) throw Error("ordered-eval needs one refactoring and one algorithm");
  const auto table = dataset::build_training_table(o.dataset, rs.front());
  emit_report(o, pipeline::ordered_split_evaluate(table, as.front(), o.fraction, train_config(o)), out);
  return kExitOk;
}

int cmd_importance(const Options& o, std::ostream& out) {
  require_exists(o.models, "model directory");
  std::vector<pipeline::ImportanceInput> inputs;
  for (const auto& lm : load_models(o.models)) {
    if (!ml::supports_importance(lm.model.algorithm())) continue;
    const auto imp = lm.model.feature_importance();
    inputs.push_back({lm.file.filename().string(), lm.catalog->level(), lm.catalog->names(),
                      std::vector<double>(imp.data(), imp.data() + imp.size())});
  }
  for (const auto& t : pipeline::build_importance_tables(inputs)) {
    const auto level = std::string(to_string(t.level));
    if (o.out.empty()) {
      out << "# " << level << " (" << t.models << " models)\n";
      pipeline::write_importance_csv(out, t);
    } else {
      std::ostringstream csv;
      pipeline::write_importance_csv(csv, t);
      write_text(fs::path(o.out) / (level + "_importance.csv"), csv.str());
    }
    const auto never = t.never_in_top10();
    out << level << " features never in a top 10 (" << never.size() << "):";
    for (const auto& n : never) out << ' ' << n;
    out << '\n';
  }
  return kExitOk;
}

int cmd_recommend(const Options& o, std::ostream& out) {
  require_exists(o.models, "model directory");
  require_exists(o.repo, "snapshot");
  const auto models = load_models(o.models);
  if (models.empty()) throw IOFailure("no models in " + o.models);
  RecommendOptions ro;
  ro.top_n = o.top;
  const auto result = recommend(models, o.repo, ro);
  print_recommendations(out, result.items);
  return kExitOk;
}

// key=value lines; '#' starts a comment. Keys are long flag names without
// the leading dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw IOFailure("config file " + file + " does not exist");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(file + ":" + std::to_string(line_no) + ": expected key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}


// Value of --config, looked up before parsing so that the file can supply
// required options too.
std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  return std::nullopt;
}

// Appends the config entries not given on the command line: global keys go
// before the subcommand, the others after it.
std::vector<std::string> with_config(CLI::App& app, const std::vector<std::string>& args) {
  const auto file = config_path(args);
  if (!file) return args;
  auto sub_at = args.end();
  CLI::App* sub = nullptr;
  for (auto it = args.begin(); it != args.end(); ++it) {
    if (it->starts_with("-")) continue;
    if ((sub = app.get_subcommand_no_throw(*it))) {
      sub_at = it;
      break;
    }
  }
  if (!sub) return args;
  const auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
  };
  std::vector<std::string> global, local;
  for (const auto& [key, value] : read_config(*file)) {
    const auto flag = "--" + key;
    auto* target = &local;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt) {
      opt = app.get_option_no_throw(flag);
      target = &global;
    }
    if (!opt || key == "config") throw Error("config key " + key + " is not a flag of " + sub->get_name());
    if (given(flag)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") target->push_back(flag);
    } else {
      target->push_back(flag);
      target->push_back(value);
    }
  }
  std::vector<std::string> merged(args.begin(), sub_at);
  merged.insert(merged.end(), global.begin(), global.end());
  merged.insert(merged.end(), sub_at, args.end());
  merged.insert(merged.end(), local.begin(), local.end());
  return merged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Mine refactoring histories, train refactoring predictors and rank refactoring candidates"};
  app.name("refpred");
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Master random seed")->capture_default_str();
  app.add_option("--config", o.config, "File of key=value lines, one per long flag");
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off")->capture_default_str();

  const auto train_flags = [&](CLI::App* c) {
    c->add_option("--iterations", o.iterations, "Random search iterations (100; 10 for svm and nn)");
    c->add_option("--folds", o.folds, "Cross-validation folds (10; 5 for svm and nn)");
    c->add_option("--nn-epochs", o.nn_epochs, "Training epochs of the neural network")->capture_default_str();
    c->add_flag("--global-scaling", o.global_scaling,
                "Scale the whole balanced table before cross-validation");
    c->add_option("--sampler", o.sampler, "Under-sampling: random or near-miss")->capture_default_str();
  };

  auto* mine = app.add_subcommand("mine", "Walk a git history and store labeled feature rows");
  mine->add_option("--repo", o.repo, "Git work tree")->required();
  mine->add_option("--detections", o.detections, "Line-delimited JSON detection records")->required();
  mine->add_option("--k", o.k, "Clean modifications before a class counts as not refactored")->capture_default_str();
  mine->add_option("--timeout-secs", o.timeout_secs, "Per-commit processing budget")->capture_default_str();
  mine->add_option("--out", o.out, "Dataset directory")->required();
  mine->add_option("--source", o.source, "Dataset source tag")->capture_default_str();
  mine->add_option("--project", o.project, "Project name (default: repository directory name)");
  mine->add_flag("--history-adjuncts", o.history_adjuncts, "Add process and ownership columns to method and "
                                                           "variable rows");
  mine->add_flag("--append", o.append, "Add to the dataset instead of replacing it");

  auto* build = app.add_subcommand("build", "Write merged training tables");
  build->add_option("--dataset", o.dataset, "Dataset directory")->required();
  build->add_option("--refactoring", o.refactoring, "Refactoring name or slug, comma list, or all")
      ->capture_default_str();
  build->add_option("--out", o.out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Search, evaluate and fit models");
  train->add_option("--dataset", o.dataset, "Dataset directory")->required();
  train->add_option("--refactoring", o.refactoring, "Refactoring name or slug, comma list, or all")
      ->capture_default_str();
  train->add_option("--algorithm", o.algorithm, "lr, nb, svm, dt, rf, nn, comma list, or all")
      ->capture_default_str();
  train->add_option("--out", o.out, "Model directory")->required();
  train_flags(train);

  auto* eval = app.add_subcommand("eval", "Cross-validate a trained model's hyperparameters");
  eval->add_option("--model", o.model, "Model file")->required();
  eval->add_option("--dataset", o.dataset, "Dataset directory")->required();
  eval->add_option("--folds", o.folds, "Cross-validation folds");
  eval->add_option("--out", o.out, "Report file (default: standard output)");

  auto* cross = app.add_subcommand("cross-eval", "Apply a trained model to another dataset");
  cross->add_option("--model", o.model, "Model file")->required();
  cross->add_option("--dataset", o.dataset, "Dataset directory")->required();
  cross->add_option("--out", o.out, "Report file (default: standard output)");

  auto* ordered = app.add_subcommand("ordered-eval", "Train on older rows and test on newer ones");
  ordered->add_option("--dataset", o.dataset, "Dataset directory")->required();
  ordered->add_option("--refactoring", o.refactoring, "Refactoring name or slug")->required();
  ordered->add_option("--algorithm", o.algorithm, "lr, nb, svm, dt, rf or nn")->required();
  ordered->add_option("--fraction", o.fraction, "Share of rows used for training")->capture_default_str();
  ordered->add_option("--out", o.out, "Report file (default: standard output)");
  train_flags(ordered);

  auto* importance = app.add_subcommand("importance", "Top-1/5/10 feature counts over trained models");
  importance->add_option("--models", o.models, "Model directory")->required();
  importance->add_option("--out", o.out, "Directory for <level>_importance.csv (default: standard output)");

  auto* rec = app.add_subcommand("recommend", "Rank refactoring candidates of a source tree");
  rec->add_option("--models", o.models, "Model directory")->required();
  rec->add_option("--repo", o.repo, "Source tree or git work tree")->required();
  rec->add_option("--top", o.top, "Number of recommendations")->capture_default_str();

  try {
    const auto merged = with_config(app, args);
    std::vector<std::string> argv(merged.rbegin(), merged.rend());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return dynamic_cast<const IOFailure*>(&e) ? kExitMissingInput : kExitFailure;
  }

  spdlog::set_level(spdlog::level::from_str(o.log_level));
  const auto* sub = app.get_subcommands().front();
  try {
    if (sub == mine) return cmd_mine(o, out);
    if (sub == build) return cmd_build(o, out);
    if (sub == train) return cmd_train(o, out);
    if (sub == eval) return cmd_eval(o, out);
    if (sub == cross) return cmd_cross_eval(o, out);
    if (sub == ordered) return cmd_ordered_eval(o, out);
    if (sub == importance) return cmd_importance(o, out);
    return cmd_recommend(o, out);
  } catch (const CatalogMismatch& e) {
    err << "CatalogMismatch: " << e.what() << '\n';
    return kExitCatalogMismatch;
  } catch (const IOFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissingInput;
  } catch (const RepoUnreadable& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissingInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace refpred::cli
