#include "refpred/cli/recommend.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"
#include "refpred/history/process_metrics.hpp"
#include "refpred/metrics/code_metrics.hpp"
#include "refpred/mining/feature_assembly.hpp"
#include "refpred/mining/history_walker.hpp"
#include "refpred/mining/repository.hpp"

namespace refpred::cli {

namespace fs = std::filesystem;

namespace {

struct Element {
  ElementKey key;
  ElementLevel level;
  std::vector<double> source_only;  // history columns omitted (method/variable) or included (class)
  std::vector<double> with_history;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Per-path commit lists of the whole first-parent history, following renames.
std::map<std::string, mining::FileHistory> file_histories(mining::Repository& repo) {
  std::map<std::string, mining::FileHistory> out;
  for (const auto& c : repo.history()) {
    for (const auto& ch : c.changes) {
      if (ch.old_path && *ch.old_path != ch.path) {
        auto node = out.extract(*ch.old_path);
        if (!node.empty()) {
          node.key() = ch.path;
          out.insert_or_assign(ch.path, std::move(node.mapped()));
        }
      }
      history::CommitRecord rec;
      rec.hash = c.hash;
      rec.timestamp = c.timestamp;
      rec.author_id = history::normalize_author(c.author_name, c.author_email);
      rec.message = c.message;
      rec.deltas.push_back({ch.path, ch.lines_added, ch.lines_removed});
      out[ch.path].commits.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace

std::vector<LoadedModel> load_models(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IOFailure("model directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.ends_with(".model.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LoadedModel> out;
  for (const auto& f : files) {
    auto model = ml::TrainedModel::load(f);
    if (!model.refactoring()) {
      spdlog::warn("{} names no refactoring, ignored", f.string());
      continue;
    }
    const auto* catalog = catalog_by_hash(model.catalog_hash());
    if (!catalog) throw CatalogMismatch(f.string() + ": unknown feature catalog " + model.catalog_hash());
    if (catalog->level() != level_of(*model.refactoring())) {
      throw CatalogMismatch(f.string() + ": catalog level does not match its refactoring");
    }
    const auto r = *model.refactoring();
    out.push_back({f, std::move(model), r, catalog});
  }
  return out;
}

RecommendResult recommend(const std::vector<LoadedModel>& models, const fs::path& snapshot,
                          const RecommendOptions& options) {
  RecommendResult result;
  if (!fs::exists(snapshot)) throw IOFailure("snapshot " + snapshot.string() + " does not exist");

  std::map<std::string, mining::FileHistory> histories;
  std::string head;
  if (fs::exists(snapshot / ".git")) {
    try {
      mining::GitRepository repo(snapshot);
      histories = file_histories(repo);
      if (!repo.history().empty()) head = repo.history().back().hash;
      result.history_available = true;
    } catch (const RepoUnreadable& e) {
      spdlog::warn("cannot read git history of {}: {}", snapshot.string(), e.what());
    }
  }
  if (!result.history_available) {
    spdlog::warn("no version history at {}: process and ownership features are zero-filled, "
                 "predictions that rely on them are unreliable",
                 snapshot.string());
  }

  std::vector<std::string> paths;
  if (fs::is_regular_file(snapshot)) {
    paths.push_back(snapshot.filename().string());
  } else {
    for (auto it = fs::recursive_directory_iterator(snapshot); it != fs::recursive_directory_iterator(); ++it) {
      if (it->is_directory() && it->path().filename() == ".git") {
        it.disable_recursion_pending();
        continue;
      }
      if (!it->is_regular_file() || it->path().extension() != ".java") continue;
      const auto rel = fs::relative(it->path(), snapshot).generic_string();
      if (!mining::is_test_file(rel)) paths.push_back(rel);
    }
  }
  std::sort(paths.begin(), paths.end());

  const auto base = fs::is_regular_file(snapshot) ? snapshot.parent_path() : snapshot;
  const auto project = fs::absolute(base).lexically_normal().filename().string();
  const mining::FileHistory empty;
  std::vector<Element> elements;
  for (const auto& rel : paths) {
    ++result.files;
    std::vector<metrics::ClassAnalysis> classes;
    try {
      classes = metrics::analyze_source(read_file(base / rel));
    } catch (const Error& e) {
      spdlog::warn("skipping {}: {}", rel, e.what());
      ++result.skipped_files;
      continue;
    }
    const auto hit = histories.find(rel);
    const auto history = mining::history_features(hit == histories.end() ? empty : hit->second);
    for (const auto& c : classes) {
      ElementKey ck{project, head, rel, c.qualified_name, std::nullopt, std::nullopt};
      auto cv = mining::class_feature_vector(c.metrics, history);
      elements.push_back({ck, ElementLevel::Class, cv, cv});
      for (const auto& m : c.methods) {
        auto mk = ck;
        mk.method = m.signature;
        elements.push_back({mk, ElementLevel::Method, mining::method_feature_vector(c.metrics, m.metrics, nullptr),
                            mining::method_feature_vector(c.metrics, m.metrics, &history)});
        for (const auto& v : m.variables) {
          auto vk = mk;
          vk.variable = mining::variable_label(v);
          elements.push_back({vk, ElementLevel::Variable,
                              mining::variable_feature_vector(c.metrics, m.metrics, v.metrics, nullptr),
                              mining::variable_feature_vector(c.metrics, m.metrics, v.metrics, &history)});
        }
      }
    }
  }

  // refactoring -> per-element probability sums and model counts
  std::map<RefactoringType, std::pair<std::vector<double>, int>> sums;
  for (const auto& lm : models) {
    const auto level = lm.catalog->level();
    const bool adjuncts = lm.catalog->with_history_adjuncts() || level == ElementLevel::Class;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i].level == level) idx.push_back(i);
    }
    auto& [acc, count] = sums[lm.refactoring];
    acc.resize(elements.size(), 0.0);
    ++count;
    if (idx.empty()) continue;
    ml::Matrix X(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(lm.catalog->size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const auto& v = adjuncts ? elements[idx[r]].with_history : elements[idx[r]].source_only;
      if (v.size() != lm.catalog->size()) throw CatalogMismatch(lm.file.string() + ": feature count differs");
      for (std::size_t c = 0; c < v.size(); ++c) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
    }
    const auto p = lm.model.predict_proba(X);
    for (std::size_t r = 0; r < idx.size(); ++r) acc[idx[r]] += p(static_cast<Eigen::Index>(r));
  }

  for (const auto& [r, entry] : sums) {
    const auto& [acc, count] = entry;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i].level != level_of(r)) continue;
      result.items.push_back({elements[i].key, r, acc[i] / count});
    }
  }
  std::sort(result.items.begin(), result.items.end(), [](const RecommendationItem& a, const RecommendationItem& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    if (a.key != b.key) return a.key < b.key;
    return a.refactoring < b.refactoring;
  });
  if (result.items.size() > options.top_n) result.items.resize(options.top_n);
  return result;
}

void print_recommendations(std::ostream& out, const std::vector<RecommendationItem>& items) {
  for (const auto& it : items) {
    char prob[32];
    std::snprintf(prob, sizeof prob, "%.6f", it.probability);
    out << prob << '\t' << to_string(it.refactoring) << '\t' << to_string(level_of(it.refactoring)) << '\t'
        << it.key.file << '\t' << it.key.class_name << '\t' << it.key.method.value_or("") << '\t'
        << it.key.variable.value_or("") << '\n';
  }
}

}  // namespace refpred::cli
