#include "refpred/mining/history_walker.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"
#include "refpred/java/parser.hpp"

namespace refpred::mining {

bool is_test_file(std::string_view path) {
  if (path.starts_with("test/") || path.find("/test/") != std::string_view::npos) return true;
  auto name = path.substr(path.rfind('/') == std::string_view::npos ? 0 : path.rfind('/') + 1);
  if (const auto dot = name.rfind('.'); dot != std::string_view::npos) name = name.substr(0, dot);
  return name.ends_with("Test") || name.ends_with("Tests") || name.ends_with("TestCase");
}

std::string_view to_string(EventKind kind) {
  return kind == EventKind::Refactoring ? "REFACTORING" : "NON_REFACTORING";
}

namespace {

bool tracked(std::string_view path) { return path.ends_with(".java") && !is_test_file(path); }

// Per-file state carried across renames.
struct Lineage {
  std::vector<std::size_t> commit_index;  // positions in the history
  std::vector<history::CommitRecord> commits;
  std::vector<std::string> detection_commits;
  int streak = 0;
};

// Records strictly before history position `limit`.
std::shared_ptr<const FileHistory> history_before(const Lineage& l, std::size_t limit) {
  auto h = std::make_shared<FileHistory>();
  for (std::size_t i = 0; i < l.commits.size() && l.commit_index[i] < limit; ++i) h->commits.push_back(l.commits[i]);
  h->detection_commits = l.detection_commits;
  return h;
}

class CommitLookup {
 public:
  explicit CommitLookup(const std::vector<CommitInfo>& history) : history_(history) {
    for (std::size_t i = 0; i < history.size(); ++i) index_.emplace(history[i].hash, i);
  }

  // Exact hash, else a unique abbreviation of at least 7 characters.
  std::optional<std::size_t> find(const std::string& hash) const {
    if (auto it = index_.find(hash); it != index_.end()) return it->second;
    if (hash.size() < 7) return std::nullopt;
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < history_.size(); ++i) {
      if (history_[i].hash.starts_with(hash)) {
        if (hit) return std::nullopt;
        hit = i;
      }
    }
    return hit;
  }

 private:
  const std::vector<CommitInfo>& history_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

WalkResult walk_history(Repository& repo, std::span<const DetectionRecord> detections, const WalkOptions& options) {
  if (options.k < 1) throw std::invalid_argument("k must be at least 1");
  const auto& commits = repo.history();
  const std::string project = options.project.empty() ? repo.name() : options.project;

  WalkResult result;
  result.stats.commits = commits.size();

  // detections grouped by commit position, keeping their relative order
  const CommitLookup lookup(commits);
  std::vector<std::vector<const DetectionRecord*>> by_commit(commits.size());
  for (const auto& d : detections) {
    const auto pos = lookup.find(d.commit);
    if (!pos) {
      spdlog::warn("detection for {} in unknown commit {} ignored", d.path, d.commit);
      ++result.stats.unmatched_detections;
      continue;
    }
    by_commit[*pos].push_back(&d);
  }
  for (auto& group : by_commit) {
    std::stable_sort(group.begin(), group.end(),
                     [](const DetectionRecord* a, const DetectionRecord* b) { return a->path < b->path; });
  }

  std::map<std::string, Lineage> files;
  for (std::size_t idx = 0; idx < commits.size(); ++idx) {
    const auto& commit = commits[idx];
    const auto started = std::chrono::steady_clock::now();
    std::vector<MiningEvent> emitted;

    std::map<std::string, std::string> renamed_from;
    for (const auto& ch : commit.changes) {
      if (!ch.old_path) continue;
      renamed_from[ch.path] = *ch.old_path;
      auto node = files.extract(*ch.old_path);
      if (!node.empty()) {
        node.key() = ch.path;
        files.insert(std::move(node));
      }
    }

    // refactoring events; their history excludes the parent and later commits
    std::map<std::string, bool> detected;
    for (const auto* d : by_commit[idx]) {
      if (is_test_file(d->path)) {
        ++result.stats.test_file_detections;
        continue;
      }
      detected[d->path] = true;
      auto& lineage = files[d->path];
      if (!commit.parent || idx == 0) {
        spdlog::warn("detection on {} in root commit {} has no parent snapshot", d->path, commit.hash);
        ++result.stats.discarded_snapshots;
        continue;
      }
      MiningEvent e;
      e.kind = EventKind::Refactoring;
      e.key = ElementKey{project, commit.hash, d->path, d->class_name, d->method, d->variable};
      e.refactoring = d->refactoring;
      e.snapshot_commit = *commit.parent;
      const auto rn = renamed_from.find(d->path);
      e.snapshot_path = rn == renamed_from.end() ? d->path : rn->second;
      e.commit_timestamp = commit.timestamp;
      e.history = history_before(lineage, idx - 1);
      emitted.push_back(std::move(e));
    }
    for (const auto& [path, _] : detected) {
      auto& lineage = files[path];
      lineage.streak = 0;
      for (const auto* d : by_commit[idx]) {
        if (d->path == path) lineage.detection_commits.push_back(commit.hash);
      }
    }

    for (const auto& ch : commit.changes) {
      if (!tracked(ch.path)) continue;
      auto& lineage = files[ch.path];
      history::CommitRecord rec;
      rec.hash = commit.hash;
      rec.timestamp = commit.timestamp;
      rec.author_id = history::normalize_author(commit.author_name, commit.author_email);
      rec.message = commit.message;
      rec.deltas.push_back({ch.path, ch.lines_added, ch.lines_removed});
      lineage.commit_index.push_back(idx);
      lineage.commits.push_back(std::move(rec));

      if (detected.count(ch.path)) continue;
      if (++lineage.streak < options.k) continue;
      lineage.streak = 0;

      const auto content = repo.file_at(commit.hash, ch.path);
      if (!content) {
        spdlog::debug("{} no longer exists at {}", ch.path, commit.hash);
        ++result.stats.discarded_snapshots;
        continue;
      }
      std::vector<java::TypeHandle> types;
      java::CompilationUnit unit;
      try {
        unit = java::parse(*content);
        types = java::list_types(unit);
      } catch (const ParseError& err) {
        spdlog::warn("cannot parse {} at {}: {}", ch.path, commit.hash, err.what());
        ++result.stats.discarded_snapshots;
        continue;
      }
      auto shared = history_before(lineage, idx);  // excludes this commit
      for (const auto& t : types) {
        MiningEvent e;
        e.kind = EventKind::NonRefactoring;
        e.key = ElementKey{project, commit.hash, ch.path, t.qualified_name, std::nullopt, std::nullopt};
        e.snapshot_commit = commit.hash;
        e.snapshot_path = ch.path;
        e.commit_timestamp = commit.timestamp;
        e.history = shared;
        emitted.push_back(std::move(e));
      }
    }

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    if (elapsed.count() > options.commit_timeout_seconds) {
      spdlog::warn("commit {} took {:.1f}s, skipping its {} events", commit.hash, elapsed.count(), emitted.size());
      ++result.stats.timed_out_commits;
      continue;
    }
    for (auto& e : emitted) result.events.push_back(std::move(e));
  }
  return result;
}

}  // namespace refpred::mining
