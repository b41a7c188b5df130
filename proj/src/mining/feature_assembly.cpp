#include "refpred/mining/feature_assembly.hpp"

#include <charconv>
#include <chrono>
#include <map>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"
#include "refpred/java/parser.hpp"

namespace refpred::mining {

std::vector<double> history_features(const FileHistory& h) {
  auto out = history::compute_process_stats(h.commits, h.detection_commits).values();
  const auto own = h.commits.empty() ? history::OwnershipStats{} : history::compute_ownership(h.commits);
  const auto ov = own.values();
  out.insert(out.end(), ov.begin(), ov.end());
  return out;
}

std::vector<double> class_feature_vector(const metrics::ClassMetrics& c, const std::vector<double>& history) {
  auto out = c.values();
  out.insert(out.end(), history.begin(), history.end());
  return out;
}

std::vector<double> method_feature_vector(const metrics::ClassMetrics& c, const metrics::MethodMetrics& m,
                                          const std::vector<double>* history) {
  auto out = c.values();
  const auto mv = m.values();
  out.insert(out.end(), mv.begin(), mv.end());
  if (history) out.insert(out.end(), history->begin(), history->end());
  return out;
}

std::vector<double> variable_feature_vector(const metrics::ClassMetrics& c, const metrics::MethodMetrics& m,
                                            const metrics::VariableMetrics& v, const std::vector<double>* history) {
  auto out = method_feature_vector(c, m, history);
  out.push_back(static_cast<double>(v.usage_count));
  return out;
}

std::string variable_label(const metrics::VariableDeclaration& v) {
  return v.ordinal == 0 ? v.name : v.name + "#" + std::to_string(v.ordinal);
}

std::pair<std::string, std::size_t> split_variable_label(std::string_view label) {
  const auto hash = label.rfind('#');
  if (hash == std::string_view::npos) return {std::string(label), 0};
  std::size_t ordinal = 0;
  const auto tail = label.substr(hash + 1);
  const auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), ordinal);
  if (ec != std::errc{} || p != tail.data() + tail.size()) return {std::string(label), 0};
  return {std::string(label.substr(0, hash)), ordinal};
}

namespace {

struct Snapshot {
  java::CompilationUnit unit;
  std::vector<metrics::ClassAnalysis> classes;
};

const metrics::ClassAnalysis& locate_class(const Snapshot& s, const std::string& name) {
  const auto handle = java::find_type(s.unit, name);
  for (const auto& c : s.classes) {
    if (c.qualified_name == handle.qualified_name) return c;
  }
  throw ClassNotFound("class '" + name + "' not analysed");
}

const metrics::MethodAnalysis& locate_method(const Snapshot& s, const metrics::ClassAnalysis& c,
                                             const std::string& class_name, const std::string& signature) {
  const auto handle = java::find_type(s.unit, class_name);
  const auto wanted = java::signature_of(java::find_method(*handle.decl, signature));
  for (const auto& m : c.methods) {
    if (m.signature == wanted) return m;
  }
  throw MethodNotFound("method '" + signature + "' not analysed");
}

const metrics::VariableDeclaration& locate_variable(const metrics::MethodAnalysis& m, const std::string& label) {
  const auto [name, ordinal] = split_variable_label(label);
  for (const auto& v : m.variables) {
    if (v.name == name && v.ordinal == ordinal) return v;
  }
  throw VariableNotFound("variable '" + label + "' not declared in " + m.signature);
}

class Assembler {
 public:
  Assembler(Repository& repo, const AssemblyOptions& options) : repo_(repo), options_(options) {}

  void run(const MiningEvent& e, std::vector<LabeledInstance>& out) {
    const Snapshot& snap = snapshot(e.snapshot_commit, e.snapshot_path);
    const auto hist = history_features(*e.history);
    const auto* adj = options_.history_adjuncts ? &hist : nullptr;
    const auto& cls = locate_class(snap, e.key.class_name);

    auto make = [&](ElementKey key, std::vector<double> features) {
      LabeledInstance li;
      li.level = key.level();
      li.key = std::move(key);
      li.refactoring = e.refactoring;
      li.features = std::move(features);
      li.commit_timestamp = e.commit_timestamp;
      out.push_back(std::move(li));
    };

    ElementKey base = e.key;
    base.class_name = cls.qualified_name;
    base.method.reset();
    base.variable.reset();

    if (e.kind == EventKind::Refactoring) {
      if (!e.key.method) {
        make(base, class_feature_vector(cls.metrics, hist));
        return;
      }
      const auto& m = locate_method(snap, cls, e.key.class_name, *e.key.method);
      ElementKey key = base;
      key.method = m.signature;
      if (!e.key.variable) {
        make(key, method_feature_vector(cls.metrics, m.metrics, adj));
        return;
      }
      const auto& v = locate_variable(m, *e.key.variable);
      key.variable = variable_label(v);
      make(key, variable_feature_vector(cls.metrics, m.metrics, v.metrics, adj));
      return;
    }

    make(base, class_feature_vector(cls.metrics, hist));
    if (!options_.derive_members) return;
    for (const auto& m : cls.methods) {
      ElementKey mk = base;
      mk.method = m.signature;
      make(mk, method_feature_vector(cls.metrics, m.metrics, adj));
      for (const auto& v : m.variables) {
        ElementKey vk = mk;
        vk.variable = variable_label(v);
        make(vk, variable_feature_vector(cls.metrics, m.metrics, v.metrics, adj));
      }
    }
  }

  void clear() { cache_.clear(); }

 private:
  const Snapshot& snapshot(const std::string& commit, const std::string& path) {
    const auto key = commit + ":" + path;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto content = repo_.file_at(commit, path);
    if (!content) throw ClassNotFound(path + " does not exist at " + commit);
    Snapshot s;
    s.unit = java::parse(*content);
    s.classes = metrics::analyze_unit(s.unit);
    return cache_.emplace(key, std::move(s)).first->second;
  }

  Repository& repo_;
  const AssemblyOptions& options_;
  std::map<std::string, Snapshot> cache_;
};

}  // namespace

AssemblyResult assemble_instances(Repository& repo, std::span<const MiningEvent> events,
                                  const AssemblyOptions& options) {
  AssemblyResult result;
  Assembler assembler(repo, options);

  std::size_t i = 0;
  while (i < events.size()) {
    // events arrive grouped by commit
    std::size_t j = i;
    while (j < events.size() && events[j].key.commit == events[i].key.commit) ++j;

    const auto started = std::chrono::steady_clock::now();
    std::vector<LabeledInstance> batch;
    std::size_t dropped = 0;
    for (std::size_t n = i; n < j; ++n) {
      const auto& e = events[n];
      try {
        assembler.run(e, batch);
      } catch (const Error& err) {
        spdlog::debug("dropping {} event for {} in {}: {}", to_string(e.kind), e.key.class_name, e.key.commit,
                      err.what());
        ++dropped;
      }
    }
    assembler.clear();

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    if (elapsed.count() > options.commit_timeout_seconds) {
      spdlog::warn("feature extraction for commit {} took {:.1f}s, skipping it", events[i].key.commit,
                   elapsed.count());
      ++result.stats.timed_out_commits;
      result.stats.discarded += j - i;
    } else {
      result.stats.discarded += dropped;
      for (auto& li : batch) result.instances.push_back(std::move(li));
    }
    i = j;
  }
  return result;
}

}  // namespace refpred::mining
