#include "refpred/dataset/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "refpred/dataset/csv.hpp"
#include "refpred/error.hpp"

namespace refpred::dataset {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kLockFile = ".lock";
constexpr std::size_t kKeyColumns = 6;

class DirLock {
 public:
  DirLock(const fs::path& dir, bool exclusive) {
    fd_ = ::open((dir / kLockFile).c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IOFailure("cannot open lock file in " + dir.string());
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      throw IOFailure("cannot lock " + dir.string());
    }
  }
  ~DirLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  ::gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IOFailure("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const fs::path& p, const std::string& content) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IOFailure("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw IOFailure("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw IOFailure("cannot replace " + p.string() + ": " + ec.message());
}

std::vector<std::string> row_fields(const LabeledInstance& li) {
  std::vector<std::string> f;
  f.reserve(li.features.size() + 2 + kKeyColumns);
  for (double v : li.features) f.push_back(format_double(v));
  f.push_back(li.is_refactoring() ? "1" : "0");
  f.push_back(std::to_string(li.commit_timestamp));
  f.push_back(li.key.project);
  f.push_back(li.key.commit);
  f.push_back(li.key.file);
  f.push_back(li.key.class_name);
  f.push_back(li.key.method.value_or(""));
  f.push_back(li.key.variable.value_or(""));
  return f;
}

std::string unique_suffix() {
  static std::atomic<unsigned> counter{0};
  std::ostringstream ss;
  ss << ::getpid() << '-' << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '-' << counter++;
  return ss.str();
}

}  // namespace

std::int64_t DatasetManifest::count(ElementLevel level, std::optional<RefactoringType> label) const {
  const auto l = counts.find(std::string(to_string(level)));
  if (l == counts.end()) return 0;
  const auto c = l->second.find(label_class(label));
  return c == l->second.end() ? 0 : c->second;
}

std::string DatasetManifest::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["source"] = source;
  j["k"] = k;
  j["history_adjuncts"] = history_adjuncts;
  j["catalog_hashes"] = catalog_hashes;
  j["counts"] = counts;
  j["created"] = created;
  return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(std::string_view text) {
  DatasetManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.version = j.at("version").get<int>();
    m.source = j.at("source").get<std::string>();
    m.k = j.at("k").get<int>();
    m.history_adjuncts = j.at("history_adjuncts").get<bool>();
    m.catalog_hashes = j.at("catalog_hashes").get<std::map<std::string, std::string>>();
    m.counts = j.at("counts").get<std::map<std::string, std::map<std::string, std::int64_t>>>();
    m.created = j.at("created").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IOFailure(std::string("malformed dataset manifest: ") + e.what());
  }
  return m;
}

std::string label_class(std::optional<RefactoringType> r) {
  return r ? std::string(info(*r).slug) : std::string(kNoneLabel);
}

fs::path table_path(const fs::path& dir, ElementLevel level, std::optional<RefactoringType> label) {
  return dir / std::string(to_string(level)) / (label_class(label) + ".csv");
}

std::vector<std::string> csv_header(const FeatureCatalog& catalog) {
  auto h = catalog.names();
  for (const char* c : {"label", "timestamp", "project", "commit", "file", "class", "method", "variable"}) {
    h.emplace_back(c);
  }
  return h;
}

DatasetManifest read_manifest(const fs::path& dir) {
  const auto p = dir / kManifestFile;
  if (!fs::exists(p)) throw IOFailure("no dataset manifest in " + dir.string());
  return DatasetManifest::from_json(read_file(p));
}

std::size_t append_instances(const fs::path& dir, std::span<const LabeledInstance> instances,
                             const StoreOptions& options) {
  for (const auto& li : instances) {
    const auto& cat = catalog_for(li.level, options.history_adjuncts);
    if (li.features.size() != cat.size()) {
      throw CatalogMismatch("feature vector of length " + std::to_string(li.features.size()) + " for the " +
                            std::string(to_string(li.level)) + " catalog of " + std::to_string(cat.size()));
    }
    if (li.refactoring && level_of(*li.refactoring) != li.level) {
      throw CatalogMismatch(std::string(to_string(*li.refactoring)) + " row stored at level " +
                            std::string(to_string(li.level)));
    }
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IOFailure("cannot create " + dir.string() + ": " + ec.message());

  // 1. write private shards, one per (level, label class)
  std::map<fs::path, std::pair<fs::path, std::vector<const LabeledInstance*>>> groups;
  for (const auto& li : instances) {
    const auto target = table_path(dir, li.level, li.refactoring);
    groups[target].second.push_back(&li);
  }
  const auto suffix = unique_suffix();
  struct ShardCleanup {
    decltype(groups)& g;
    ~ShardCleanup() {
      std::error_code ignored;
      for (const auto& [t, grp] : g) {
        if (!grp.first.empty()) fs::remove(grp.first, ignored);
      }
    }
  } cleanup{groups};
  for (auto& [target, group] : groups) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IOFailure("cannot create " + target.parent_path().string());
    group.first = target.parent_path() / ("." + target.stem().string() + "." + suffix + ".shard");
    std::ofstream out(group.first, std::ios::binary | std::ios::trunc);
    if (!out) throw IOFailure("cannot write shard " + group.first.string());
    for (const auto* li : group.second) write_csv_row(out, row_fields(*li));
    if (!out.flush()) throw IOFailure("cannot write shard " + group.first.string());
  }

  // 2. merge under the directory lock
  DirLock lock(dir, true);
  DatasetManifest manifest;
  if (fs::exists(dir / kManifestFile)) {
    manifest = read_manifest(dir);
    if (manifest.history_adjuncts != options.history_adjuncts) {
      throw CatalogMismatch("dataset " + dir.string() + " was created " +
                            (manifest.history_adjuncts ? "with" : "without") + " history adjunct columns");
    }
  } else {
    manifest.source = options.source;
    manifest.k = options.k;
    manifest.history_adjuncts = options.history_adjuncts;
    manifest.created = utc_now();
  }
  for (auto level : kAllLevels) {
    const auto& cat = catalog_for(level, options.history_adjuncts);
    auto [it, inserted] = manifest.catalog_hashes.emplace(std::string(to_string(level)), cat.hash());
    if (!inserted && it->second != cat.hash()) {
      throw CatalogMismatch("dataset " + dir.string() + " uses catalog " + it->second + " for " +
                            std::string(to_string(level)) + ", expected " + cat.hash());
    }
  }

  std::size_t written = 0;
  for (const auto& [target, group] : groups) {
    const auto& first = *group.second.front();
    const bool fresh = !fs::exists(target);
    {
      std::ofstream out(target, std::ios::binary | std::ios::app);
      if (!out) throw IOFailure("cannot append to " + target.string());
      if (fresh) write_csv_row(out, csv_header(catalog_for(first.level, options.history_adjuncts)));
      std::ifstream shard(group.first, std::ios::binary);
      out << shard.rdbuf();
      if (!out.flush()) throw IOFailure("cannot append to " + target.string());
    }
    manifest.counts[std::string(to_string(first.level))][label_class(first.refactoring)] +=
        static_cast<std::int64_t>(group.second.size());
    written += group.second.size();
  }
  write_atomically(dir / kManifestFile, manifest.to_json());
  return written;
}

std::vector<LabeledInstance> load_instances(const fs::path& dir, ElementLevel level,
                                            std::optional<RefactoringType> label) {
  DirLock lock(dir, false);
  const auto manifest = read_manifest(dir);
  const auto& cat = catalog_for(level, manifest.history_adjuncts);
  if (const auto it = manifest.catalog_hashes.find(std::string(to_string(level)));
      it != manifest.catalog_hashes.end() && it->second != cat.hash()) {
    throw CatalogMismatch("dataset catalog " + it->second + " does not match " + cat.hash());
  }

  std::vector<LabeledInstance> out;
  const auto path = table_path(dir, level, label);
  if (!fs::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOFailure("cannot read " + path.string());

  const auto header = read_csv_row(in);
  if (!header || *header != csv_header(cat)) throw CatalogMismatch("unexpected columns in " + path.string());
  const std::size_t nf = cat.size();
  std::size_t line = 1;
  while (auto row = read_csv_row(in)) {
    ++line;
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != nf + 2 + kKeyColumns) {
      throw IOFailure(path.string() + ":" + std::to_string(line) + ": expected " +
                      std::to_string(nf + 2 + kKeyColumns) + " columns");
    }
    const auto& r = *row;
    LabeledInstance li;
    li.level = level;
    li.refactoring = label;
    li.features.reserve(nf);
    for (std::size_t i = 0; i < nf; ++i) li.features.push_back(parse_double(r[i]));
    li.commit_timestamp = std::stoll(r[nf + 1]);
    li.key.project = r[nf + 2];
    li.key.commit = r[nf + 3];
    li.key.file = r[nf + 4];
    li.key.class_name = r[nf + 5];
    if (!r[nf + 6].empty()) li.key.method = r[nf + 6];
    if (!r[nf + 7].empty()) li.key.variable = r[nf + 7];
    out.push_back(std::move(li));
  }
  return out;
}

std::size_t TrainingTable::positives() const {
  std::size_t n = 0;
  for (int l : labels) n += l == 1;
  return n;
}

TrainingTable build_training_table(const fs::path& dir, RefactoringType refactoring) {
  const auto level = level_of(refactoring);
  const auto manifest = read_manifest(dir);
  const auto positives = load_instances(dir, level, refactoring);
  if (positives.empty()) {
    throw EmptyClass(true, "no " + std::string(to_string(refactoring)) + " rows in " + dir.string());
  }
  const auto negatives = load_instances(dir, level, std::nullopt);
  if (negatives.empty()) {
    throw EmptyClass(false, "no non-refactoring " + std::string(to_string(level)) + " rows in " + dir.string());
  }

  const auto& cat = catalog_for(level, manifest.history_adjuncts);
  TrainingTable t;
  t.refactoring = refactoring;
  t.level = level;
  t.catalog_hash = cat.hash();
  t.feature_names = cat.names();
  for (const auto* side : {&positives, &negatives}) {
    for (const auto& li : *side) {
      t.features.push_back(li.features);
      t.labels.push_back(li.is_refactoring() ? 1 : 0);
      t.timestamps.push_back(li.commit_timestamp);
      t.keys.push_back(li.key);
    }
  }
  return t;
}

void write_training_table(const TrainingTable& table, const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IOFailure("cannot write " + file.string());
  auto header = table.feature_names;
  for (const char* c : {"label", "timestamp", "project", "commit", "file", "class", "method", "variable"}) {
    header.emplace_back(c);
  }
  write_csv_row(out, header);
  for (std::size_t i = 0; i < table.size(); ++i) {
    LabeledInstance li;
    li.key = table.keys[i];
    li.features = table.features[i];
    li.commit_timestamp = table.timestamps[i];
    if (table.labels[i] == 1) li.refactoring = table.refactoring;
    write_csv_row(out, row_fields(li));
  }
  if (!out.flush()) throw IOFailure("cannot write " + file.string());
}

}  // namespace refpred::dataset
