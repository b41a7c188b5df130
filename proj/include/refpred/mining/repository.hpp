#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace refpred::mining {

struct FileChange {
  std::string path;
  std::optional<std::string> old_path;  // set when git paired a rename
  std::int64_t lines_added = 0;
  std::int64_t lines_removed = 0;
  bool binary = false;
};

struct CommitInfo {
  std::string hash;
  std::optional<std::string> parent;  // first parent
  std::int64_t timestamp = 0;         // committer time
  std::string author_name;
  std::string author_email;
  std::string message;
  std::vector<FileChange> changes;
};

// Read access to a linear (first-parent) history.
class Repository {
 public:
  virtual ~Repository() = default;

  virtual std::string name() const = 0;
  // Oldest commit first.
  virtual const std::vector<CommitInfo>& history() = 0;
  // Blob content, or nothing when the path does not exist at that commit.
  virtual std::optional<std::string> file_at(const std::string& commit, const std::string& path) = 0;
};

// Shells out to the git executable. Throws RepoUnreadable when `dir` is not a
// readable git work tree or the log cannot be produced.
class GitRepository final : public Repository {
 public:
  explicit GitRepository(std::filesystem::path dir);

  std::string name() const override;
  const std::vector<CommitInfo>& history() override;
  std::optional<std::string> file_at(const std::string& commit, const std::string& path) override;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::optional<std::vector<CommitInfo>> history_;
};

// Parses `git log -z --numstat` output produced with kLogFormat.
std::vector<CommitInfo> parse_git_log(std::string_view raw);
inline constexpr const char* kLogFormat = "%x1e%H%x1f%P%x1f%ct%x1f%an%x1f%ae%x1f%B%x1f";

// In-memory repository for tests and tools. Each commit stores the full tree.
class MemoryRepository final : public Repository {
 public:
  explicit MemoryRepository(std::string name = "memory") : name_(std::move(name)) {}

  // Records a commit whose tree is the previous tree with `writes` applied
  // (empty optional deletes the path) and `renames` (old -> new) performed
  // first. Line counts are derived from a line multiset difference. Returns
  // the generated hash.
  std::string commit(const std::string& author, std::int64_t timestamp, const std::string& message,
                     const std::map<std::string, std::optional<std::string>>& writes,
                     const std::map<std::string, std::string>& renames = {});

  std::string name() const override { return name_; }
  const std::vector<CommitInfo>& history() override { return commits_; }
  std::optional<std::string> file_at(const std::string& commit, const std::string& path) override;

 private:
  std::string name_;
  std::vector<CommitInfo> commits_;
  std::vector<std::map<std::string, std::string>> trees_;
};

// Runs a program with arguments (no shell) and returns its exit status and
// standard output.
struct ProcessResult {
  int status = -1;
  std::string out;
};
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace refpred::mining
