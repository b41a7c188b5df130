#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace refpred::history {

struct LineDelta {
  std::string path;
  std::int64_t lines_added = 0;
  std::int64_t lines_removed = 0;
};

struct CommitRecord {
  std::string hash;
  std::int64_t timestamp = 0;  // seconds since epoch
  std::string author_id;       // see normalize_author
  std::string message;
  std::vector<LineDelta> deltas;
};

// Lower-cased e-mail; the name when no e-mail is recorded.
std::string normalize_author(std::string_view name, std::string_view email);

inline constexpr std::string_view kBugFixKeywords[] = {"bug", "error", "mistake", "fault", "wrong", "fail", "fix"};

// Case-insensitive substring match against the keyword list.
bool is_bug_fix_message(std::string_view message);

struct ProcessStats {
  std::int64_t commit_count = 0;
  std::int64_t lines_added = 0;
  std::int64_t lines_removed = 0;
  std::int64_t bug_fix_count = 0;
  std::int64_t previous_refactoring_count = 0;

  std::vector<double> values() const;
  bool operator==(const ProcessStats&) const = default;
};

struct OwnershipStats {
  std::int64_t author_count = 0;
  std::int64_t minor_author_count = 0;
  std::int64_t major_author_count = 0;
  double author_ownership = 0.0;

  std::vector<double> values() const;
  bool operator==(const OwnershipStats&) const = default;
};

// Contributors below this commit share are minor; at or above it, major.
inline constexpr std::int64_t kMinorShareDenominator = 20;  // 5%

// `history` holds the commits that touched one file, oldest first, each
// restricted to that file's line deltas. `detection_commits` lists the commit
// of every refactoring detected on the file; those found in `history` count as
// previous refactorings. Throws UnorderedHistory when timestamps decrease.
ProcessStats compute_process_stats(std::span<const CommitRecord> history,
                                   std::span<const std::string> detection_commits = {});

// Throws EmptyHistory.
OwnershipStats compute_ownership(std::span<const CommitRecord> history);

}  // namespace refpred::history
