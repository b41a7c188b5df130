#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refpred/domain.hpp"
#include "refpred/history/process_metrics.hpp"
#include "refpred/mining/detections.hpp"
#include "refpred/mining/repository.hpp"

namespace refpred::mining {

inline constexpr int kDefaultK = 50;
inline constexpr double kDefaultCommitTimeoutSeconds = 20.0;

// Path segment "/test/" (or a leading "test/"), or a file stem ending in
// Test, Tests or TestCase. Case-sensitive.
bool is_test_file(std::string_view path);

enum class EventKind { Refactoring, NonRefactoring };

std::string_view to_string(EventKind kind);

// Commits that touched one file (following renames), each restricted to that
// file's line counts, plus the commits of detections on it.
struct FileHistory {
  std::vector<history::CommitRecord> commits;
  std::vector<std::string> detection_commits;
};

struct MiningEvent {
  EventKind kind = EventKind::Refactoring;
  // commit: the detection commit, or the commit that completed the clean
  // streak; file: the path at that commit. Non-refactoring events are class
  // keys; the assembler derives method and variable rows from them.
  ElementKey key;
  std::optional<RefactoringType> refactoring;
  std::string snapshot_commit;  // version whose metrics are collected
  std::string snapshot_path;    // path of the file at snapshot_commit
  std::int64_t commit_timestamp = 0;
  // History strictly before the snapshot commit. Shared between the events of
  // one file and commit.
  std::shared_ptr<const FileHistory> history;
};

struct WalkOptions {
  int k = kDefaultK;
  double commit_timeout_seconds = kDefaultCommitTimeoutSeconds;
  std::string project;  // defaults to the repository name
};

struct WalkStats {
  std::size_t commits = 0;
  std::size_t timed_out_commits = 0;
  std::size_t unmatched_detections = 0;  // commit not in the first-parent history
  std::size_t test_file_detections = 0;
  std::size_t discarded_snapshots = 0;  // missing or unparsable file content
};

struct WalkResult {
  std::vector<MiningEvent> events;
  WalkStats stats;
};

// Replays the first-parent history oldest first. A detection emits a
// refactoring event whose snapshot is the parent commit and resets the file's
// streak. A modification without detection increments the streak; reaching
// exactly k emits one non-refactoring event per class declared in the file at
// that commit and resets the streak. Only production .java files are tracked.
// Commits whose processing exceeds the timeout lose their events (logged).
// Throws RepoUnreadable; std::invalid_argument when k < 1.
WalkResult walk_history(Repository& repo, std::span<const DetectionRecord> detections, const WalkOptions& options = {});

}  // namespace refpred::mining
