#include <gtest/gtest.h>

#include "refpred/error.hpp"
#include "refpred/history/process_metrics.hpp"

namespace refpred::history {
namespace {

CommitRecord rec(std::string hash, std::int64_t t, std::string author, std::string msg, std::int64_t add,
                 std::int64_t del) {
  return {std::move(hash), t, std::move(author), std::move(msg), {{"F.java", add, del}}};
}

TEST(Authors, NormalizedByEmail) {
  EXPECT_EQ(normalize_author("Alice", "Alice@Example.ORG"), "alice@example.org");
  EXPECT_EQ(normalize_author("Alice", ""), "Alice");
}

TEST(Authors, BugFixKeywords) {
  EXPECT_TRUE(is_bug_fix_message("Fixes #12"));
  EXPECT_TRUE(is_bug_fix_message("handle ERROR path"));
  EXPECT_TRUE(is_bug_fix_message("prefix handling"));  // substring match
  EXPECT_FALSE(is_bug_fix_message("add feature"));
}

TEST(Process, CountsOverHistory) {
  const std::vector<CommitRecord> h = {rec("a", 1, "x", "init", 10, 0), rec("b", 2, "y", "fix bug", 3, 2),
                                       rec("c", 3, "x", "tidy", 1, 4)};
  const std::vector<std::string> detections = {"b", "zzz"};
  const auto s = compute_process_stats(h, detections);
  EXPECT_EQ(s.commit_count, 3);
  EXPECT_EQ(s.lines_added, 14);
  EXPECT_EQ(s.lines_removed, 6);
  EXPECT_EQ(s.bug_fix_count, 1);
  EXPECT_EQ(s.previous_refactoring_count, 1);
  EXPECT_EQ(s.values().size(), 5u);
}

TEST(Process, EmptyHistoryIsAllZero) {
  EXPECT_EQ(compute_process_stats({}), ProcessStats{});
  EXPECT_THROW(compute_ownership({}), EmptyHistory);
}

TEST(Process, DecreasingTimestampsRejected) {
  const std::vector<CommitRecord> h = {rec("a", 5, "x", "", 1, 0), rec("b", 4, "x", "", 1, 0)};
  EXPECT_THROW(compute_process_stats(h), UnorderedHistory);
}

TEST(Ownership, MinorAndMajorByCommitShare) {
  // 20 commits by x and one by y: y holds 1/21 < 5%.
  std::vector<CommitRecord> h;
  for (int i = 0; i < 20; ++i) h.push_back(rec("c" + std::to_string(i), i, "x", "", 1, 0));
  h.push_back(rec("last", 100, "y", "", 1, 0));
  const auto o = compute_ownership(h);
  EXPECT_EQ(o.author_count, 2);
  EXPECT_EQ(o.minor_author_count, 1);
  EXPECT_EQ(o.major_author_count, 1);
  EXPECT_DOUBLE_EQ(o.author_ownership, 20.0 / 21.0);
}

TEST(Ownership, ExactlyFivePercentIsMajor) {
  std::vector<CommitRecord> h;
  for (int i = 0; i < 19; ++i) h.push_back(rec("c" + std::to_string(i), i, "x", "", 1, 0));
  h.push_back(rec("last", 100, "y", "", 1, 0));
  const auto o = compute_ownership(h);
  EXPECT_EQ(o.minor_author_count, 0);
  EXPECT_EQ(o.major_author_count, 2);
}

}  // namespace
}  // namespace refpred::history
