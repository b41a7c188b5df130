#include <sstream>

#include <gtest/gtest.h>

#include "refpred/error.hpp"
#include "refpred/mining/detections.hpp"
#include "refpred/mining/feature_assembly.hpp"
#include "refpred/mining/history_walker.hpp"
#include "refpred/mining/repository.hpp"

namespace refpred::mining {
namespace {

TEST(Detections, ParsesRecordsInFileOrder) {
  std::istringstream in(
      R"J({"commit":"c1","path":"src/A.java","level":"method","refactoring":"Extract Method","class":"p.A","method":"f(int)"})J"
      "\n\n"
      R"J({"commit":"c0","path":"src/B.java","level":"variable","refactoring":"rename_variable","class":"p.B","method":"g()","variable":"x#1"})J"
      "\n");
  const auto d = parse_detections(in);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].refactoring, RefactoringType::ExtractMethod);
  EXPECT_EQ(d[0].method, "f(int)");
  EXPECT_EQ(d[1].variable, "x#1");
  EXPECT_EQ(d[1].level, ElementLevel::Variable);
}

TEST(Detections, MalformedLineReportsItsNumber) {
  std::istringstream in(
      R"J({"commit":"c1","path":"A.java","level":"class","refactoring":"Move Class","class":"A"})J"
      "\n{not json\n");
  try {
    parse_detections(in);
    FAIL();
  } catch (const MalformedRecord& e) {
    EXPECT_EQ(e.line_no(), 2u);
  }
}

TEST(Detections, MissingFieldIsMalformed) {
  std::istringstream in(R"J({"commit":"c1","level":"class","refactoring":"Move Class","class":"A"})J");
  EXPECT_THROW(parse_detections(in), MalformedRecord);
}

TEST(Detections, UnknownOrMisplacedRefactoring) {
  std::istringstream unknown(R"J({"commit":"c","path":"A.java","level":"class","refactoring":"Split","class":"A"})J");
  EXPECT_THROW(parse_detections(unknown), UnknownRefactoringName);
  std::istringstream wrong_level(
      R"J({"commit":"c","path":"A.java","level":"class","refactoring":"Extract Method","class":"A"})J");
  EXPECT_THROW(parse_detections(wrong_level), UnknownRefactoringName);
}

TEST(Detections, JsonLineRoundTrip) {
  DetectionRecord r{"abc", "src/A.java", ElementLevel::Method, RefactoringType::InlineMethod, "p.A", "f()", {}};
  std::istringstream in(to_json_line(r) + "\n");
  EXPECT_EQ(parse_detections(in).front(), r);
}

TEST(Detections, OrderedByHistoryThenPath) {
  std::vector<DetectionRecord> d(3);
  d[0].commit = "late";
  d[0].path = "a";
  d[1].commit = "unknown";
  d[2].commit = "early";
  d[2].path = "z";
  const std::vector<std::string> history = {"early", "late"};
  order_detections(d, history);
  EXPECT_EQ(d[0].commit, "early");
  EXPECT_EQ(d[1].commit, "late");
  EXPECT_EQ(d[2].commit, "unknown");
}

TEST(TestFiles, PathAndNameRules) {
  EXPECT_TRUE(is_test_file("test/p/A.java"));
  EXPECT_TRUE(is_test_file("module/src/test/java/A.java"));
  EXPECT_TRUE(is_test_file("src/p/FooTest.java"));
  EXPECT_TRUE(is_test_file("src/p/FooTests.java"));
  EXPECT_TRUE(is_test_file("src/p/FooTestCase.java"));
  EXPECT_FALSE(is_test_file("src/p/Tester.java"));
  EXPECT_FALSE(is_test_file("src/tests/A.java"));
  EXPECT_FALSE(is_test_file("src/p/footest.java"));
}

const char* kA = "package p; class A { int f(int x) { int y = x; return y; } }";
const char* kA2 = "package p; class A { int f(int x) { int y = x + 1; return y; } }";

TEST(Walker, EmitsAtExactlyKAndResets) {
  MemoryRepository repo("demo");
  std::vector<std::string> c;
  c.push_back(repo.commit("a", 1, "one", {{"src/A.java", kA}}));
  c.push_back(repo.commit("a", 2, "two", {{"src/A.java", kA2}}));
  c.push_back(repo.commit("a", 3, "three", {{"src/A.java", kA}}));
  c.push_back(repo.commit("a", 4, "four", {{"src/A.java", kA2}}));
  WalkOptions o;
  o.k = 2;
  const auto r = walk_history(repo, {}, o);
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(r.events[0].key.commit, c[1]);
  EXPECT_EQ(r.events[1].key.commit, c[3]);
  EXPECT_EQ(r.events[0].key.project, "demo");
  EXPECT_EQ(r.events[1].history->commits.size(), 3u);
}

TEST(Walker, DetectionUsesParentSnapshotAndIgnoresTestFiles) {
  MemoryRepository repo;
  const auto c1 = repo.commit("a", 1, "one", {{"src/A.java", kA}, {"test/ATest.java", "class ATest {}"}});
  const auto c2 = repo.commit("a", 2, "two", {{"src/A.java", kA2}, {"test/ATest.java", "class ATest { }"}});
  std::vector<DetectionRecord> d = {
      {c2, "src/A.java", ElementLevel::Method, RefactoringType::ExtractMethod, "p.A", "f(int)", {}},
      {c2, "test/ATest.java", ElementLevel::Class, RefactoringType::RenameClass, "ATest", {}, {}},
      {c1, "src/A.java", ElementLevel::Class, RefactoringType::MoveClass, "p.A", {}, {}},
  };
  WalkOptions o;
  o.k = 1;
  const auto r = walk_history(repo, d, o);
  EXPECT_EQ(r.stats.test_file_detections, 1u);
  EXPECT_EQ(r.stats.discarded_snapshots, 1u);  // root-commit detection
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].kind, EventKind::Refactoring);
  EXPECT_EQ(r.events[0].snapshot_commit, c1);
  EXPECT_TRUE(r.events[0].history->commits.empty());
}

TEST(Walker, SlowCommitsLoseTheirEvents) {
  MemoryRepository repo;
  repo.commit("a", 1, "one", {{"src/A.java", kA}});
  WalkOptions o;
  o.k = 1;
  o.commit_timeout_seconds = -1.0;
  const auto r = walk_history(repo, {}, o);
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(r.stats.timed_out_commits, 1u);
}

TEST(Walker, RejectsNonPositiveK) {
  MemoryRepository repo;
  WalkOptions o;
  o.k = 0;
  EXPECT_THROW(walk_history(repo, {}, o), std::invalid_argument);
}

TEST(Assembly, DerivesMethodAndVariableRows) {
  MemoryRepository repo;
  const auto c1 = repo.commit("a", 1, "one", {{"src/A.java", kA}});
  const auto c2 = repo.commit("a", 2, "fix it", {{"src/A.java", kA2}});
  std::vector<DetectionRecord> d = {
      {c2, "src/A.java", ElementLevel::Variable, RefactoringType::RenameVariable, "p.A", "f(int)", "y"},
      {c2, "src/A.java", ElementLevel::Method, RefactoringType::ExtractMethod, "p.A", "nope()", {}},
  };
  WalkOptions o;
  o.k = 1;
  const auto walk = walk_history(repo, d, o);
  const auto r = assemble_instances(repo, walk.events);
  std::map<ElementLevel, int> levels;
  for (const auto& i : r.instances) {
    ++levels[i.level];
    EXPECT_EQ(i.features.size(), catalog_for(i.level).size());
  }
  // c1 yields class A, method f, variables x and y; c2 the rename detection.
  EXPECT_EQ(levels[ElementLevel::Class], 1);
  EXPECT_EQ(levels[ElementLevel::Method], 1);
  EXPECT_EQ(levels[ElementLevel::Variable], 3);
  EXPECT_EQ(r.stats.discarded, 1u);
}

TEST(GitLog, ParsesNumstatRecords) {
  std::string raw = "\x1e";
  raw += "abc\x1f\x1f" "100\x1f" "Al\x1f" "al@x\x1fmsg\n\x1f";
  raw += "\n3\t1\tsrc/A.java";
  raw.push_back('\0');
  const auto h = parse_git_log(raw);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].hash, "abc");
  EXPECT_FALSE(h[0].parent);
  EXPECT_EQ(h[0].timestamp, 100);
  ASSERT_EQ(h[0].changes.size(), 1u);
  EXPECT_EQ(h[0].changes[0].lines_added, 3);
  EXPECT_EQ(h[0].changes[0].lines_removed, 1);
}

TEST(GitRepository, MissingDirectoryIsUnreadable) {
  EXPECT_THROW(
      {
        GitRepository g("/nonexistent/refpred");
        g.history();
      },
      RepoUnreadable);
}

}  // namespace
}  // namespace refpred::mining
