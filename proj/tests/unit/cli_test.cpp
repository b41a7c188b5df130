#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "refpred/cli/commands.hpp"
#include "refpred/cli/recommend.hpp"
#include "refpred/dataset/store.hpp"
#include "refpred/error.hpp"
#include "refpred/rng.hpp"
#include "support/fixtures.hpp"
#include "support/git_fixture.hpp"

namespace refpred::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  args.insert(args.begin(), {"--log-level", "off"});
  const int rc = run(args, out, err);
  return {rc, out.str(), err.str()};
}

// Method-level rows: 57 columns without history adjuncts, 66 with.
std::vector<LabeledInstance> method_rows(bool adjuncts, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledInstance> rows;
  const auto width = catalog_for(ElementLevel::Method, adjuncts).size();
  for (int i = 0; i < 24; ++i) {
    LabeledInstance r;
    r.level = ElementLevel::Method;
    r.key = {"proj", "c" + std::to_string(i), "src/A.java", "p.A", "m" + std::to_string(i) + "()", std::nullopt};
    if (i < 8) r.refactoring = RefactoringType::ExtractMethod;
    for (std::size_t j = 0; j < width; ++j) r.features.push_back(rng.uniform() + (i < 8 && j < 5 ? 1.0 : 0.0));
    r.commit_timestamp = i;
    rows.push_back(std::move(r));
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir = testing::scratch_dir("cli"); }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

TEST_F(CliTest, MissingInputsExitWithTwo) {
  EXPECT_EQ(cli({"train", "--dataset", (dir / "none").string(), "--out", (dir / "m").string()}).status,
            kExitMissingInput);
  EXPECT_EQ(cli({"recommend", "--models", (dir / "none").string(), "--repo", dir.string()}).status,
            kExitMissingInput);
  EXPECT_EQ(cli({"mine", "--repo", (dir / "none").string(), "--detections", (dir / "d.jsonl").string(), "--out",
                 (dir / "ds").string()})
                .status,
            kExitMissingInput);
}

TEST_F(CliTest, UsageErrorsAreNonZero) {
  EXPECT_NE(cli({}).status, kExitOk);
  EXPECT_NE(cli({"train"}).status, kExitOk);
  EXPECT_NE(cli({"frobnicate"}).status, kExitOk);
}

TEST_F(CliTest, CrossEvalOnOtherCatalogExitsWithThree) {
  dataset::StoreOptions plain, extra;
  extra.history_adjuncts = true;
  dataset::append_instances(dir / "a", method_rows(false, 1), plain);
  dataset::append_instances(dir / "b", method_rows(true, 2), extra);
  ASSERT_EQ(cli({"train", "--dataset", (dir / "a").string(), "--refactoring", "extract_method", "--algorithm", "lr",
                 "--iterations", "2", "--folds", "3", "--out", (dir / "m").string()})
                .status,
            kExitOk);
  const auto model = dir / "m" / model_file_name("extract_method", "lr");
  ASSERT_TRUE(fs::exists(model));
  const auto r = cli({"cross-eval", "--model", model.string(), "--dataset", (dir / "b").string()});
  EXPECT_EQ(r.status, kExitCatalogMismatch);
  EXPECT_NE(r.err.find("CatalogMismatch"), std::string::npos);
  EXPECT_EQ(cli({"cross-eval", "--model", model.string(), "--dataset", (dir / "a").string()}).status, kExitOk);
}

TEST_F(CliTest, ConfigFileSuppliesFlagsAndCommandLineWins) {
  dataset::append_instances(dir / "a", method_rows(false, 3));
  std::ofstream(dir / "run.cfg") << "# training setup\n"
                                 << "dataset = " << (dir / "a").string() << "\n"
                                 << "refactoring = extract_method\nalgorithm = dt\n"
                                 << "iterations = 2\nfolds = 3\nseed = 4\n"
                                 << "global-scaling = true\nout = " << (dir / "ignored").string() << "\n";
  const auto r = cli({"--config", (dir / "run.cfg").string(), "train", "--out", (dir / "m").string()});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "m" / report_file_name("extract_method", "dt")));
  EXPECT_FALSE(fs::exists(dir / "ignored"));

  std::ofstream(dir / "bad.cfg") << "no-such-flag = 1\n";
  EXPECT_EQ(cli({"--config", (dir / "bad.cfg").string(), "build", "--dataset", "x", "--out", "y"}).status,
            kExitFailure);
  EXPECT_EQ(cli({"--config", (dir / "absent.cfg").string(), "build", "--dataset", "x", "--out", "y"}).status,
            kExitMissingInput);
}

TEST_F(CliTest, RecommendTopZeroAndUnparsableFile) {
  dataset::append_instances(dir / "a", testing::synthetic_class_instances(10, 20, RefactoringType::ExtractClass, 5));
  ASSERT_EQ(cli({"train", "--dataset", (dir / "a").string(), "--refactoring", "extract_class", "--algorithm", "lr",
                 "--iterations", "2", "--folds", "3", "--out", (dir / "m").string()})
                .status,
            kExitOk);
  fs::create_directories(dir / "src");
  std::ofstream(dir / "src" / "Broken.java") << "class Broken { void f( }";

  const auto models = load_models(dir / "m");
  ASSERT_EQ(models.size(), 1u);
  const auto res = recommend(models, dir / "src");
  EXPECT_EQ(res.files, 1u);
  EXPECT_EQ(res.skipped_files, 1u);
  EXPECT_TRUE(res.items.empty());
  EXPECT_FALSE(res.history_available);

  std::ofstream(dir / "src" / "Ok.java") << "package q; class Ok { int a; int get() { return a; } }";
  const auto zero = cli({"recommend", "--models", (dir / "m").string(), "--repo", (dir / "src").string(), "--top", "0"});
  EXPECT_EQ(zero.status, kExitOk);
  EXPECT_EQ(zero.out, "");
  const auto one = cli({"recommend", "--models", (dir / "m").string(), "--repo", (dir / "src").string()});
  EXPECT_EQ(one.status, kExitOk);
  EXPECT_NE(one.out.find("Extract Class\tclass\tOk.java\tq.Ok"), std::string::npos) << one.out;
}

TEST_F(CliTest, ImportanceWritesPerLevelTables) {
  dataset::append_instances(dir / "a", testing::synthetic_class_instances(10, 20, RefactoringType::ExtractClass, 6));
  ASSERT_EQ(cli({"train", "--dataset", (dir / "a").string(), "--refactoring", "extract_class", "--algorithm",
                 "lr,nb,rf", "--iterations", "2", "--folds", "3", "--out", (dir / "m").string()})
                .status,
            kExitOk);
  const auto r = cli({"importance", "--models", (dir / "m").string(), "--out", (dir / "imp").string()});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  std::ifstream in(dir / "imp" / "class_importance.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "feature,top1,top5,top10");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 46u);
}

TEST_F(CliTest, MineReplacesUnlessAppending) {
  const auto fx = testing::build_end_to_end_fixture(dir / "e2e");
  const auto ds = (dir / "ds").string();
  const std::vector<std::string> mine = {"mine", "--repo", fx.repo.string(), "--detections",
                                         fx.detections_file.string(), "--k", "2", "--out", ds};
  ASSERT_EQ(cli(mine).status, kExitOk);
  const auto once = dataset::read_manifest(ds).count(ElementLevel::Class, std::nullopt);
  EXPECT_GT(once, 0);
  ASSERT_EQ(cli(mine).status, kExitOk);
  EXPECT_EQ(dataset::read_manifest(ds).count(ElementLevel::Class, std::nullopt), once);
  auto append = mine;
  append.push_back("--append");
  ASSERT_EQ(cli(append).status, kExitOk);
  EXPECT_EQ(dataset::read_manifest(ds).count(ElementLevel::Class, std::nullopt), 2 * once);
}

}  // namespace
}  // namespace refpred::cli
