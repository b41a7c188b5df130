#include <gtest/gtest.h>

#include "refpred/error.hpp"
#include "refpred/java/parser.hpp"
#include "refpred/metrics/code_metrics.hpp"
#include "refpred/mining/feature_assembly.hpp"
#include "support/metric_oracle.hpp"

namespace refpred {
namespace {

namespace fs = std::filesystem;

class OracleFixture : public ::testing::TestWithParam<fs::path> {};

TEST_P(OracleFixture, MatchesHandCountedValues) {
  auto oracle = GetParam();
  oracle.replace_extension(".oracle");
  const auto problems = testing::check_metric_oracle(GetParam(), oracle);
  for (const auto& p : problems) ADD_FAILURE() << p;
}

INSTANTIATE_TEST_SUITE_P(Java, OracleFixture,
                         ::testing::ValuesIn(testing::oracle_fixtures(REFPRED_FIXTURE_DIR "/java")),
                         [](const auto& info) { return info.param.stem().string(); });

TEST(Parser, ReportsPositionOfFirstBadToken) {
  try {
    java::parse("class A {\n  void f( {\n}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Parser, FindsTypesBySuffix) {
  const auto unit = java::parse("package a.b; class Outer { static class Inner {} }");
  EXPECT_EQ(java::find_type(unit, "Inner").qualified_name, "a.b.Outer.Inner");
  EXPECT_EQ(java::find_type(unit, "Outer.Inner").qualified_name, "a.b.Outer.Inner");
  EXPECT_THROW(java::find_type(unit, "Missing"), ClassNotFound);
}

TEST(Parser, SignaturesKeepWrittenTypes) {
  const auto unit = java::parse("class A { void f(java.util.Map<String, int[]> m, String... rest) {} }");
  const auto t = java::find_type(unit, "A");
  const auto methods = java::methods_of(*t.decl);
  ASSERT_EQ(methods.size(), 1u);
  EXPECT_EQ(java::signature_of(*methods[0]), "f(java.util.Map<String,int[]>,String...)");
  EXPECT_THROW(java::find_method(*t.decl, "g()"), MethodNotFound);
}

TEST(Metrics, MethodLookupFallsBackToUniqueName) {
  const std::string src = "class A { int f(int x) { return x + 1; } }";
  const auto m = metrics::extract_method_metrics(src, "A", "f");
  EXPECT_EQ(m.parameters, 1);
  EXPECT_EQ(m.body.returns, 1);
  EXPECT_EQ(m.body.math_operations, 1);
}

TEST(Metrics, ShadowedVariablesAreAddressedByOrdinal) {
  const std::string src =
      "class A { void f() { { int i = 0; i++; i++; } { int i = 1; i++; } } }";
  EXPECT_EQ(metrics::extract_variable_usage(src, "A", "f()", "i", 0).usage_count, 2);
  EXPECT_EQ(metrics::extract_variable_usage(src, "A", "f()", "i", 1).usage_count, 1);
  EXPECT_THROW(metrics::extract_variable_usage(src, "A", "f()", "i", 2), VariableNotFound);
  EXPECT_THROW(metrics::extract_variable_usage(src, "A", "f()", "j"), VariableNotFound);
}

TEST(Metrics, VariableLabels) {
  metrics::VariableDeclaration v;
  v.name = "i";
  EXPECT_EQ(mining::variable_label(v), "i");
  v.ordinal = 2;
  EXPECT_EQ(mining::variable_label(v), "i#2");
  EXPECT_EQ(mining::split_variable_label("i#2"), (std::pair<std::string, std::size_t>{"i", 2}));
  EXPECT_EQ(mining::split_variable_label("count"), (std::pair<std::string, std::size_t>{"count", 0}));
}

TEST(Metrics, FeatureVectorsMatchCatalogs) {
  const std::string src = "class A { int n; int f(int x) { int y = x; return y; } }";
  const auto c = metrics::extract_class_metrics(src, "A");
  const auto m = metrics::extract_method_metrics(src, "A", "f(int)");
  const auto v = metrics::extract_variable_usage(src, "A", "f(int)", "y");
  const std::vector<double> hist(9, 1.0);
  EXPECT_EQ(mining::class_feature_vector(c, hist).size(), catalog_for(ElementLevel::Class).size());
  EXPECT_EQ(mining::method_feature_vector(c, m, nullptr).size(), 57u);
  EXPECT_EQ(mining::method_feature_vector(c, m, &hist).size(), 66u);
  EXPECT_EQ(mining::variable_feature_vector(c, m, v, nullptr).size(), 58u);
  EXPECT_EQ(mining::variable_feature_vector(c, m, v, &hist).size(), 67u);
  EXPECT_EQ(mining::variable_feature_vector(c, m, v, nullptr).back(), 1.0);
}

TEST(Metrics, AnalyzeSourceListsEveryNamedClass) {
  const auto classes = metrics::analyze_source(
      "package p; class A { void f() { class L {} Runnable r = new Runnable() { public void run() {} }; } "
      "static class B { void g(int a) {} } }");
  std::vector<std::string> names;
  for (const auto& c : classes) names.push_back(c.qualified_name);
  EXPECT_EQ(names, (std::vector<std::string>{"p.A", "p.A.L", "p.A.B"}));  // source order
}

}  // namespace
}  // namespace refpred
