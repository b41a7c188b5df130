#include <set>

#include <gtest/gtest.h>

#include "refpred/domain.hpp"
#include "refpred/error.hpp"

namespace refpred {
namespace {

TEST(Taxonomy, HasTwentyRefactoringsSplitOverThreeLevels) {
  const auto all = canonical_taxonomy();
  ASSERT_EQ(all.size(), 20u);
  std::map<ElementLevel, int> per_level;
  std::set<std::string_view> slugs;
  for (const auto& r : all) {
    ++per_level[r.level];
    slugs.insert(r.slug);
  }
  EXPECT_EQ(per_level[ElementLevel::Class], 7);
  EXPECT_EQ(per_level[ElementLevel::Method], 7);
  EXPECT_EQ(per_level[ElementLevel::Variable], 6);
  EXPECT_EQ(slugs.size(), 20u);
}

TEST(Taxonomy, NamesAndSlugsRoundTrip) {
  for (const auto& r : canonical_taxonomy()) {
    EXPECT_EQ(refactoring_from_string(r.name), r.type);
    EXPECT_EQ(refactoring_from_string(r.slug), r.type);
  }
  EXPECT_EQ(refactoring_from_string("extract   method"), RefactoringType::ExtractMethod);
  EXPECT_EQ(refactoring_from_string("RENAME CLASS"), RefactoringType::RenameClass);
  EXPECT_THROW(refactoring_from_string("Split Package"), UnknownRefactoringName);
}

TEST(Levels, SerializeAsLowerCaseWords) {
  for (auto l : kAllLevels) EXPECT_EQ(level_from_string(to_string(l)), l);
  EXPECT_EQ(to_string(ElementLevel::Variable), "variable");
}

TEST(ElementKey, LevelFollowsOptionalParts) {
  ElementKey k{"p", "c", "f", "a.B", std::nullopt, std::nullopt};
  EXPECT_EQ(k.level(), ElementLevel::Class);
  k.method = "m()";
  EXPECT_EQ(k.level(), ElementLevel::Method);
  EXPECT_TRUE(k.consistent_with(ElementLevel::Method));
  EXPECT_FALSE(k.consistent_with(ElementLevel::Class));
  k.variable = "x";
  EXPECT_EQ(k.level(), ElementLevel::Variable);
}

TEST(Catalog, SizesPerLevel) {
  EXPECT_EQ(catalog_for(ElementLevel::Class).size(), 46u);
  EXPECT_EQ(catalog_for(ElementLevel::Method).size(), 57u);
  EXPECT_EQ(catalog_for(ElementLevel::Method, true).size(), 66u);
  EXPECT_EQ(catalog_for(ElementLevel::Variable).size(), 58u);
  EXPECT_EQ(catalog_for(ElementLevel::Variable, true).size(), 67u);
  EXPECT_EQ(class_source_feature_names().size(), 37u);
  EXPECT_EQ(method_source_feature_names().size(), 20u);
  EXPECT_EQ(process_feature_names().size(), 5u);
  EXPECT_EQ(ownership_feature_names().size(), 4u);
}

TEST(Catalog, HashesAreDistinctAndResolvable) {
  std::set<std::string> hashes;
  for (auto l : kAllLevels) {
    for (bool adj : {false, true}) {
      const auto& c = catalog_for(l, adj);
      hashes.insert(c.hash());
      EXPECT_EQ(catalog_by_hash(c.hash()), &catalog_for(l, l == ElementLevel::Class ? false : adj));
    }
  }
  EXPECT_EQ(hashes.size(), 5u);  // class has a single catalog
  EXPECT_EQ(catalog_by_hash("nope"), nullptr);
}

TEST(Catalog, VariableCatalogEndsWithUsage) {
  const auto names = catalog_for(ElementLevel::Variable).names();
  EXPECT_EQ(names.back(), kVariableUsageFeature);
  EXPECT_EQ(catalog_for(ElementLevel::Variable).index_of("class_cbo"), 0u);
  EXPECT_FALSE(catalog_for(ElementLevel::Method).index_of("variable_usage_count"));
}

TEST(Fnv, KnownValue) { EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325"); }

}  // namespace
}  // namespace refpred
