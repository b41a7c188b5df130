#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace refpred {

enum class ElementLevel { Class, Method, Variable };

std::string_view to_string(ElementLevel level);
ElementLevel level_from_string(std::string_view text);

inline constexpr ElementLevel kAllLevels[] = {ElementLevel::Class, ElementLevel::Method,
                                              ElementLevel::Variable};

// The twenty refactorings the models predict, grouped by the element they apply to.
enum class RefactoringType {
  // class level
  ExtractClass,
  ExtractInterface,
  ExtractSubclass,
  ExtractSuperclass,
  MoveAndRenameClass,
  MoveClass,
  RenameClass,
  // method level
  ExtractAndMoveMethod,
  ExtractMethod,
  InlineMethod,
  MoveMethod,
  PullUpMethod,
  PushDownMethod,
  RenameMethod,
  // variable level
  ExtractVariable,
  InlineVariable,
  ParameterizeVariable,
  RenameParameter,
  RenameVariable,
  ReplaceVariableWithAttribute,
};

struct RefactoringInfo {
  RefactoringType type;
  std::string_view name;  // display name, e.g. "Extract Class"
  std::string_view slug;  // file-system friendly, e.g. "extract_class"
  ElementLevel level;
};

std::span<const RefactoringInfo> canonical_taxonomy();
const RefactoringInfo& info(RefactoringType type);
inline std::string_view to_string(RefactoringType type) { return info(type).name; }
inline ElementLevel level_of(RefactoringType type) { return info(type).level; }

// Accepts either the display name (case-insensitive, whitespace-insensitive)
// or the slug. Throws UnknownRefactoringName.
RefactoringType refactoring_from_string(std::string_view text);

struct ElementKey {
  std::string project;
  std::string commit;
  std::string file;
  std::string class_name;  // fully qualified
  std::optional<std::string> method;
  std::optional<std::string> variable;

  ElementLevel level() const {
    if (variable) return ElementLevel::Variable;
    if (method) return ElementLevel::Method;
    return ElementLevel::Class;
  }

  // True when the optional parts agree with `level`.
  bool consistent_with(ElementLevel level) const;

  auto operator<=>(const ElementKey&) const = default;
  bool operator==(const ElementKey&) const = default;
};

enum class FeatureKind { Source, Process, Ownership };

std::string_view to_string(FeatureKind kind);

struct FeatureEntry {
  std::string name;
  ElementLevel level;  // level the metric is measured at
  FeatureKind kind;

  bool operator==(const FeatureEntry&) const = default;
};

// Ordered, hashed list of feature columns for one prediction level.
class FeatureCatalog {
 public:
  FeatureCatalog(ElementLevel level, bool with_history_adjuncts, std::vector<FeatureEntry> entries);

  ElementLevel level() const noexcept { return level_; }
  bool with_history_adjuncts() const noexcept { return with_history_adjuncts_; }
  std::span<const FeatureEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& hash() const noexcept { return hash_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  // Versioned JSON manifest listing the ordered entries and the hash.
  std::string manifest_json() const;

 private:
  ElementLevel level_;
  bool with_history_adjuncts_;
  std::vector<FeatureEntry> entries_;
  std::string hash_;
};

inline constexpr int kCatalogVersion = 1;

// Class level always carries process and ownership columns. Method and
// variable levels carry them only when `with_history_adjuncts` is set.
const FeatureCatalog& catalog_for(ElementLevel level, bool with_history_adjuncts = false);

// Finds the catalog (with or without adjuncts) whose hash matches.
const FeatureCatalog* catalog_by_hash(std::string_view hash);

// Column-name groups, in catalog order.
std::span<const std::string_view> class_source_feature_names();
std::span<const std::string_view> method_source_feature_names();
std::span<const std::string_view> process_feature_names();
std::span<const std::string_view> ownership_feature_names();
inline constexpr std::string_view kVariableUsageFeature = "variable_usage_count";

struct LabeledInstance {
  ElementKey key;
  ElementLevel level = ElementLevel::Class;
  std::optional<RefactoringType> refactoring;  // empty for non-refactoring rows
  std::vector<double> features;
  std::int64_t commit_timestamp = 0;

  bool is_refactoring() const noexcept { return refactoring.has_value(); }
};

std::string fnv1a_hex(std::string_view data);

}  // namespace refpred
