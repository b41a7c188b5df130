#include "refpred/domain.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include <json.hpp>

#include "refpred/error.hpp"

namespace refpred {

namespace {

using RT = RefactoringType;
using EL = ElementLevel;

constexpr std::array<RefactoringInfo, 20> kTaxonomy{{
    {RT::ExtractClass, "Extract Class", "extract_class", EL::Class},
    {RT::ExtractInterface, "Extract Interface", "extract_interface", EL::Class},
    {RT::ExtractSubclass, "Extract Subclass", "extract_subclass", EL::Class},
    {RT::ExtractSuperclass, "Extract Superclass", "extract_superclass", EL::Class},
    {RT::MoveAndRenameClass, "Move And Rename Class", "move_and_rename_class", EL::Class},
    {RT::MoveClass, "Move Class", "move_class", EL::Class},
    {RT::RenameClass, "Rename Class", "rename_class", EL::Class},
    {RT::ExtractAndMoveMethod, "Extract And Move Method", "extract_and_move_method", EL::Method},
    {RT::ExtractMethod, "Extract Method", "extract_method", EL::Method},
    {RT::InlineMethod, "Inline Method", "inline_method", EL::Method},
    {RT::MoveMethod, "Move Method", "move_method", EL::Method},
    {RT::PullUpMethod, "Pull Up Method", "pull_up_method", EL::Method},
    {RT::PushDownMethod, "Push Down Method", "push_down_method", EL::Method},
    {RT::RenameMethod, "Rename Method", "rename_method", EL::Method},
    {RT::ExtractVariable, "Extract Variable", "extract_variable", EL::Variable},
    {RT::InlineVariable, "Inline Variable", "inline_variable", EL::Variable},
    {RT::ParameterizeVariable, "Parameterize Variable", "parameterize_variable", EL::Variable},
    {RT::RenameParameter, "Rename Parameter", "rename_parameter", EL::Variable},
    {RT::RenameVariable, "Rename Variable", "rename_variable", EL::Variable},
    {RT::ReplaceVariableWithAttribute, "Replace Variable With Attribute",
     "replace_variable_with_attribute", EL::Variable},
}};

constexpr std::string_view kClassSource[] = {
    "class_cbo",
    "class_wmc",
    "class_rfc",
    "class_lcom",
    "class_loc",
    "class_total_methods",
    "class_static_methods",
    "class_public_methods",
    "class_private_methods",
    "class_protected_methods",
    "class_default_methods",
    "class_abstract_methods",
    "class_synchronized_methods",
    "class_total_fields",
    "class_static_fields",
    "class_public_fields",
    "class_private_fields",
    "class_protected_fields",
    "class_default_fields",
    "class_final_fields",
    "class_synchronized_fields",
    "class_static_invocations",
    "class_return_qty",
    "class_loop_qty",
    "class_comparisons_qty",
    "class_try_catch_qty",
    "class_parenthesized_exps_qty",
    "class_string_literals_qty",
    "class_numbers_qty",
    "class_assignments_qty",
    "class_math_operations_qty",
    "class_variables_qty",
    "class_max_nested_blocks",
    "class_anonymous_classes_qty",
    "class_inner_classes_qty",
    "class_lambdas_qty",
    "class_unique_words_qty",
};
static_assert(std::size(kClassSource) == 37);

constexpr std::string_view kMethodSource[] = {
    "method_complexity",
    "method_loc",
    "method_parameters_qty",
    "method_return_qty",
    "method_loop_qty",
    "method_comparisons_qty",
    "method_try_catch_qty",
    "method_parenthesized_exps_qty",
    "method_string_literals_qty",
    "method_numbers_qty",
    "method_assignments_qty",
    "method_math_operations_qty",
    "method_variables_qty",
    "method_max_nested_blocks",
    "method_anonymous_classes_qty",
    "method_inner_classes_qty",
    "method_lambdas_qty",
    "method_unique_words_qty",
    "method_invocations_qty",
    "method_static_invocations_qty",
};
static_assert(std::size(kMethodSource) == 20);

constexpr std::string_view kProcess[] = {
    "process_commits",
    "process_lines_added",
    "process_lines_removed",
    "process_bug_fix_count",
    "process_previous_refactorings",
};

constexpr std::string_view kOwnership[] = {
    "ownership_authors",
    "ownership_minor_authors",
    "ownership_major_authors",
    "ownership_author_ownership",
};

std::string normalize_name(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

FeatureCatalog build_catalog(ElementLevel level, bool adjuncts) {
  std::vector<FeatureEntry> entries;
  auto add = [&](std::span<const std::string_view> names, ElementLevel at, FeatureKind kind) {
    for (auto n : names) entries.push_back({std::string(n), at, kind});
  };
  add(kClassSource, EL::Class, FeatureKind::Source);
  if (level != EL::Class) add(kMethodSource, EL::Method, FeatureKind::Source);
  if (level == EL::Class || adjuncts) {
    add(kProcess, EL::Class, FeatureKind::Process);
    add(kOwnership, EL::Class, FeatureKind::Ownership);
  }
  if (level == EL::Variable) {
    entries.push_back({std::string(kVariableUsageFeature), EL::Variable, FeatureKind::Source});
  }
  return FeatureCatalog(level, level == EL::Class ? true : adjuncts, std::move(entries));
}

}  // namespace

std::string_view to_string(ElementLevel level) {
  switch (level) {
    case EL::Class: return "class";
    case EL::Method: return "method";
    case EL::Variable: return "variable";
  }
  return "class";
}

ElementLevel level_from_string(std::string_view text) {
  const auto n = normalize_name(text);
  if (n == "class") return EL::Class;
  if (n == "method") return EL::Method;
  if (n == "variable") return EL::Variable;
  throw Error("unknown element level '" + std::string(text) + "'");
}

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Source: return "source";
    case FeatureKind::Process: return "process";
    case FeatureKind::Ownership: return "ownership";
  }
  return "source";
}

std::span<const RefactoringInfo> canonical_taxonomy() { return kTaxonomy; }

const RefactoringInfo& info(RefactoringType type) {
  return kTaxonomy[static_cast<std::size_t>(type)];
}

RefactoringType refactoring_from_string(std::string_view text) {
  const auto wanted = normalize_name(text);
  for (const auto& r : kTaxonomy) {
    if (normalize_name(r.name) == wanted) return r.type;
  }
  throw UnknownRefactoringName("unknown refactoring '" + std::string(text) + "'");
}

bool ElementKey::consistent_with(ElementLevel lvl) const {
  switch (lvl) {
    case EL::Class: return !method && !variable;
    case EL::Method: return method && !variable;
    case EL::Variable: return method && variable;
  }
  return false;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FeatureCatalog::FeatureCatalog(ElementLevel level, bool with_history_adjuncts,
                               std::vector<FeatureEntry> entries)
    : level_(level), with_history_adjuncts_(with_history_adjuncts), entries_(std::move(entries)) {
  std::string joined;
  for (const auto& e : entries_) {
    joined += e.name;
    joined += '\n';
  }
  hash_ = fnv1a_hex(joined);
}

std::optional<std::size_t> FeatureCatalog::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> FeatureCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

std::string FeatureCatalog::manifest_json() const {
  nlohmann::ordered_json j;
  j["version"] = kCatalogVersion;
  j["level"] = to_string(level_);
  j["history_adjuncts"] = with_history_adjuncts_;
  j["hash"] = hash_;
  auto& arr = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    arr.push_back({{"name", e.name}, {"level", to_string(e.level)}, {"kind", to_string(e.kind)}});
  }
  return j.dump(2);
}

const FeatureCatalog& catalog_for(ElementLevel level, bool with_history_adjuncts) {
  static const std::array<FeatureCatalog, 6> catalogs{
      build_catalog(EL::Class, false),    build_catalog(EL::Class, true),
      build_catalog(EL::Method, false),   build_catalog(EL::Method, true),
      build_catalog(EL::Variable, false), build_catalog(EL::Variable, true),
  };
  // the class catalog always carries the history columns
  const bool adj = level == EL::Class ? true : with_history_adjuncts;
  return catalogs[static_cast<std::size_t>(level) * 2 + (adj ? 1 : 0)];
}

const FeatureCatalog* catalog_by_hash(std::string_view hash) {
  for (auto level : kAllLevels) {
    for (bool adj : {false, true}) {
      const auto& c = catalog_for(level, adj);
      if (c.hash() == hash) return &c;
    }
  }
  return nullptr;
}

std::span<const std::string_view> class_source_feature_names() { return kClassSource; }
std::span<const std::string_view> method_source_feature_names() { return kMethodSource; }
std::span<const std::string_view> process_feature_names() { return kProcess; }
std::span<const std::string_view> ownership_feature_names() { return kOwnership; }

}  // namespace refpred
