#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "refpred/java/ast.hpp"
#include "refpred/java/parser.hpp"

namespace refpred::metrics {

// Syntactic counters shared by the class and method levels, in catalog order.
//
//   returns             return statements
//   loops               for, enhanced for, while, do
//   comparisons         binary ==, !=, <, >, <=, >=
//   try_catch           try statements
//   parenthesized       grouping parentheses (not calls, casts or statement headers)
//   string_literals     string literals and text blocks
//   numbers             integer and floating point literals
//   assignments         assignment expressions, simple and compound
//   math_operations     binary +, -, *, /, %
//   variables           declared local variables (for, foreach and resource variables included)
//   max_nested_blocks   deepest brace nesting below the body (the body itself is level 0)
//   anonymous_classes   anonymous class instantiations
//   inner_classes       named class declarations nested inside
//   lambdas             lambda expressions
//   unique_words        distinct identifier and literal tokens, case-sensitive, no splitting
//
// Lambda and anonymous class bodies count toward the enclosing method; named
// nested classes are measured on their own.
struct BodyCounters {
  std::int64_t returns = 0;
  std::int64_t loops = 0;
  std::int64_t comparisons = 0;
  std::int64_t try_catch = 0;
  std::int64_t parenthesized = 0;
  std::int64_t string_literals = 0;
  std::int64_t numbers = 0;
  std::int64_t assignments = 0;
  std::int64_t math_operations = 0;
  std::int64_t variables = 0;
  std::int64_t max_nested_blocks = 0;
  std::int64_t anonymous_classes = 0;
  std::int64_t inner_classes = 0;
  std::int64_t lambdas = 0;
  std::int64_t unique_words = 0;

  void append_to(std::vector<double>& out) const;
  bool operator==(const BodyCounters&) const = default;
};

struct ClassMetrics {
  std::int64_t cbo = 0;
  std::int64_t wmc = 0;
  std::int64_t rfc = 0;
  std::int64_t lcom = 0;
  std::int64_t loc = 0;
  std::int64_t total_methods = 0;
  std::int64_t static_methods = 0;
  std::int64_t public_methods = 0;
  std::int64_t private_methods = 0;
  std::int64_t protected_methods = 0;
  std::int64_t default_methods = 0;
  std::int64_t abstract_methods = 0;
  std::int64_t synchronized_methods = 0;
  std::int64_t total_fields = 0;
  std::int64_t static_fields = 0;
  std::int64_t public_fields = 0;
  std::int64_t private_fields = 0;
  std::int64_t protected_fields = 0;
  std::int64_t default_fields = 0;
  std::int64_t final_fields = 0;
  std::int64_t synchronized_fields = 0;
  std::int64_t static_invocations = 0;
  BodyCounters body;

  // 37 values in class catalog order.
  std::vector<double> values() const;
  bool operator==(const ClassMetrics&) const = default;
};

struct MethodMetrics {
  std::int64_t complexity = 1;
  std::int64_t loc = 0;
  std::int64_t parameters = 0;
  BodyCounters body;
  std::int64_t invocations = 0;
  std::int64_t static_invocations = 0;

  // 20 values in method catalog order.
  std::vector<double> values() const;
  bool operator==(const MethodMetrics&) const = default;
};

struct VariableMetrics {
  std::int64_t usage_count = 0;
  bool operator==(const VariableMetrics&) const = default;
};

// One declared variable (parameter, local, catch/lambda parameter, pattern
// variable) of a method, in declaration order.
struct VariableDeclaration {
  std::string name;
  std::size_t ordinal = 0;  // index among declarations sharing this name
  std::size_t token = 0;  // index of the declaring token
  bool parameter = false;
  VariableMetrics metrics;
};

ClassMetrics class_metrics(const java::CompilationUnit& unit, const java::Node& type_decl);
MethodMetrics method_metrics(const java::CompilationUnit& unit, const java::Node& type_decl,
                             const java::Node& method);
// Declarations inside nested anonymous or local class bodies are not listed.
std::vector<VariableDeclaration> variables_of(const java::Node& method);

// Source-text entry points. Throw ParseError, ClassNotFound, MethodNotFound
// or VariableNotFound.
ClassMetrics extract_class_metrics(std::string_view source, std::string_view class_name);
MethodMetrics extract_method_metrics(std::string_view source, std::string_view class_name,
                                     std::string_view method_signature);
// `ordinal` selects among same-named declarations (shadowing in sibling scopes).
VariableMetrics extract_variable_usage(std::string_view source, std::string_view class_name,
                                       std::string_view method_signature, std::string_view variable_name,
                                       std::size_t ordinal = 0);

struct MethodAnalysis {
  std::string signature;
  MethodMetrics metrics;
  std::vector<VariableDeclaration> variables;
};

struct ClassAnalysis {
  std::string qualified_name;
  ClassMetrics metrics;
  std::vector<MethodAnalysis> methods;
};

// Every named class in the unit with all of its methods and variables.
std::vector<ClassAnalysis> analyze_unit(const java::CompilationUnit& unit);
std::vector<ClassAnalysis> analyze_source(std::string_view source);

}  // namespace refpred::metrics
