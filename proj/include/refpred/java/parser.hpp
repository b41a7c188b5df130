#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "refpred/java/ast.hpp"

namespace refpred::java {

// Parses one Java compilation unit. Throws ParseError with the position of
// the first offending token.
CompilationUnit parse(std::string source);

// A named (non-anonymous) type declaration and the name it is addressed by.
struct TypeHandle {
  const Node* decl = nullptr;
  std::string qualified_name;  // package + enclosing types, '.'-separated
  std::string simple_name;
};

// All named type declarations in the unit, outer types first, in source order.
// Local classes declared inside method bodies are included.
std::vector<TypeHandle> list_types(const CompilationUnit& unit);

// Looks a class up by fully qualified name, falling back to a unique match on
// the dotted suffix (e.g. "Outer.Inner" or "Inner"). Throws ClassNotFound.
TypeHandle find_type(const CompilationUnit& unit, std::string_view class_name);

// Canonical method signature: name(T1,T2) with parameter types as written,
// whitespace removed and varargs rendered as "T...".
std::string signature_of(const Node& method);

// Renders a TypeRef back to source-like text, e.g. "Map<String,List<Integer>>[]".
std::string type_text(const Node& type_ref);

std::vector<const Node*> methods_of(const Node& type_decl);

// Exact signature match first, then a unique match on the method name alone.
// Throws MethodNotFound.
const Node& find_method(const Node& type_decl, std::string_view signature);

}  // namespace refpred::java
