#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace refpred::java {

enum class TokenKind {
  Identifier,
  Keyword,
  IntegerLiteral,
  FloatLiteral,
  CharLiteral,
  StringLiteral,
  BooleanLiteral,
  NullLiteral,
  Operator,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 0;  // 1-based
  std::size_t column = 0;
  std::size_t offset = 0;  // byte offset into the source

  bool is(std::string_view t) const { return (kind == TokenKind::Operator || kind == TokenKind::Keyword) && text == t; }
  bool is_literal() const {
    return kind == TokenKind::IntegerLiteral || kind == TokenKind::FloatLiteral ||
           kind == TokenKind::CharLiteral || kind == TokenKind::StringLiteral ||
           kind == TokenKind::BooleanLiteral || kind == TokenKind::NullLiteral;
  }
};

// Comments and whitespace are dropped. '>' is always emitted as a single
// character token so that nested generic closers need no splitting; the
// parser reassembles shift and comparison operators from adjacent '>' tokens.
std::vector<Token> tokenize(std::string_view source);

namespace modifier {
inline constexpr std::uint32_t Public = 1u << 0;
inline constexpr std::uint32_t Private = 1u << 1;
inline constexpr std::uint32_t Protected = 1u << 2;
inline constexpr std::uint32_t Static = 1u << 3;
inline constexpr std::uint32_t Final = 1u << 4;
inline constexpr std::uint32_t Abstract = 1u << 5;
inline constexpr std::uint32_t Synchronized = 1u << 6;
inline constexpr std::uint32_t Native = 1u << 7;
inline constexpr std::uint32_t Transient = 1u << 8;
inline constexpr std::uint32_t Volatile = 1u << 9;
inline constexpr std::uint32_t Strictfp = 1u << 10;
inline constexpr std::uint32_t Default = 1u << 11;
inline constexpr std::uint32_t Sealed = 1u << 12;
inline constexpr std::uint32_t NonSealed = 1u << 13;
}  // namespace modifier

// Child layout per kind (children listed in order):
//   CompilationUnit   text=package; TypeDecl...
//   TypeDecl          text=name, detail=class|interface|enum|record|annotation;
//                     members (FieldDecl, MethodDecl, Initializer, TypeDecl, EnumConstant);
//                     type_params holds declared type variables
//   FieldDecl         TypeRef, VarDeclarator...
//   VarDeclarator     text=name; [initializer expression]
//   MethodDecl        text=name, detail=method|constructor; TypeRef (empty text for
//                     constructors), ParamList, [Block]
//   Param             text=name, detail="..." for varargs; [TypeRef] (lambda params may omit it)
//   Initializer       Block (modifiers carries Static)
//   EnumConstant      text=name; Arguments, [ClassBody]
//   ClassBody         members
//   TypeRef           text=qualified name without arguments ("?" for wildcards),
//                     detail=array suffix ("[]" per dimension); type arguments / bounds
//   Block             statements
//   LocalVar          TypeRef, VarDeclarator...
//   If                condition, then, [else]
//   For               ForInit, condition|None, ForUpdate, body
//   ForEach           LocalVar, iterable, body
//   While             condition, body
//   Do                body, condition
//   Try               Resources, Block, Catch..., [Finally]
//   Resources         LocalVar | expression ...
//   Catch             text=parameter name; TypeRef..., Block
//   Finally           Block
//   Switch            detail=statement|expression; selector, SwitchCase...
//   SwitchCase        detail=case|default; CaseLabels, statements...
//   Return/Throw/Yield [expression]
//   Synchronized      lock expression, Block
//   Labeled           text=label; statement
//   ExprStmt          expression
//   Assert            expressions
//   Assign            text=operator; target, value
//   Binary            text=operator; lhs, rhs
//   Unary             text=operator, detail=prefix|postfix; operand
//   Conditional       condition, then, else
//   InstanceOf        expression, TypeRef (detail=pattern variable name, if any)
//   Cast              TypeRef, expression
//   Lambda            LambdaParams, body (Block or expression)
//   MethodRef         text=member name; qualifier (expression or TypeRef)
//   Call              text=method name; qualifier|None, Arguments
//   ConstructorCall   text=this|super; Arguments
//   FieldAccess       text=member name; qualifier
//   Name              text=identifier
//   Literal           text=literal token, detail=int|float|char|string|boolean|null
//   New               TypeRef, Arguments, [ClassBody]
//   NewArray          TypeRef, dimension expressions..., [ArrayInit]
//   ArrayInit         elements
//   ArrayAccess       array, index
//   Paren             expression
//   ClassLiteral      TypeRef
enum class NodeKind {
  None,
  CompilationUnit,
  TypeDecl,
  FieldDecl,
  VarDeclarator,
  MethodDecl,
  ParamList,
  Param,
  Initializer,
  EnumConstant,
  ClassBody,
  TypeRef,
  Block,
  LocalVar,
  If,
  For,
  ForInit,
  ForUpdate,
  ForEach,
  While,
  Do,
  Try,
  Resources,
  Catch,
  Finally,
  Switch,
  SwitchCase,
  CaseLabels,
  Return,
  Throw,
  Break,
  Continue,
  Yield,
  Synchronized,
  Labeled,
  ExprStmt,
  Assert,
  Empty,
  Assign,
  Binary,
  Unary,
  Conditional,
  InstanceOf,
  Cast,
  Lambda,
  LambdaParams,
  MethodRef,
  Call,
  ConstructorCall,
  Arguments,
  FieldAccess,
  Name,
  Literal,
  New,
  NewArray,
  ArrayInit,
  ArrayAccess,
  Paren,
  This,
  Super,
  ClassLiteral,
};

struct Node {
  NodeKind kind = NodeKind::None;
  std::string text;
  std::string detail;
  std::uint32_t modifiers = 0;
  std::size_t first_token = 0;  // inclusive token span
  std::size_t last_token = 0;
  std::vector<std::unique_ptr<Node>> children;
  std::vector<std::string> type_params;

  bool has(std::uint32_t mod) const { return (modifiers & mod) != 0; }
  const Node* child(std::size_t i) const { return i < children.size() ? children[i].get() : nullptr; }
};

struct CompilationUnit {
  std::string source;
  std::vector<Token> tokens;
  std::unique_ptr<Node> root;
};

}  // namespace refpred::java
