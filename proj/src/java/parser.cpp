#include "refpred/java/parser.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <optional>

#include "refpred/error.hpp"

namespace refpred::java {

namespace {

using NodePtr = std::unique_ptr<Node>;

constexpr std::array<std::string_view, 9> kPrimitives = {"boolean", "byte", "char", "short", "int",
                                                         "long",    "float", "double", "void"};

bool is_primitive(const Token& t) {
  if (t.kind != TokenKind::Keyword) return false;
  return std::find(kPrimitives.begin(), kPrimitives.end(), t.text) != kPrimitives.end();
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  NodePtr unit() {
    auto root = make(NodeKind::CompilationUnit);
    skip_annotations();
    if (at("package")) {
      next();
      root->text = qualified_name();
      expect(";");
    }
    while (at("import")) {
      while (!at(";")) {
        if (peek().kind == TokenKind::End) fail("unterminated import");
        next();
      }
      next();
    }
    while (peek().kind != TokenKind::End) {
      if (at(";")) {
        next();
        continue;
      }
      const std::size_t first = pos_;
      const auto mods = modifiers();
      if (!type_decl_start()) fail("expected a type declaration");
      root->children.push_back(type_decl(mods, first));
    }
    finish(*root);
    return root;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    const std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  bool at(std::string_view text, std::size_t k = 0) const { return peek(k).is(text); }
  bool at_ident(std::size_t k = 0) const { return peek(k).kind == TokenKind::Identifier; }
  bool at_ident_text(std::string_view text, std::size_t k = 0) const {
    return at_ident(k) && peek(k).text == text;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(std::string_view text) {
    if (!at(text)) return false;
    next();
    return true;
  }
  void expect(std::string_view text) {
    if (!at(text)) fail("expected '" + std::string(text) + "'");
    next();
  }
  std::string ident() {
    if (!at_ident()) fail("expected identifier");
    return next().text;
  }
  // Two tokens with no whitespace in between.
  bool adjacent(std::size_t k) const {
    const Token& a = peek(k);
    const Token& b = peek(k + 1);
    return a.offset + a.text.size() == b.offset;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    const std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(what + ", found " + found, t.line, t.column);
  }

  NodePtr make(NodeKind kind, std::optional<std::size_t> first = std::nullopt) {
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->first_token = first.value_or(pos_);
    return n;
  }
  void finish(Node& n) const { n.last_token = pos_ == 0 ? 0 : pos_ - 1; }
  NodePtr none() {
    auto n = make(NodeKind::None);
    n->last_token = n->first_token;
    return n;
  }

  std::size_t matching_paren(std::size_t k) const {
    // k points at '('; returns the lookahead offset of the matching ')'
    int depth = 0;
    for (std::size_t i = k;; ++i) {
      const Token& t = peek(i);
      if (t.kind == TokenKind::End) return i;
      if (t.is("(")) ++depth;
      if (t.is(")") && --depth == 0) return i;
    }
  }

  // ---- declarations --------------------------------------------------------

  void skip_annotation() {
    expect("@");
    qualified_name();
    if (at("(")) skip_balanced("(", ")");
  }

  void skip_annotations() {
    while (at("@") && !at("interface", 1)) skip_annotation();
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 0;
    do {
      if (peek().kind == TokenKind::End) fail("unbalanced '" + std::string(open) + "'");
      if (at(open)) ++depth;
      if (at(close)) --depth;
      next();
    } while (depth > 0);
  }

  std::string qualified_name() {
    std::string name = ident();
    while (at(".") && at_ident(1)) {
      next();
      name += "." + next().text;
    }
    if (at(".") && at("*", 1)) {
      next();
      next();
      name += ".*";
    }
    return name;
  }

  std::uint32_t modifiers() {
    std::uint32_t mods = 0;
    for (;;) {
      if (at("@") && !at("interface", 1)) {
        skip_annotation();
        continue;
      }
      const Token& t = peek();
      std::uint32_t m = 0;
      if (t.kind == TokenKind::Keyword) {
        if (t.text == "public") m = modifier::Public;
        else if (t.text == "private") m = modifier::Private;
        else if (t.text == "protected") m = modifier::Protected;
        else if (t.text == "static") m = modifier::Static;
        else if (t.text == "final") m = modifier::Final;
        else if (t.text == "abstract") m = modifier::Abstract;
        else if (t.text == "synchronized" && !at("(", 1)) m = modifier::Synchronized;
        else if (t.text == "native") m = modifier::Native;
        else if (t.text == "transient") m = modifier::Transient;
        else if (t.text == "volatile") m = modifier::Volatile;
        else if (t.text == "strictfp") m = modifier::Strictfp;
        else if (t.text == "default" && !at(":", 1) && !at("->", 1)) m = modifier::Default;
      } else if (t.kind == TokenKind::Identifier) {
        if (t.text == "sealed" && (peek(1).kind == TokenKind::Keyword || at_ident_text("record", 1))) {
          m = modifier::Sealed;
        } else if (t.text == "non" && at("-", 1) && at_ident_text("sealed", 2)) {
          next();
          next();
          m = modifier::NonSealed;
        }
      }
      if (m == 0) return mods;
      mods |= m;
      next();
    }
  }

  bool type_decl_start() const {
    if (at("class") || at("interface") || at("enum")) return true;
    if (at("@") && at("interface", 1)) return true;
    return at_ident_text("record") && at_ident(1) && (at("(", 2) || at("<", 2));
  }

  std::vector<std::string> type_parameters() {
    std::vector<std::string> names;
    expect("<");
    for (;;) {
      skip_annotations();
      names.push_back(ident());
      if (accept("extends")) {
        type();
        while (accept("&")) type();
      }
      if (!accept(",")) break;
    }
    expect(">");
    return names;
  }

  NodePtr type_decl(std::uint32_t mods, std::size_t first) {
    auto decl = make(NodeKind::TypeDecl, first);
    decl->modifiers = mods;
    if (accept("class")) {
      decl->detail = "class";
    } else if (accept("interface")) {
      decl->detail = "interface";
    } else if (accept("enum")) {
      decl->detail = "enum";
    } else if (at("@")) {
      next();
      next();
      decl->detail = "annotation";
    } else {
      next();  // record
      decl->detail = "record";
    }
    decl->text = ident();
    if (at("<")) decl->type_params = type_parameters();

    std::vector<NodePtr> components;
    if (decl->detail == "record") {
      expect("(");
      while (!at(")")) {
        const std::size_t cfirst = pos_;
        modifiers();
        auto field = make(NodeKind::FieldDecl, cfirst);
        field->modifiers = modifier::Private | modifier::Final;
        field->children.push_back(type());
        if (accept("...")) field->children.back()->detail += "[]";
        auto var = make(NodeKind::VarDeclarator);
        var->text = ident();
        finish(*var);
        field->children.push_back(std::move(var));
        finish(*field);
        components.push_back(std::move(field));
        if (!accept(",")) break;
      }
      expect(")");
    }
    for (;;) {
      if (accept("extends") || accept("implements")) {
        type();
        while (accept(",")) type();
      } else if (at_ident_text("permits")) {
        next();
        type();
        while (accept(",")) type();
      } else {
        break;
      }
    }
    for (auto& c : components) decl->children.push_back(std::move(c));
    class_body(*decl, decl->detail, decl->text);
    finish(*decl);
    return decl;
  }

  void class_body(Node& owner, const std::string& type_kind, const std::string& class_name) {
    expect("{");
    if (type_kind == "enum") enum_constants(owner);
    while (!at("}")) {
      if (peek().kind == TokenKind::End) fail("unterminated class body");
      if (accept(";")) continue;
      member(owner, type_kind, class_name);
    }
    expect("}");
  }

  void enum_constants(Node& owner) {
    while (!at(";") && !at("}")) {
      const std::size_t first = pos_;
      skip_annotations();
      auto c = make(NodeKind::EnumConstant, first);
      c->text = ident();
      if (at("(")) {
        c->children.push_back(arguments());
      } else {
        auto args = make(NodeKind::Arguments);
        finish(*args);
        c->children.push_back(std::move(args));
      }
      if (at("{")) {
        auto body = make(NodeKind::ClassBody);
        class_body(*body, "class", "");
        finish(*body);
        c->children.push_back(std::move(body));
      }
      finish(*c);
      owner.children.push_back(std::move(c));
      if (!accept(",")) break;
    }
    accept(";");
  }

  void member(Node& owner, const std::string& type_kind, const std::string& class_name) {
    const std::size_t first = pos_;
    auto mods = modifiers();
    const bool in_interface = type_kind == "interface" || type_kind == "annotation";

    if (at("{")) {
      auto init = make(NodeKind::Initializer, first);
      init->modifiers = mods;
      init->children.push_back(block());
      finish(*init);
      owner.children.push_back(std::move(init));
      return;
    }
    if (type_decl_start()) {
      if (in_interface) mods |= modifier::Public | modifier::Static;
      owner.children.push_back(type_decl(mods, first));
      return;
    }

    std::vector<std::string> tparams;
    if (at("<")) tparams = type_parameters();

    const bool is_ctor = !class_name.empty() && at_ident_text(class_name) && (at("(", 1) || (type_kind == "record" && at("{", 1)));
    NodePtr return_type;
    std::string name;
    if (is_ctor) {
      return_type = make(NodeKind::TypeRef);
      finish(*return_type);
      name = ident();
    } else {
      return_type = type();
      name = ident();
    }

    if (at("(") || (is_ctor && at("{"))) {
      auto method = make(NodeKind::MethodDecl, first);
      method->text = name;
      method->detail = is_ctor ? "constructor" : "method";
      method->type_params = std::move(tparams);
      method->children.push_back(std::move(return_type));
      if (at("(")) {
        method->children.push_back(parameters());
      } else {
        auto params = make(NodeKind::ParamList);
        finish(*params);
        method->children.push_back(std::move(params));
      }
      while (at("[") && at("]", 1)) {
        next();
        next();
        method->children[0]->detail += "[]";
      }
      if (accept("throws")) {
        type();
        while (accept(",")) type();
      }
      if (accept("default")) {
        // annotation element default value
        while (!at(";")) {
          if (at("{")) skip_balanced("{", "}");
          else if (at("(")) skip_balanced("(", ")");
          else next();
        }
      }
      if (at("{")) {
        method->children.push_back(block());
      } else {
        expect(";");
      }
      if (in_interface) {
        if (!(mods & modifier::Private)) mods |= modifier::Public;
        if (method->children.size() < 3 && !(mods & (modifier::Static | modifier::Default | modifier::Private))) {
          mods |= modifier::Abstract;
        }
      }
      method->modifiers = mods;
      finish(*method);
      owner.children.push_back(std::move(method));
      return;
    }

    auto field = make(NodeKind::FieldDecl, first);
    field->modifiers = in_interface ? (mods | modifier::Public | modifier::Static | modifier::Final) : mods;
    field->children.push_back(std::move(return_type));
    declarators(*field, name);
    expect(";");
    finish(*field);
    owner.children.push_back(std::move(field));
  }

  // Parses "name [dims] [= init] (, name [dims] [= init])*" with the first
  // name already consumed.
  void declarators(Node& owner, std::string first_name) {
    std::size_t first = pos_ - 1;
    for (;;) {
      auto var = make(NodeKind::VarDeclarator, first);
      var->text = std::move(first_name);
      while (at("[") && at("]", 1)) {
        next();
        next();
        var->detail += "[]";
      }
      if (accept("=")) var->children.push_back(variable_initializer());
      finish(*var);
      owner.children.push_back(std::move(var));
      if (!accept(",")) break;
      first = pos_;
      first_name = ident();
    }
  }

  NodePtr variable_initializer() { return at("{") ? array_initializer() : expression(); }

  NodePtr array_initializer() {
    auto init = make(NodeKind::ArrayInit);
    expect("{");
    while (!at("}")) {
      init->children.push_back(variable_initializer());
      if (!accept(",")) break;
    }
    expect("}");
    finish(*init);
    return init;
  }

  NodePtr parameters() {
    auto params = make(NodeKind::ParamList);
    expect("(");
    while (!at(")")) {
      params->children.push_back(parameter());
      if (!accept(",")) break;
    }
    expect(")");
    finish(*params);
    return params;
  }

  NodePtr parameter() {
    auto p = make(NodeKind::Param);
    p->modifiers = modifiers();
    p->children.push_back(type());
    if (accept("...")) p->detail = "...";
    if (at("this")) {
      // receiver parameter
      next();
      p->text = "this";
    } else {
      p->text = ident();
    }
    while (at("[") && at("]", 1)) {
      next();
      next();
      p->children[0]->detail += "[]";
    }
    finish(*p);
    return p;
  }

  // ---- types ---------------------------------------------------------------

  NodePtr type(bool allow_dims = true) {
    skip_annotations();
    auto t = make(NodeKind::TypeRef);
    if (is_primitive(peek())) {
      t->text = next().text;
    } else if (at("?")) {
      next();
      t->text = "?";
      if (accept("extends") || accept("super")) t->children.push_back(type());
    } else {
      t->text = ident();
      if (at("<")) type_arguments(*t);
      while (at(".") && (at_ident(1) || at("@", 1))) {
        next();
        skip_annotations();
        t->text += "." + ident();
        if (at("<")) type_arguments(*t);
      }
    }
    if (allow_dims) {
      for (;;) {
        skip_annotations();
        if (at("[") && at("]", 1)) {
          next();
          next();
          t->detail += "[]";
        } else {
          break;
        }
      }
    }
    finish(*t);
    return t;
  }

  void type_arguments(Node& owner) {
    expect("<");
    if (accept(">")) return;  // diamond
    for (;;) {
      owner.children.push_back(type());
      if (!accept(",")) break;
    }
    expect(">");
  }

  NodePtr try_type() {
    const std::size_t save = pos_;
    try {
      return type();
    } catch (const ParseError&) {
      pos_ = save;
      return nullptr;
    }
  }

  // ---- statements ----------------------------------------------------------

  NodePtr block() {
    auto b = make(NodeKind::Block);
    expect("{");
    while (!at("}")) {
      if (peek().kind == TokenKind::End) fail("unterminated block");
      b->children.push_back(statement());
    }
    expect("}");
    finish(*b);
    return b;
  }

  bool local_var_start() {
    if (at("final") || (at("@") && !at("interface", 1))) return true;
    if (is_primitive(peek())) {
      std::size_t k = 1;
      while (at("[", k) && at("]", k + 1)) k += 2;
      return at_ident(k);
    }
    if (!at_ident()) return false;
    const std::size_t save = pos_;
    auto t = try_type();
    const bool ok = t && at_ident() && (at("=", 1) || at(";", 1) || at(",", 1) || at("[", 1) || at(":", 1));
    pos_ = save;
    return ok;
  }

  bool local_type_start() {
    if (type_decl_start()) return true;
    std::size_t k = 0;
    while (peek(k).is("final") || peek(k).is("abstract") || peek(k).is("static") || peek(k).is("strictfp")) ++k;
    return k > 0 && (at("class", k) || at("interface", k) || at("enum", k));
  }

  NodePtr local_var(std::size_t first) {
    auto decl = make(NodeKind::LocalVar, first);
    decl->modifiers = modifiers();
    decl->children.push_back(type());
    std::string name = ident();
    declarators(*decl, std::move(name));
    finish(*decl);
    return decl;
  }

  NodePtr statement() {
    const std::size_t first = pos_;
    if (at("{")) return block();
    if (accept(";")) {
      auto e = make(NodeKind::Empty, first);
      finish(*e);
      return e;
    }
    if (at("if")) return if_statement();
    if (at("for")) return for_statement();
    if (at("while")) {
      next();
      auto w = make(NodeKind::While, first);
      w->children.push_back(condition());
      w->children.push_back(statement());
      finish(*w);
      return w;
    }
    if (at("do")) {
      next();
      auto d = make(NodeKind::Do, first);
      d->children.push_back(statement());
      expect("while");
      d->children.push_back(condition());
      expect(";");
      finish(*d);
      return d;
    }
    if (at("try")) return try_statement();
    if (at("switch")) {
      auto s = switch_construct(false);
      accept(";");
      return s;
    }
    if (at("return") || at("throw")) {
      auto r = make(at("return") ? NodeKind::Return : NodeKind::Throw, first);
      next();
      if (!at(";")) r->children.push_back(expression());
      expect(";");
      finish(*r);
      return r;
    }
    if (at("break") || at("continue")) {
      auto b = make(at("break") ? NodeKind::Break : NodeKind::Continue, first);
      next();
      if (at_ident()) b->text = next().text;
      expect(";");
      finish(*b);
      return b;
    }
    if (at("synchronized") && at("(", 1)) {
      next();
      auto s = make(NodeKind::Synchronized, first);
      s->children.push_back(condition());
      s->children.push_back(block());
      finish(*s);
      return s;
    }
    if (at("assert")) {
      next();
      auto a = make(NodeKind::Assert, first);
      a->children.push_back(expression());
      if (accept(":")) a->children.push_back(expression());
      expect(";");
      finish(*a);
      return a;
    }
    if (at_ident_text("yield") && !at("=", 1) && !at(".", 1) && !at("(", 1) && !at("[", 1) &&
        !at("++", 1) && !at("--", 1) && !at("->", 1)) {
      next();
      auto y = make(NodeKind::Yield, first);
      y->children.push_back(expression());
      expect(";");
      finish(*y);
      return y;
    }
    if (at_ident() && at(":", 1)) {
      auto l = make(NodeKind::Labeled, first);
      l->text = next().text;
      next();
      l->children.push_back(statement());
      finish(*l);
      return l;
    }
    if (local_type_start()) {
      const auto mods = modifiers();
      return type_decl(mods, first);
    }
    if (local_var_start()) {
      auto decl = local_var(first);
      expect(";");
      finish(*decl);
      return decl;
    }
    auto s = make(NodeKind::ExprStmt, first);
    s->children.push_back(expression());
    expect(";");
    finish(*s);
    return s;
  }

  NodePtr condition() {
    expect("(");
    auto e = expression();
    expect(")");
    return e;
  }

  NodePtr if_statement() {
    auto n = make(NodeKind::If);
    expect("if");
    n->children.push_back(condition());
    n->children.push_back(statement());
    if (accept("else")) n->children.push_back(statement());
    finish(*n);
    return n;
  }

  NodePtr for_statement() {
    const std::size_t first = pos_;
    expect("for");
    expect("(");
    if (local_var_start()) {
      const std::size_t decl_first = pos_;
      auto decl = make(NodeKind::LocalVar, decl_first);
      decl->modifiers = modifiers();
      decl->children.push_back(type());
      std::string name = ident();
      if (at(":")) {
        next();
        auto var = make(NodeKind::VarDeclarator, pos_ - 2);
        var->text = std::move(name);
        var->last_token = pos_ - 2;
        decl->children.push_back(std::move(var));
        finish(*decl);
        auto each = make(NodeKind::ForEach, first);
        each->children.push_back(std::move(decl));
        each->children.push_back(expression());
        expect(")");
        each->children.push_back(statement());
        finish(*each);
        return each;
      }
      declarators(*decl, std::move(name));
      finish(*decl);
      auto init = make(NodeKind::ForInit, decl_first);
      init->children.push_back(std::move(decl));
      finish(*init);
      return for_rest(first, std::move(init));
    }
    auto init = make(NodeKind::ForInit);
    while (!at(";")) {
      init->children.push_back(expression());
      if (!accept(",")) break;
    }
    finish(*init);
    return for_rest(first, std::move(init));
  }

  NodePtr for_rest(std::size_t first, NodePtr init) {
    auto f = make(NodeKind::For, first);
    f->children.push_back(std::move(init));
    expect(";");
    f->children.push_back(at(";") ? none() : expression());
    expect(";");
    auto update = make(NodeKind::ForUpdate);
    while (!at(")")) {
      update->children.push_back(expression());
      if (!accept(",")) break;
    }
    finish(*update);
    f->children.push_back(std::move(update));
    expect(")");
    f->children.push_back(statement());
    finish(*f);
    return f;
  }

  NodePtr try_statement() {
    auto t = make(NodeKind::Try);
    expect("try");
    auto resources = make(NodeKind::Resources);
    if (accept("(")) {
      while (!at(")")) {
        const std::size_t first = pos_;
        if (local_var_start()) {
          auto decl = local_var(first);
          finish(*decl);
          resources->children.push_back(std::move(decl));
        } else {
          resources->children.push_back(expression());
        }
        if (!accept(";")) break;
      }
      expect(")");
    }
    finish(*resources);
    t->children.push_back(std::move(resources));
    t->children.push_back(block());
    while (at("catch")) {
      auto c = make(NodeKind::Catch);
      next();
      expect("(");
      modifiers();
      c->children.push_back(type());
      while (accept("|")) c->children.push_back(type());
      c->text = ident();
      expect(")");
      c->children.push_back(block());
      finish(*c);
      t->children.push_back(std::move(c));
    }
    if (at("finally")) {
      auto f = make(NodeKind::Finally);
      next();
      f->children.push_back(block());
      finish(*f);
      t->children.push_back(std::move(f));
    }
    finish(*t);
    return t;
  }

  NodePtr switch_construct(bool as_expression) {
    auto s = make(NodeKind::Switch);
    s->detail = as_expression ? "expression" : "statement";
    expect("switch");
    s->children.push_back(condition());
    expect("{");
    while (!at("}")) {
      if (peek().kind == TokenKind::End) fail("unterminated switch");
      auto c = make(NodeKind::SwitchCase);
      auto labels = make(NodeKind::CaseLabels);
      if (accept("default")) {
        c->detail = "default";
      } else {
        expect("case");
        c->detail = "case";
        for (;;) {
          if (at("default")) {
            next();
          } else {
            const bool saved = no_lambda_;
            no_lambda_ = true;
            labels->children.push_back(ternary());
            no_lambda_ = saved;
          }
          if (!accept(",")) break;
        }
      }
      finish(*labels);
      c->children.push_back(std::move(labels));
      if (accept("->")) {
        if (at("{")) {
          c->children.push_back(block());
        } else if (at("throw")) {
          c->children.push_back(statement());
        } else {
          auto es = make(NodeKind::ExprStmt);
          es->children.push_back(expression());
          expect(";");
          finish(*es);
          c->children.push_back(std::move(es));
        }
      } else {
        expect(":");
        while (!at("case") && !at("default") && !at("}")) {
          if (peek().kind == TokenKind::End) fail("unterminated switch");
          c->children.push_back(statement());
        }
        // "default ->" appearing after a default: label is handled above
      }
      finish(*c);
      s->children.push_back(std::move(c));
    }
    expect("}");
    finish(*s);
    return s;
  }

  // ---- expressions ---------------------------------------------------------

  NodePtr expression() {
    auto lhs = ternary();
    std::size_t len = 0;
    const std::string op = assignment_op(len);
    if (op.empty()) return lhs;
    const std::size_t first = lhs->first_token;
    for (std::size_t i = 0; i < len; ++i) next();
    auto a = make(NodeKind::Assign, first);
    a->text = op;
    a->children.push_back(std::move(lhs));
    a->children.push_back(expression());
    finish(*a);
    return a;
  }

  std::string assignment_op(std::size_t& len) const {
    static constexpr std::string_view ops[] = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="};
    for (auto op : ops) {
      if (at(op)) {
        len = 1;
        return std::string(op);
      }
    }
    if (at(">") && at(">", 1) && adjacent(0)) {
      if (at("=", 2) && adjacent(1)) {
        len = 3;
        return ">>=";
      }
      if (at(">", 2) && adjacent(1) && at("=", 3) && adjacent(2)) {
        len = 4;
        return ">>>=";
      }
    }
    return {};
  }

  NodePtr ternary() {
    auto cond = binary(1);
    if (!at("?")) return cond;
    next();
    auto n = make(NodeKind::Conditional, cond->first_token);
    n->children.push_back(std::move(cond));
    n->children.push_back(ternary_branch());
    expect(":");
    n->children.push_back(ternary_branch());
    finish(*n);
    return n;
  }

  NodePtr ternary_branch() {
    const bool saved = no_lambda_;
    no_lambda_ = false;
    auto e = ternary();
    no_lambda_ = saved;
    return e;
  }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "|") return 3;
    if (op == "^") return 4;
    if (op == "&") return 5;
    if (op == "==" || op == "!=") return 6;
    if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "instanceof") return 7;
    if (op == "<<" || op == ">>" || op == ">>>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    return 0;
  }

  std::string binary_op(std::size_t& len) const {
    const Token& t = peek();
    if (t.kind == TokenKind::Keyword && t.text == "instanceof") {
      len = 1;
      return "instanceof";
    }
    if (t.kind != TokenKind::Operator) return {};
    if (t.text == ">") {
      if (at(">", 1) && adjacent(0)) {
        if (at(">", 2) && adjacent(1)) {
          if (at("=", 3) && adjacent(2)) return {};
          len = 3;
          return ">>>";
        }
        if (at("=", 2) && adjacent(1)) return {};
        len = 2;
        return ">>";
      }
      if (at("=", 1) && adjacent(0)) {
        len = 2;
        return ">=";
      }
      len = 1;
      return ">";
    }
    if (precedence(t.text) > 0) {
      len = 1;
      return t.text;
    }
    return {};
  }

  NodePtr binary(int min_prec) {
    auto lhs = unary();
    for (;;) {
      std::size_t len = 0;
      const std::string op = binary_op(len);
      const int prec = op.empty() ? 0 : precedence(op);
      if (prec == 0 || prec < min_prec) return lhs;
      for (std::size_t i = 0; i < len; ++i) next();
      if (op == "instanceof") {
        auto n = make(NodeKind::InstanceOf, lhs->first_token);
        n->children.push_back(std::move(lhs));
        accept("final");
        n->children.push_back(type());
        if (at_ident()) n->detail = next().text;
        finish(*n);
        lhs = std::move(n);
        continue;
      }
      auto rhs = binary(prec + 1);
      auto n = make(NodeKind::Binary, lhs->first_token);
      n->text = op;
      n->children.push_back(std::move(lhs));
      n->children.push_back(std::move(rhs));
      finish(*n);
      lhs = std::move(n);
    }
  }

  bool lambda_at_paren() const {
    const std::size_t close = matching_paren(0);
    return peek(close + 1).is("->");
  }

  bool cast_operand_start(const Token& t) const {
    if (t.kind == TokenKind::Identifier || t.is_literal()) return true;
    if (t.kind == TokenKind::Keyword) {
      return t.text == "this" || t.text == "super" || t.text == "new" || t.text == "switch" || is_primitive(t);
    }
    return t.is("(") || t.is("!") || t.is("~");
  }

  NodePtr unary() {
    const std::size_t first = pos_;
    if (at("++") || at("--") || at("+") || at("-") || at("!") || at("~")) {
      auto n = make(NodeKind::Unary, first);
      n->text = next().text;
      n->detail = "prefix";
      n->children.push_back(unary());
      finish(*n);
      return n;
    }
    if (at("(") && !lambda_at_paren()) {
      if (is_primitive(peek(1))) {
        next();
        auto c = make(NodeKind::Cast, first);
        c->children.push_back(type());
        expect(")");
        c->children.push_back(unary());
        finish(*c);
        return c;
      }
      if (at_ident(1) || at("@", 1)) {
        const std::size_t save = pos_;
        next();
        auto t = try_type();
        while (t && at("&")) {
          next();
          if (!try_type()) t.reset();
        }
        if (t && at(")") && cast_operand_start(peek(1))) {
          next();
          auto c = make(NodeKind::Cast, first);
          c->children.push_back(std::move(t));
          c->children.push_back(unary());
          finish(*c);
          return c;
        }
        pos_ = save;
      }
    }
    auto e = postfix();
    while (at("++") || at("--")) {
      auto n = make(NodeKind::Unary, first);
      n->text = next().text;
      n->detail = "postfix";
      n->children.push_back(std::move(e));
      finish(*n);
      e = std::move(n);
    }
    return e;
  }

  NodePtr arguments() {
    auto args = make(NodeKind::Arguments);
    expect("(");
    while (!at(")")) {
      args->children.push_back(expression());
      if (!accept(",")) break;
    }
    expect(")");
    finish(*args);
    return args;
  }

  NodePtr lambda() {
    auto l = make(NodeKind::Lambda);
    auto params = make(NodeKind::LambdaParams);
    if (at_ident()) {
      auto p = make(NodeKind::Param);
      p->text = next().text;
      finish(*p);
      params->children.push_back(std::move(p));
    } else {
      expect("(");
      while (!at(")")) {
        if (at_ident() && (at(",", 1) || at(")", 1))) {
          auto p = make(NodeKind::Param);
          p->text = next().text;
          finish(*p);
          params->children.push_back(std::move(p));
        } else {
          params->children.push_back(parameter());
        }
        if (!accept(",")) break;
      }
      expect(")");
    }
    finish(*params);
    l->children.push_back(std::move(params));
    expect("->");
    l->children.push_back(at("{") ? block() : expression());
    finish(*l);
    return l;
  }

  NodePtr creator(std::size_t first) {
    expect("new");
    if (at("<")) skip_balanced("<", ">");
    auto t = type(false);
    if (at("[")) {
      auto arr = make(NodeKind::NewArray, first);
      arr->children.push_back(std::move(t));
      while (at("[")) {
        next();
        if (accept("]")) {
          arr->children[0]->detail += "[]";
        } else {
          arr->children.push_back(expression());
          expect("]");
          arr->children[0]->detail += "[]";
        }
      }
      if (at("{")) arr->children.push_back(array_initializer());
      finish(*arr);
      return arr;
    }
    auto n = make(NodeKind::New, first);
    n->children.push_back(std::move(t));
    n->children.push_back(arguments());
    if (at("{")) {
      auto body = make(NodeKind::ClassBody);
      class_body(*body, "class", "");
      finish(*body);
      n->children.push_back(std::move(body));
    }
    finish(*n);
    return n;
  }

  NodePtr primary() {
    const std::size_t first = pos_;
    const Token& t = peek();
    if (t.is_literal()) {
      auto lit = make(NodeKind::Literal, first);
      lit->text = t.text;
      switch (t.kind) {
        case TokenKind::IntegerLiteral: lit->detail = "int"; break;
        case TokenKind::FloatLiteral: lit->detail = "float"; break;
        case TokenKind::CharLiteral: lit->detail = "char"; break;
        case TokenKind::StringLiteral: lit->detail = "string"; break;
        case TokenKind::BooleanLiteral: lit->detail = "boolean"; break;
        default: lit->detail = "null"; break;
      }
      next();
      finish(*lit);
      return lit;
    }
    if (at("this")) {
      next();
      if (at("(")) {
        auto c = make(NodeKind::ConstructorCall, first);
        c->text = "this";
        c->children.push_back(arguments());
        finish(*c);
        return c;
      }
      auto n = make(NodeKind::This, first);
      finish(*n);
      return n;
    }
    if (at("super")) {
      next();
      if (at("(")) {
        auto c = make(NodeKind::ConstructorCall, first);
        c->text = "super";
        c->children.push_back(arguments());
        finish(*c);
        return c;
      }
      auto n = make(NodeKind::Super, first);
      finish(*n);
      return n;
    }
    if (at("new")) return creator(first);
    if (at("switch")) return switch_construct(true);
    if (at("(")) {
      if (lambda_at_paren() && !no_lambda_) return lambda();
      next();
      auto p = make(NodeKind::Paren, first);
      const bool saved = no_lambda_;
      no_lambda_ = false;
      p->children.push_back(expression());
      no_lambda_ = saved;
      expect(")");
      finish(*p);
      return p;
    }
    if (is_primitive(t)) {
      auto ty = type();
      if (accept("::")) {
        auto m = make(NodeKind::MethodRef, first);
        m->text = at("new") ? next().text : ident();
        m->children.push_back(std::move(ty));
        finish(*m);
        return m;
      }
      expect(".");
      expect("class");
      auto c = make(NodeKind::ClassLiteral, first);
      c->children.push_back(std::move(ty));
      finish(*c);
      return c;
    }
    if (at_ident()) {
      if (at("->", 1) && !no_lambda_) return lambda();
      const std::string name = next().text;
      if (at("(")) {
        auto c = make(NodeKind::Call, first);
        c->text = name;
        c->children.push_back(none());
        c->children.push_back(arguments());
        finish(*c);
        return c;
      }
      auto n = make(NodeKind::Name, first);
      n->text = name;
      finish(*n);
      return n;
    }
    if (at("<")) {
      // generic method call without a qualifier: <T>foo()
      skip_balanced("<", ">");
      return primary();
    }
    fail("expected an expression");
  }

  static std::string dotted(const Node& n) {
    if (n.kind == NodeKind::Name) return n.text;
    if (n.kind == NodeKind::FieldAccess && n.child(0)) {
      auto q = dotted(*n.child(0));
      return q.empty() ? std::string{} : q + "." + n.text;
    }
    return {};
  }

  NodePtr as_type_ref(NodePtr expr, std::string dims) {
    auto t = make(NodeKind::TypeRef, expr->first_token);
    t->text = dotted(*expr);
    t->detail = std::move(dims);
    t->last_token = expr->last_token;
    return t;
  }

  NodePtr postfix() {
    auto e = primary();
    const std::size_t first = e->first_token;
    for (;;) {
      if (at(".")) {
        next();
        if (at("<")) skip_balanced("<", ">");
        if (at("new")) {
          // qualified inner class creation; the qualifier is not retained
          e = creator(first);
          continue;
        }
        if (at("class")) {
          next();
          auto c = make(NodeKind::ClassLiteral, first);
          c->children.push_back(as_type_ref(std::move(e), ""));
          finish(*c);
          e = std::move(c);
          continue;
        }
        if (at("this") || at("super")) {
          const bool is_this = at("this");
          next();
          if (!is_this && at("(")) {
            auto c = make(NodeKind::ConstructorCall, first);
            c->text = "super";
            c->children.push_back(arguments());
            finish(*c);
            e = std::move(c);
            continue;
          }
          auto n = make(is_this ? NodeKind::This : NodeKind::Super, first);
          n->text = dotted(*e);
          finish(*n);
          e = std::move(n);
          continue;
        }
        const std::string name = ident();
        if (at("(")) {
          auto c = make(NodeKind::Call, first);
          c->text = name;
          c->children.push_back(std::move(e));
          c->children.push_back(arguments());
          finish(*c);
          e = std::move(c);
        } else {
          auto f = make(NodeKind::FieldAccess, first);
          f->text = name;
          f->children.push_back(std::move(e));
          finish(*f);
          e = std::move(f);
        }
        continue;
      }
      if (at("[")) {
        if (at("]", 1)) {
          // array type in a class literal or method reference: Foo[].class
          std::string dims;
          while (at("[") && at("]", 1)) {
            next();
            next();
            dims += "[]";
          }
          auto t = as_type_ref(std::move(e), dims);
          if (accept("::")) {
            auto m = make(NodeKind::MethodRef, first);
            m->text = at("new") ? next().text : ident();
            m->children.push_back(std::move(t));
            finish(*m);
            e = std::move(m);
            continue;
          }
          expect(".");
          expect("class");
          auto c = make(NodeKind::ClassLiteral, first);
          c->children.push_back(std::move(t));
          finish(*c);
          e = std::move(c);
          continue;
        }
        next();
        auto a = make(NodeKind::ArrayAccess, first);
        a->children.push_back(std::move(e));
        a->children.push_back(expression());
        expect("]");
        finish(*a);
        e = std::move(a);
        continue;
      }
      if (at("::")) {
        next();
        auto m = make(NodeKind::MethodRef, first);
        m->text = at("new") ? next().text : ident();
        m->children.push_back(std::move(e));
        finish(*m);
        e = std::move(m);
        continue;
      }
      return e;
    }
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  bool no_lambda_ = false;
};

void collect_types(const Node& node, const std::string& prefix, std::vector<TypeHandle>& out) {
  for (const auto& child : node.children) {
    if (!child) continue;
    if (child->kind == NodeKind::TypeDecl) {
      const std::string qn = prefix.empty() ? child->text : prefix + "." + child->text;
      out.push_back({child.get(), qn, child->text});
      collect_types(*child, qn, out);
    } else {
      collect_types(*child, prefix, out);
    }
  }
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out.push_back(c);
  }
  return out;
}

}  // namespace

CompilationUnit parse(std::string source) {
  CompilationUnit unit;
  unit.source = std::move(source);
  unit.tokens = tokenize(unit.source);
  unit.root = Parser(unit.tokens).unit();
  return unit;
}

std::vector<TypeHandle> list_types(const CompilationUnit& unit) {
  std::vector<TypeHandle> out;
  if (unit.root) collect_types(*unit.root, unit.root->text, out);
  return out;
}

TypeHandle find_type(const CompilationUnit& unit, std::string_view class_name) {
  const auto types = list_types(unit);
  for (const auto& t : types) {
    if (t.qualified_name == class_name) return t;
  }
  const TypeHandle* match = nullptr;
  for (const auto& t : types) {
    const auto& qn = t.qualified_name;
    const bool suffix = qn.size() > class_name.size() &&
                        qn.compare(qn.size() - class_name.size(), class_name.size(), class_name) == 0 &&
                        qn[qn.size() - class_name.size() - 1] == '.';
    if (suffix) {
      if (match) throw ClassNotFound("ambiguous class name '" + std::string(class_name) + "'");
      match = &t;
    }
  }
  if (!match) throw ClassNotFound("class '" + std::string(class_name) + "' not declared in unit");
  return *match;
}

std::string type_text(const Node& t) {
  std::string out = t.text;
  if (!t.children.empty()) {
    if (t.text == "?") {
      out += " extends ";
      out += type_text(*t.children.front());
    } else {
      out += "<";
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i) out += ",";
        out += type_text(*t.children[i]);
      }
      out += ">";
    }
  }
  out += t.detail;
  return strip_spaces(out);
}

std::string signature_of(const Node& method) {
  std::string sig = method.text + "(";
  const Node* params = method.child(1);
  bool first = true;
  if (params) {
    for (const auto& p : params->children) {
      if (p->text == "this") continue;
      if (!first) sig += ",";
      first = false;
      sig += type_text(*p->children.front());
      if (p->detail == "...") sig += "...";
    }
  }
  sig += ")";
  return sig;
}

std::vector<const Node*> methods_of(const Node& type_decl) {
  std::vector<const Node*> out;
  for (const auto& m : type_decl.children) {
    if (m->kind == NodeKind::MethodDecl) out.push_back(m.get());
  }
  return out;
}

const Node& find_method(const Node& type_decl, std::string_view signature) {
  const std::string wanted = strip_spaces(signature);
  const auto methods = methods_of(type_decl);
  for (const auto* m : methods) {
    if (signature_of(*m) == wanted) return *m;
  }
  const auto paren = wanted.find('(');
  const std::string name = wanted.substr(0, paren);
  const Node* match = nullptr;
  for (const auto* m : methods) {
    if (m->text == name) {
      if (match) throw MethodNotFound("ambiguous method '" + std::string(signature) + "' in " + type_decl.text);
      match = m;
    }
  }
  if (!match) throw MethodNotFound("method '" + std::string(signature) + "' not found in " + type_decl.text);
  return *match;
}

}  // namespace refpred::java
