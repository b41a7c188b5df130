#include "refpred/metrics/code_metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include "refpred/error.hpp"

namespace refpred::metrics {

using java::Node;
using java::NodeKind;
namespace mod = java::modifier;

namespace {

const std::unordered_set<std::string_view> kNonCouplingTypes = {
    "boolean", "byte",      "char",    "short",   "int",     "long",       "float",
    "double",  "void",      "var",     "?",       "Boolean", "Byte",       "Character",
    "Short",   "Integer",   "Long",    "Float",   "Double",  "Void",       "java.lang.Boolean",
    "java.lang.Byte", "java.lang.Character", "java.lang.Short", "java.lang.Integer",
    "java.lang.Long", "java.lang.Float", "java.lang.Double", "java.lang.Void",
};

bool is_comparison(std::string_view op) {
  return op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=";
}

bool is_math(std::string_view op) {
  return op == "+" || op == "-" || op == "*" || op == "/" || op == "%";
}

bool starts_upper(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

// Names of every variable declared anywhere under `n` (parameters included).
void declared_names(const Node& n, std::set<std::string>& out) {
  switch (n.kind) {
    case NodeKind::VarDeclarator:
    case NodeKind::Param:
    case NodeKind::Catch:
      out.insert(n.text);
      break;
    case NodeKind::InstanceOf:
      if (!n.detail.empty()) out.insert(n.detail);
      break;
    default:
      break;
  }
  for (const auto& c : n.children) {
    if (c) declared_names(*c, out);
  }
}

struct Span {
  std::size_t first;
  std::size_t last;
};

void nested_type_spans(const Node& n, std::vector<Span>& out) {
  for (const auto& c : n.children) {
    if (!c) continue;
    if (c->kind == NodeKind::TypeDecl) {
      out.push_back({c->first_token, c->last_token});
    } else {
      nested_type_spans(*c, out);
    }
  }
}

bool excluded(std::size_t i, const std::vector<Span>& spans) {
  return std::any_of(spans.begin(), spans.end(), [i](const Span& s) { return i >= s.first && i <= s.last; });
}

std::int64_t unique_words(const java::CompilationUnit& unit, std::size_t first, std::size_t last,
                          const std::vector<Span>& skip) {
  std::set<std::string_view> words;
  for (std::size_t i = first; i <= last && i < unit.tokens.size(); ++i) {
    const auto& t = unit.tokens[i];
    if (excluded(i, skip)) continue;
    if (t.kind == java::TokenKind::Identifier || t.is_literal()) words.insert(t.text);
  }
  return static_cast<std::int64_t>(words.size());
}

// Lines holding at least one token; blank and comment-only lines drop out.
std::int64_t token_lines(const java::CompilationUnit& unit, std::size_t first, std::size_t last,
                         const std::vector<Span>& skip) {
  std::set<std::size_t> lines;
  for (std::size_t i = first; i <= last && i < unit.tokens.size(); ++i) {
    const auto& t = unit.tokens[i];
    if (t.kind == java::TokenKind::End || excluded(i, skip)) continue;
    const auto breaks = static_cast<std::size_t>(std::count(t.text.begin(), t.text.end(), '\n'));
    for (std::size_t l = 0; l <= breaks; ++l) lines.insert(t.line + l);
  }
  return static_cast<std::int64_t>(lines.size());
}

// Walks executable code (bodies, initializers) collecting every counter the
// two levels need. One walker instance per owner.
class BodyWalker {
 public:
  BodyWalker(const std::set<std::string>& variables, const std::set<std::string>& fields,
             const std::set<std::string>& static_methods)
      : variables_(variables), fields_(fields), static_methods_(static_methods) {}

  BodyCounters counters;
  std::int64_t decisions = 0;
  std::int64_t invocations = 0;
  std::int64_t static_invocations = 0;
  std::set<std::string> invoked;
  std::set<std::string> fields_used;
  std::vector<const Node*> type_refs;

  void walk_children(const Node& n, std::int64_t depth) {
    for (const auto& c : n.children) {
      if (c) walk(*c, depth);
    }
  }

  void walk(const Node& n, std::int64_t depth) {
    switch (n.kind) {
      case NodeKind::TypeDecl:
        ++counters.inner_classes;
        return;
      case NodeKind::TypeRef:
        return;
      case NodeKind::Block:
        ++depth;
        counters.max_nested_blocks = std::max(counters.max_nested_blocks, depth);
        break;
      case NodeKind::Switch:
        walk(*n.children.front(), depth);
        ++depth;
        counters.max_nested_blocks = std::max(counters.max_nested_blocks, depth);
        for (std::size_t i = 1; i < n.children.size(); ++i) walk(*n.children[i], depth);
        return;
      case NodeKind::SwitchCase:
        if (n.detail == "case") ++decisions;
        break;
      case NodeKind::Return:
        ++counters.returns;
        break;
      case NodeKind::For:
      case NodeKind::ForEach:
      case NodeKind::While:
      case NodeKind::Do:
        ++counters.loops;
        ++decisions;
        break;
      case NodeKind::If:
      case NodeKind::Catch:
      case NodeKind::Conditional:
        ++decisions;
        break;
      case NodeKind::Try:
        ++counters.try_catch;
        break;
      case NodeKind::Binary:
        if (is_comparison(n.text)) ++counters.comparisons;
        if (is_math(n.text)) ++counters.math_operations;
        if (n.text == "&&" || n.text == "||") ++decisions;
        break;
      case NodeKind::Paren:
        ++counters.parenthesized;
        break;
      case NodeKind::Literal:
        if (n.detail == "string") ++counters.string_literals;
        if (n.detail == "int" || n.detail == "float") ++counters.numbers;
        break;
      case NodeKind::Assign:
        ++counters.assignments;
        break;
      case NodeKind::LocalVar:
        type_refs.push_back(n.child(0));
        counters.variables += static_cast<std::int64_t>(n.children.size()) - 1;
        break;
      case NodeKind::Param:
        if (n.child(0)) type_refs.push_back(n.child(0));
        break;
      case NodeKind::MethodDecl:
        // method of an anonymous class body
        type_refs.push_back(n.child(0));
        break;
      case NodeKind::FieldDecl:
        type_refs.push_back(n.child(0));
        break;
      case NodeKind::Lambda:
        ++counters.lambdas;
        break;
      case NodeKind::New:
        type_refs.push_back(n.child(0));
        if (n.children.size() > 2) ++counters.anonymous_classes;
        break;
      case NodeKind::NewArray:
        type_refs.push_back(n.child(0));
        break;
      case NodeKind::Call:
        on_call(n);
        break;
      case NodeKind::Name:
        if (fields_.count(n.text) && !variables_.count(n.text)) fields_used.insert(n.text);
        break;
      case NodeKind::FieldAccess:
        if (n.child(0)->kind == NodeKind::This && n.child(0)->text.empty() && fields_.count(n.text)) {
          fields_used.insert(n.text);
        }
        break;
      default:
        break;
    }
    if (n.kind == NodeKind::Catch) {
      for (const auto& c : n.children) {
        if (c->kind == NodeKind::TypeRef) type_refs.push_back(c.get());
      }
    }
    walk_children(n, depth);
  }

  // Qualifier of a static call, if the call is judged static.
  std::optional<std::string> static_target(const Node& call) const {
    const Node* q = call.child(0);
    if (q->kind == NodeKind::None) {
      if (static_methods_.count(call.text)) return std::string{};
      return std::nullopt;
    }
    if (q->kind == NodeKind::Name) {
      if (starts_upper(q->text) && !variables_.count(q->text) && !fields_.count(q->text)) return q->text;
      return std::nullopt;
    }
    if (q->kind == NodeKind::FieldAccess && starts_upper(q->text)) {
      // package-qualified: java.util.Collections.sort(...)
      std::string path = q->text;
      const Node* cur = q->child(0);
      while (cur && cur->kind == NodeKind::FieldAccess) {
        if (starts_upper(cur->text)) return std::nullopt;
        path = cur->text + "." + path;
        cur = cur->child(0);
      }
      if (cur && cur->kind == NodeKind::Name && !starts_upper(cur->text) && !variables_.count(cur->text) &&
          !fields_.count(cur->text)) {
        return cur->text + "." + path;
      }
    }
    return std::nullopt;
  }

 private:
  void on_call(const Node& n) {
    ++invocations;
    invoked.insert(n.text);
    if (auto target = static_target(n)) {
      ++static_invocations;
      if (!target->empty()) static_qualifiers.insert(*target);
    }
  }

 public:
  std::set<std::string> static_qualifiers;

 private:
  const std::set<std::string>& variables_;
  const std::set<std::string>& fields_;
  const std::set<std::string>& static_methods_;
};

void add_counters(BodyCounters& into, const BodyCounters& c) {
  into.returns += c.returns;
  into.loops += c.loops;
  into.comparisons += c.comparisons;
  into.try_catch += c.try_catch;
  into.parenthesized += c.parenthesized;
  into.string_literals += c.string_literals;
  into.numbers += c.numbers;
  into.assignments += c.assignments;
  into.math_operations += c.math_operations;
  into.variables += c.variables;
  into.max_nested_blocks = std::max(into.max_nested_blocks, c.max_nested_blocks);
  into.anonymous_classes += c.anonymous_classes;
  into.inner_classes += c.inner_classes;
  into.lambdas += c.lambdas;
}

struct ClassContext {
  std::set<std::string> fields;
  std::set<std::string> static_methods;
  std::set<std::string> type_params;
};

ClassContext context_of(const Node& type_decl) {
  ClassContext ctx;
  ctx.type_params.insert(type_decl.type_params.begin(), type_decl.type_params.end());
  for (const auto& m : type_decl.children) {
    if (m->kind == NodeKind::FieldDecl) {
      for (std::size_t i = 1; i < m->children.size(); ++i) ctx.fields.insert(m->children[i]->text);
    } else if (m->kind == NodeKind::MethodDecl) {
      if (m->has(mod::Static)) ctx.static_methods.insert(m->text);
      ctx.type_params.insert(m->type_params.begin(), m->type_params.end());
    } else if (m->kind == NodeKind::EnumConstant) {
      ctx.fields.insert(m->text);
    }
  }
  return ctx;
}

const Node* body_of(const Node& method) {
  const Node* b = method.child(2);
  return b && b->kind == NodeKind::Block ? b : nullptr;
}

// Walks the body of `method` (its parameters included for coupling).
BodyWalker walk_method(const Node& method, const ClassContext& ctx, std::set<std::string>& vars) {
  declared_names(method, vars);
  BodyWalker w(vars, ctx.fields, ctx.static_methods);
  if (const Node* body = body_of(method)) w.walk_children(*body, 0);
  return w;
}

void collect_type_names(const Node* t, std::set<std::string>& out) {
  if (!t) return;
  out.insert(t->text);
  for (const auto& c : t->children) collect_type_names(c.get(), out);
}

}  // namespace

void BodyCounters::append_to(std::vector<double>& out) const {
  for (auto v : {returns, loops, comparisons, try_catch, parenthesized, string_literals, numbers, assignments,
                 math_operations, variables, max_nested_blocks, anonymous_classes, inner_classes, lambdas,
                 unique_words}) {
    out.push_back(static_cast<double>(v));
  }
}

std::vector<double> ClassMetrics::values() const {
  std::vector<double> out;
  out.reserve(37);
  for (auto v : {cbo, wmc, rfc, lcom, loc, total_methods, static_methods, public_methods, private_methods,
                 protected_methods, default_methods, abstract_methods, synchronized_methods, total_fields,
                 static_fields, public_fields, private_fields, protected_fields, default_fields, final_fields,
                 synchronized_fields, static_invocations}) {
    out.push_back(static_cast<double>(v));
  }
  body.append_to(out);
  return out;
}

std::vector<double> MethodMetrics::values() const {
  std::vector<double> out;
  out.reserve(20);
  out.push_back(static_cast<double>(complexity));
  out.push_back(static_cast<double>(loc));
  out.push_back(static_cast<double>(parameters));
  body.append_to(out);
  out.push_back(static_cast<double>(invocations));
  out.push_back(static_cast<double>(static_invocations));
  return out;
}

MethodMetrics method_metrics(const java::CompilationUnit& unit, const Node& type_decl, const Node& method) {
  const auto ctx = context_of(type_decl);
  std::set<std::string> vars;
  auto w = walk_method(method, ctx, vars);

  MethodMetrics m;
  m.complexity = 1 + w.decisions;
  std::vector<Span> skip;
  nested_type_spans(method, skip);
  m.loc = token_lines(unit, method.first_token, method.last_token, skip);
  for (const auto& p : method.child(1)->children) {
    if (p->text != "this") ++m.parameters;
  }
  m.body = w.counters;
  if (const Node* body = body_of(method); body && body->last_token > body->first_token + 1) {
    m.body.unique_words = unique_words(unit, body->first_token + 1, body->last_token - 1, skip);
  }
  m.invocations = w.invocations;
  m.static_invocations = w.static_invocations;
  return m;
}

ClassMetrics class_metrics(const java::CompilationUnit& unit, const Node& type_decl) {
  const auto ctx = context_of(type_decl);
  ClassMetrics cm;
  std::set<std::string> invoked;
  std::set<std::string> coupled;
  std::vector<std::set<std::string>> method_fields;

  auto absorb = [&](BodyWalker& w) {
    add_counters(cm.body, w.counters);
    cm.static_invocations += w.static_invocations;
    invoked.insert(w.invoked.begin(), w.invoked.end());
    for (const Node* t : w.type_refs) collect_type_names(t, coupled);
    coupled.insert(w.static_qualifiers.begin(), w.static_qualifiers.end());
  };

  const std::set<std::string> no_vars;
  for (const auto& member : type_decl.children) {
    const Node& m = *member;
    switch (m.kind) {
      case NodeKind::MethodDecl: {
        ++cm.total_methods;
        if (m.has(mod::Static)) ++cm.static_methods;
        if (m.has(mod::Public)) ++cm.public_methods;
        else if (m.has(mod::Private)) ++cm.private_methods;
        else if (m.has(mod::Protected)) ++cm.protected_methods;
        else ++cm.default_methods;
        if (m.has(mod::Abstract)) ++cm.abstract_methods;
        if (m.has(mod::Synchronized)) ++cm.synchronized_methods;

        std::set<std::string> vars;
        auto w = walk_method(m, ctx, vars);
        cm.wmc += 1 + w.decisions;
        collect_type_names(m.child(0), coupled);
        for (const auto& p : m.child(1)->children) {
          if (p->child(0)) collect_type_names(p->child(0), coupled);
        }
        if (m.detail == "method") method_fields.push_back(w.fields_used);
        absorb(w);
        break;
      }
      case NodeKind::FieldDecl: {
        const auto n = static_cast<std::int64_t>(m.children.size()) - 1;
        cm.total_fields += n;
        if (m.has(mod::Static)) cm.static_fields += n;
        if (m.has(mod::Public)) cm.public_fields += n;
        else if (m.has(mod::Private)) cm.private_fields += n;
        else if (m.has(mod::Protected)) cm.protected_fields += n;
        else cm.default_fields += n;
        if (m.has(mod::Final)) cm.final_fields += n;
        if (m.has(mod::Synchronized)) cm.synchronized_fields += n;
        collect_type_names(m.child(0), coupled);
        BodyWalker w(no_vars, ctx.fields, ctx.static_methods);
        for (std::size_t i = 1; i < m.children.size(); ++i) w.walk_children(*m.children[i], 0);
        absorb(w);
        break;
      }
      case NodeKind::Initializer: {
        std::set<std::string> vars;
        declared_names(m, vars);
        BodyWalker w(vars, ctx.fields, ctx.static_methods);
        w.walk_children(*m.child(0), 0);
        absorb(w);
        break;
      }
      case NodeKind::EnumConstant: {
        BodyWalker w(no_vars, ctx.fields, ctx.static_methods);
        w.walk_children(*m.child(0), 0);
        if (const Node* body = m.child(1)) w.walk_children(*body, 0);
        absorb(w);
        break;
      }
      case NodeKind::TypeDecl:
        ++cm.body.inner_classes;
        break;
      default:
        break;
    }
  }

  for (const auto& t : ctx.type_params) coupled.erase(t);
  coupled.erase(type_decl.text);
  std::int64_t cbo = 0;
  for (const auto& t : coupled) {
    if (!kNonCouplingTypes.count(t) && !t.empty()) ++cbo;
  }
  cm.cbo = cbo;
  cm.rfc = cm.total_methods + static_cast<std::int64_t>(invoked.size());

  std::int64_t disjoint = 0;
  std::int64_t sharing = 0;
  for (std::size_t i = 0; i < method_fields.size(); ++i) {
    for (std::size_t j = i + 1; j < method_fields.size(); ++j) {
      const bool share = std::any_of(method_fields[i].begin(), method_fields[i].end(),
                                     [&](const std::string& f) { return method_fields[j].count(f) > 0; });
      share ? ++sharing : ++disjoint;
    }
  }
  cm.lcom = std::max<std::int64_t>(0, disjoint - sharing);

  std::vector<Span> skip;
  nested_type_spans(type_decl, skip);
  cm.loc = token_lines(unit, type_decl.first_token, type_decl.last_token, skip);
  cm.body.unique_words = unique_words(unit, type_decl.first_token, type_decl.last_token, skip);
  return cm;
}

namespace {

struct Declared {
  std::string name;
  std::size_t token = 0;
  bool parameter = false;
  bool listed = true;
  std::int64_t uses = 0;
};

// Scope-resolving walk over one method: every simple-name expression is bound
// to the innermost visible declaration with that name.
class UsageWalker {
 public:
  std::vector<Declared> decls;

  void method(const Node& m) {
    push();
    for (const auto& p : m.child(1)->children) {
      if (p->text != "this") declare(*p, true);
    }
    if (const Node* body = body_of(m)) walk(*body);
    pop();
  }

 private:
  std::vector<std::vector<std::size_t>> scopes_;
  int nested_class_ = 0;

  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  void declare(const Node& n, bool parameter, const std::string* name = nullptr) {
    decls.push_back({name ? *name : n.text, n.first_token, parameter, nested_class_ == 0, 0});
    scopes_.back().push_back(decls.size() - 1);
  }

  void use(const std::string& name) {
    for (auto s = scopes_.rbegin(); s != scopes_.rend(); ++s) {
      for (auto d = s->rbegin(); d != s->rend(); ++d) {
        if (decls[*d].name == name) {
          ++decls[*d].uses;
          return;
        }
      }
    }
  }

  void walk_all(const Node& n, std::size_t from = 0) {
    for (std::size_t i = from; i < n.children.size(); ++i) {
      if (n.children[i]) walk(*n.children[i]);
    }
  }

  void walk(const Node& n) {
    switch (n.kind) {
      case NodeKind::TypeRef:
        return;
      case NodeKind::Name:
        use(n.text);
        return;
      case NodeKind::Block:
      case NodeKind::Switch:
      case NodeKind::For:
        push();
        walk_all(n);
        pop();
        return;
      case NodeKind::LocalVar:
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          declare(*n.children[i], false);
          walk_all(*n.children[i]);
        }
        return;
      case NodeKind::ForEach:
        push();
        walk(*n.child(1));
        declare(*n.child(0)->child(1), false);
        walk(*n.child(2));
        pop();
        return;
      case NodeKind::Try:
        push();
        walk(*n.child(0));
        walk(*n.child(1));
        pop();
        walk_all(n, 2);
        return;
      case NodeKind::Catch:
        push();
        declare(n, false);
        walk(*n.children.back());
        pop();
        return;
      case NodeKind::Lambda:
        push();
        for (const auto& p : n.child(0)->children) declare(*p, true);
        walk(*n.child(1));
        pop();
        return;
      case NodeKind::InstanceOf:
        walk(*n.child(0));
        if (!n.detail.empty()) declare(n, false, &n.detail);
        return;
      case NodeKind::ClassBody:
      case NodeKind::TypeDecl:
        ++nested_class_;
        push();
        for (const auto& member : n.children) {
          if (member->kind == NodeKind::MethodDecl) {
            push();
            for (const auto& p : member->child(1)->children) declare(*p, true);
            if (const Node* body = body_of(*member)) walk(*body);
            pop();
          } else {
            walk(*member);
          }
        }
        pop();
        --nested_class_;
        return;
      case NodeKind::FieldAccess:
      case NodeKind::MethodRef:
        walk(*n.child(0));
        return;
      default:
        walk_all(n);
        return;
    }
  }
};

}  // namespace

std::vector<VariableDeclaration> variables_of(const Node& method) {
  UsageWalker w;
  w.method(method);
  std::vector<VariableDeclaration> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& d : w.decls) {
    if (!d.listed) continue;
    VariableDeclaration v;
    v.name = d.name;
    v.ordinal = seen[d.name]++;
    v.token = d.token;
    v.parameter = d.parameter;
    v.metrics.usage_count = d.uses;
    out.push_back(std::move(v));
  }
  return out;
}

ClassMetrics extract_class_metrics(std::string_view source, std::string_view class_name) {
  const auto unit = java::parse(std::string(source));
  const auto type = java::find_type(unit, class_name);
  return class_metrics(unit, *type.decl);
}

MethodMetrics extract_method_metrics(std::string_view source, std::string_view class_name,
                                     std::string_view method_signature) {
  const auto unit = java::parse(std::string(source));
  const auto type = java::find_type(unit, class_name);
  const auto& method = java::find_method(*type.decl, method_signature);
  return method_metrics(unit, *type.decl, method);
}

VariableMetrics extract_variable_usage(std::string_view source, std::string_view class_name,
                                       std::string_view method_signature, std::string_view variable_name,
                                       std::size_t ordinal) {
  const auto unit = java::parse(std::string(source));
  const auto type = java::find_type(unit, class_name);
  const auto& method = java::find_method(*type.decl, method_signature);
  for (const auto& v : variables_of(method)) {
    if (v.name == variable_name && v.ordinal == ordinal) return v.metrics;
  }
  throw VariableNotFound("variable '" + std::string(variable_name) + "' not declared in " +
                         std::string(method_signature));
}

std::vector<ClassAnalysis> analyze_unit(const java::CompilationUnit& unit) {
  std::vector<ClassAnalysis> out;
  for (const auto& type : java::list_types(unit)) {
    ClassAnalysis ca;
    ca.qualified_name = type.qualified_name;
    ca.metrics = class_metrics(unit, *type.decl);
    for (const Node* m : java::methods_of(*type.decl)) {
      MethodAnalysis ma;
      ma.signature = java::signature_of(*m);
      ma.metrics = method_metrics(unit, *type.decl, *m);
      ma.variables = variables_of(*m);
      ca.methods.push_back(std::move(ma));
    }
    out.push_back(std::move(ca));
  }
  return out;
}

std::vector<ClassAnalysis> analyze_source(std::string_view source) {
  return analyze_unit(java::parse(std::string(source)));
}

}  // namespace refpred::metrics
