#include <array>
#include <cctype>
#include <string_view>

#include "refpred/error.hpp"
#include "refpred/java/ast.hpp"

namespace refpred::java {

namespace {

constexpr std::array<std::string_view, 50> kKeywords = {
    "abstract",   "assert",       "boolean",   "break",      "byte",      "case",
    "catch",      "char",         "class",     "const",      "continue",  "default",
    "do",         "double",       "else",      "enum",       "extends",   "final",
    "finally",    "float",        "for",       "goto",       "if",        "implements",
    "import",     "instanceof",   "int",       "interface",  "long",      "native",
    "new",        "package",      "private",   "protected",  "public",    "return",
    "short",      "static",       "strictfp",  "super",      "switch",    "synchronized",
    "this",       "throw",        "throws",    "transient",  "try",       "void",
    "volatile",   "while",
};

// Longest first within each leading character. '>' is deliberately absent
// from multi-character operators.
constexpr std::array<std::string_view, 32> kOperators = {
    "...", "<<=", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "<<", "+=", "-=", "*=", "/=",
    "%=",  "&=",  "|=", "^=", "(",  ")",  "{",  "}",  "[",  "]",  ";",  ",",  ".",  "@",  "=",  "<",
};
constexpr std::string_view kSingleOps = "!~?:+-*/&|^%>";

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool ident_part(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next_token());
    }
    Token end;
    end.kind = TokenKind::End;
    end.line = line_;
    end.column = column_;
    end.offset = src_.size();
    out.push_back(end);
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column_); }

  void skip_trivia() {
    for (;;) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        advance(2);
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) fail("unterminated comment");
        advance(2);
      } else {
        return;
      }
    }
  }

  Token next_token() {
    Token t;
    t.line = line_;
    t.column = column_;
    t.offset = pos_;
    const char c = peek();

    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (ident_part(peek())) advance();
      t.text = std::string(src_.substr(start, pos_ - start));
      if (t.text == "true" || t.text == "false") {
        t.kind = TokenKind::BooleanLiteral;
      } else if (t.text == "null") {
        t.kind = TokenKind::NullLiteral;
      } else {
        t.kind = is_keyword(t.text) ? TokenKind::Keyword : TokenKind::Identifier;
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return number(t);
    }
    if (c == '"') {
      if (peek(1) == '"' && peek(2) == '"') return text_block(t);
      return quoted(t, '"', TokenKind::StringLiteral);
    }
    if (c == '\'') return quoted(t, '\'', TokenKind::CharLiteral);

    for (auto op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        t.kind = TokenKind::Operator;
        t.text = std::string(op);
        advance(op.size());
        return t;
      }
    }
    if (kSingleOps.find(c) != std::string_view::npos) {
      t.kind = TokenKind::Operator;
      t.text = std::string(1, c);
      advance();
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Token number(Token t) {
    const std::size_t start = pos_;
    bool is_float = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance(2);
      while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      if (peek() == '.') {
        is_float = true;
        advance();
        while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      }
      if (peek() == 'p' || peek() == 'P') {
        is_float = true;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    } else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
      advance(2);
      while (peek() == '0' || peek() == '1' || peek() == '_') advance();
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        is_float = true;
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      } else if (peek() == '.' && !ident_start(peek(1)) && peek(1) != '.') {
        // "1." is a valid double literal
        is_float = true;
        advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        is_float = true;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    const char suffix = peek();
    if (suffix == 'f' || suffix == 'F' || suffix == 'd' || suffix == 'D') {
      is_float = true;
      advance();
    } else if (suffix == 'l' || suffix == 'L') {
      advance();
    }
    if (ident_part(peek())) fail("malformed number literal");
    t.kind = is_float ? TokenKind::FloatLiteral : TokenKind::IntegerLiteral;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

  Token quoted(Token t, char quote, TokenKind kind) {
    const std::size_t start = pos_;
    advance();
    while (peek() != quote) {
      if (pos_ >= src_.size() || peek() == '\n') fail("unterminated literal");
      if (peek() == '\\') advance();
      advance();
    }
    advance();
    t.kind = kind;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

  Token text_block(Token t) {
    const std::size_t start = pos_;
    advance(3);
    while (!(peek() == '"' && peek(1) == '"' && peek(2) == '"')) {
      if (pos_ >= src_.size()) fail("unterminated text block");
      if (peek() == '\\') advance();
      advance();
    }
    advance(3);
    t.kind = TokenKind::StringLiteral;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace refpred::java
