#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tenet/errors.hpp"
#include "tenet/expr.hpp"
#include "tenet/printer.hpp"

namespace tenet {

enum class Tok {
  End,
  Ident,     // identifier; uppercase-initial ones are variables or macros
  Quoted,    // 'constant'
  Phrase,    // "informal phrase"
  Number,    // integer, duration when `unit` is set
  Past,      // P<15m
  LParen,
  RParen,
  Comma,
  Bang,
  Amp,
  Bar,
  Arrow,     // ->
  Box,       // []
  Diamond,   // <>
  Circle,    // ()
  Cmp,       // = != < > <= >=
  Plus,
  Colon,
  Entails,   // =>
  Equiv,     // ==
  LeadsTo,   // ~>
  Assign,    // :=
  LBrace,
  RBrace,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  std::optional<TimeUnit> unit;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Tokenizer for the expression grammar and the rules file syntax.
class Lexer {
public:
  Lexer(std::string_view src, std::size_t first_line = 1) : src_(src), line_(first_line) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

private:
  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col_); }

  static std::optional<TimeUnit> unit_of(char c) {
    switch (c) {
    case 'm': return TimeUnit::minute;
    case 'h': return TimeUnit::hour;
    case 'd': return TimeUnit::day;
    default: return std::nullopt;
    }
  }

  // Reads digits plus an optional single-letter unit.
  void read_number(Token& t, bool negative) {
    std::int64_t v = 0;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected digits");
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      advance();
    }
    t.number = negative ? -v : v;
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      auto u = unit_of(peek());
      if (!u || detail::is_ident_char(peek(1))) fail("malformed number or duration");
      if (negative) fail("negative duration");
      t.unit = u;
      advance();
    }
  }

  std::string read_quoted(char q, const char* what) {
    advance();
    std::string s;
    for (;;) {
      char c = peek();
      if (pos_ >= src_.size()) fail(std::string("unterminated ") + what);
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail(std::string("unterminated ") + what);
        s.push_back(peek());
        advance();
        continue;
      }
      if (c == q) {
        advance();
        return s;
      }
      s.push_back(c);
      advance();
    }
  }

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;

    auto simple = [&](Tok k, std::size_t n) {
      t.kind = k;
      t.text = std::string(src_.substr(pos_, n));
      advance(n);
      return t;
    };

    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (detail::is_ident_char(peek())) advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      if (t.text == "P" && peek() == '<' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
        t.kind = Tok::Past;
        read_number(t, false);
        if (!t.unit) fail("bounded past operator needs a time unit");
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Number;
      read_number(t, false);
      return t;
    }
    switch (c) {
    case '"':
      t.kind = Tok::Phrase;
      t.text = read_quoted('"', "quoted phrase");
      return t;
    case '\'':
      t.kind = Tok::Quoted;
      t.text = read_quoted('\'', "quoted constant");
      return t;
    case '(': {
      std::size_t k = 1;
      while (peek(k) == ' ' || peek(k) == '\t') ++k;
      if (peek(k) == ')') return simple(Tok::Circle, k + 1);
      return simple(Tok::LParen, 1);
    }
    case ')': return simple(Tok::RParen, 1);
    case ',': return simple(Tok::Comma, 1);
    case '{': return simple(Tok::LBrace, 1);
    case '}': return simple(Tok::RBrace, 1);
    case '&': return simple(Tok::Amp, 1);
    case '|': return simple(Tok::Bar, 1);
    case '+': return simple(Tok::Plus, 1);
    case '!':
      if (peek(1) == '=') return simple(Tok::Cmp, 2);
      return simple(Tok::Bang, 1);
    case '[':
      if (peek(1) == ']') return simple(Tok::Box, 2);
      break;
    case '<':
      if (peek(1) == '>') return simple(Tok::Diamond, 2);
      if (peek(1) == '=') return simple(Tok::Cmp, 2);
      return simple(Tok::Cmp, 1);
    case '>':
      if (peek(1) == '=') return simple(Tok::Cmp, 2);
      return simple(Tok::Cmp, 1);
    case '=':
      if (peek(1) == '>') return simple(Tok::Entails, 2);
      if (peek(1) == '=') return simple(Tok::Equiv, 2);
      return simple(Tok::Cmp, 1);
    case '-':
      if (peek(1) == '>') return simple(Tok::Arrow, 2);
      if (std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
        t.kind = Tok::Number;
        read_number(t, true);
        return t;
      }
      break;
    case '~':
      if (peek(1) == '>') return simple(Tok::LeadsTo, 2);
      break;
    case ':':
      if (peek(1) == '=') return simple(Tok::Assign, 2);
      return simple(Tok::Colon, 1);
    default: break;
    }
    fail(std::string("unknown operator '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_ = 1;
};

/// Recursive-descent parser over a token stream.
///
/// Precedence, loosest first: `->` (right associative), `|`, `&`, then the
/// prefix operators `! [] <> () P<d`.
class ExprParser {
public:
  explicit ExprParser(std::string_view src, std::size_t first_line = 1) : toks_(Lexer(src, first_line).tokenize()) {}

  /// Parses one expression and stops at the first token that cannot extend it.
  Expr expression() { return implication(); }

  Term term() {
    Term t = term_primary();
    while (accept(Tok::Plus)) {
      if (accept(Tok::LParen)) {
        Term inner = term();
        expect(Tok::RParen, "')'");
        t = Term::plus(std::move(t), std::move(inner));
      } else {
        t = Term::plus(std::move(t), term_primary());
      }
    }
    return t;
  }

  std::vector<Term> term_list() {
    std::vector<Term> out;
    do {
      out.push_back(term());
    } while (accept(Tok::Comma));
    return out;
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  bool at_end() const { return at(Tok::End); }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return take();
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    if (t.kind == Tok::Phrase) found = "phrase \"" + t.text + "\"";
    throw ParseError("syntax error: " + what + ", found " + found, t.line, t.column);
  }

private:
  Expr implication() {
    Expr lhs = disjunction();
    if (accept(Tok::Arrow)) return Implies(std::move(lhs), implication());
    return lhs;
  }

  Expr disjunction() {
    std::vector<Expr> ops{conjunction()};
    while (accept(Tok::Bar)) ops.push_back(conjunction());
    return disjoin(std::move(ops));
  }

  Expr conjunction() {
    std::vector<Expr> ops{unary()};
    while (accept(Tok::Amp)) ops.push_back(unary());
    return conjoin(std::move(ops));
  }

  Expr unary() {
    switch (peek().kind) {
    case Tok::Bang: take(); return Not(unary());
    case Tok::Box: take(); return Always(unary());
    case Tok::Diamond: take(); return Eventually(unary());
    case Tok::Circle: take(); return Next(unary());
    case Tok::Past: {
      Token t = take();
      return PastWithin(Duration::of(t.number, *t.unit), unary());
    }
    default: return primary();
    }
  }

  static bool continues_term(Tok k) { return k == Tok::Cmp || k == Tok::Plus; }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::LParen: {
      take();
      Expr e = expression();
      expect(Tok::RParen, "')'");
      return e;
    }
    case Tok::Phrase: {
      std::string phrase = take().text;
      if (detail::collapse_whitespace(phrase).empty()) fail("empty informal phrase");
      std::vector<Term> args;
      if (accept(Tok::LParen)) {
        args = term_list();
        expect(Tok::RParen, "')'");
      }
      return informal(phrase, std::move(args));
    }
    case Tok::Ident:
      if (is_variable_name(t.text) && !continues_term(peek(1).kind)) {
        std::string name = take().text;
        std::vector<Term> args;
        if (accept(Tok::LParen)) {
          args = term_list();
          expect(Tok::RParen, "')'");
        }
        return Macro(std::move(name), std::move(args));
      }
      return atom_or_comparison();
    case Tok::Quoted:
    case Tok::Number: return atom_or_comparison();
    default: fail("expected a formula");
    }
  }

  Expr atom_or_comparison() {
    const Token start = peek();
    Term lhs = term();
    if (at(Tok::Cmp)) {
      std::string op = take().text;
      Term rhs = term();
      return Cmp(std::move(op), std::move(lhs), std::move(rhs));
    }
    if (lhs.is_constant()) return formal(lhs.name());
    if (lhs.is_compound() && !lhs.is_plus()) return formal(lhs.name(), lhs.args());
    throw ParseError("syntax error: term '" + print_term(lhs) + "' used as a formula", start.line, start.column);
  }

  Term term_primary() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::Ident: {
      Token id = take();
      if (is_variable_name(id.text)) {
        if (at(Tok::LParen)) fail("variables take no arguments");
        return Var(id.text);
      }
      return maybe_compound(id.text);
    }
    case Tok::Quoted: {
      Token q = take();
      if (q.text.empty()) throw ParseError("empty quoted constant", q.line, q.column);
      return maybe_compound(q.text);
    }
    case Tok::Number: {
      Token n = take();
      if (n.unit) return Term::duration(Duration::of(n.number, *n.unit));
      return Num(n.number);
    }
    default: fail("expected a term");
    }
  }

  Term maybe_compound(std::string name) {
    if (accept(Tok::LParen)) {
      auto args = term_list();
      expect(Tok::RParen, "')'");
      return Fn(std::move(name), std::move(args));
    }
    return Const(std::move(name));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

/// Parses a complete expression in the ASCII grammar.
inline Expr parse_expr(std::string_view text) {
  ExprParser p(text);
  Expr e = p.expression();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return e;
}

inline Term parse_term(std::string_view text) {
  ExprParser p(text);
  Term t = p.term();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return t;
}

} // namespace tenet
