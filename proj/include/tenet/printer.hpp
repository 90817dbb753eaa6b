#pragma once

#include <ostream>
#include <string>

#include "tenet/expr.hpp"

namespace tenet {

namespace detail {

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

/// Lowercase-initial identifier that the lexer reads back as one token.
inline bool is_plain_lower_identifier(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

inline std::string quote(const std::string& s, char q) {
  std::string out(1, q);
  for (char c : s) {
    if (c == q || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back(q);
  return out;
}

inline std::string print_name(const std::string& s) { return is_plain_lower_identifier(s) ? s : quote(s, '\''); }

// Binding strength of the top operator, higher binds tighter.
inline int precedence(const Expr& e) {
  switch (e.op()) {
  case Op::Implies: return 1;
  case Op::Or: return 2;
  case Op::And: return 3;
  case Op::Leaf: return 5;
  case Op::Macro: return 5;
  default: return 4;
  }
}

} // namespace detail

inline std::string print_term(const Term& t) {
  switch (t.kind()) {
  case TermKind::variable: return t.name();
  case TermKind::constant: return detail::print_name(t.name());
  case TermKind::number:
    if (t.is_duration()) {
      auto [mag, unit] = Duration::minutes(t.value()).display();
      return std::to_string(mag) + unit_suffix(unit);
    }
    return std::to_string(t.value());
  case TermKind::compound: {
    if (t.is_plus()) {
      const Term& rhs = t.args()[1];
      std::string r = print_term(rhs);
      if (rhs.is_plus()) r = "(" + r + ")";
      return print_term(t.args()[0]) + " + " + r;
    }
    std::string out = detail::print_name(t.name()) + "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ", ";
      out += print_term(t.args()[i]);
    }
    return out + ")";
  }
  }
  return {};
}

inline std::string print_args(const std::vector<Term>& args) {
  if (args.empty()) return {};
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += print_term(args[i]);
  }
  return out + ")";
}

inline std::string print_atom(const Atom& a) {
  if (a.is_interpreted()) return print_term(a.args()[0]) + " " + a.name() + " " + print_term(a.args()[1]);
  if (a.is_informal()) return detail::quote(a.name(), '"') + print_args(a.args());
  return detail::print_name(a.name()) + print_args(a.args());
}

inline std::string print_expr(const Expr& e) {
  auto wrap = [](const Expr& sub, bool parens) {
    std::string s = print_expr(sub);
    return parens ? "(" + s + ")" : s;
  };
  auto prefix = [&](const char* op, const Expr& body) {
    bool parens = detail::precedence(body) < 4 || (body.is(Op::Leaf) && body.atom().is_interpreted());
    return std::string(op) + wrap(body, parens);
  };
  switch (e.op()) {
  case Op::Leaf: return print_atom(e.atom());
  case Op::Macro: return e.macro_name() + print_args(e.macro_args());
  case Op::Not: return prefix("!", e.body());
  case Op::Always: return prefix("[]", e.body());
  case Op::Eventually: return prefix("<>", e.body());
  case Op::Next: return prefix("() ", e.body());
  case Op::PastWithin: {
    auto [mag, unit] = e.bound().display();
    std::string op = "P<" + std::to_string(mag) + unit_suffix(unit) + " ";
    return prefix(op.c_str(), e.body());
  }
  case Op::And:
  case Op::Or: {
    const int self = detail::precedence(e);
    const char* sep = e.is(Op::And) ? " & " : " | ";
    std::string out;
    for (std::size_t i = 0; i < e.operands().size(); ++i) {
      if (i) out += sep;
      out += wrap(e.operands()[i], detail::precedence(e.operands()[i]) <= self);
    }
    return out;
  }
  case Op::Implies:
    return wrap(e.operand(0), detail::precedence(e.operand(0)) <= 1) + " -> " + print_expr(e.operand(1));
  }
  return {};
}

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << print_term(t); }
inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << print_expr(e); }

} // namespace tenet
