#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tenet/expr.hpp"
#include "tenet/printer.hpp"

namespace tenet {

/// Removes every `!!` pair, at any depth.
inline Expr strip_double_negations(const Expr& e) {
  if (e.is(Op::Not) && e.body().is(Op::Not)) return strip_double_negations(e.body().body());
  if (e.operands().empty()) return e;
  std::vector<Expr> ops;
  ops.reserve(e.operands().size());
  for (const auto& o : e.operands()) ops.push_back(strip_double_negations(o));
  return e.with_operands(std::move(ops));
}

/// Negation of `e` with double negations eliminated.
inline Expr negate_simplify(const Expr& e) { return strip_double_negations(Not(e)); }

inline std::string complement_comparison(const std::string& op) {
  static const std::map<std::string, std::string> table{{"=", "!="}, {"!=", "="}, {"<", ">="},
                                                        {">=", "<"}, {">", "<="}, {"<=", ">"}};
  return table.at(op);
}

namespace detail {

inline Expr flatten_sorted(Op op, std::vector<Expr> parts) {
  std::vector<Expr> flat;
  for (auto& p : parts) {
    if (p.is(op))
      flat.insert(flat.end(), p.operands().begin(), p.operands().end());
    else
      flat.push_back(std::move(p));
  }
  std::vector<std::pair<std::string, Expr>> keyed;
  keyed.reserve(flat.size());
  for (auto& f : flat) keyed.emplace_back(print_expr(f), std::move(f));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Expr> sorted;
  sorted.reserve(keyed.size());
  for (auto& k : keyed) sorted.push_back(std::move(k.second));
  return Expr::nary(op, std::move(sorted));
}

inline Expr nnf(const Expr& e, bool negated) {
  switch (e.op()) {
  case Op::Leaf: {
    if (!negated) return e;
    const Atom& a = e.atom();
    if (a.is_interpreted()) return Cmp(complement_comparison(a.name()), a.args()[0], a.args()[1]);
    return Not(e);
  }
  case Op::Macro: throw Error("normalize: unresolved macro " + e.macro_name());
  case Op::Not: return nnf(e.body(), !negated);
  case Op::And:
  case Op::Or: {
    std::vector<Expr> parts;
    for (const auto& o : e.operands()) parts.push_back(nnf(o, negated));
    bool conj = e.is(Op::And) != negated;
    return flatten_sorted(conj ? Op::And : Op::Or, std::move(parts));
  }
  case Op::Implies: return nnf(Or({Not(e.operand(0)), e.operand(1)}), negated);
  case Op::Always: return negated ? Eventually(nnf(e.body(), true)) : Always(nnf(e.body(), false));
  case Op::Eventually: return negated ? Always(nnf(e.body(), true)) : Eventually(nnf(e.body(), false));
  // Strong next and bounded past have no dual in the language; the
  // negation stays on top of them.
  case Op::Next: {
    Expr inner = Next(nnf(e.body(), false));
    return negated ? Not(inner) : inner;
  }
  case Op::PastWithin: {
    Expr inner = PastWithin(e.bound(), nnf(e.body(), false));
    return negated ? Not(inner) : inner;
  }
  }
  return e;
}

inline bool alpha_equal(const Term& a, const Term& b, std::map<std::string, std::string>& fwd,
                        std::map<std::string, std::string>& back) {
  if (a.kind() != b.kind()) return false;
  if (a.is_variable()) {
    auto f = fwd.find(a.name());
    auto r = back.find(b.name());
    if (f == fwd.end() && r == back.end()) {
      fwd.emplace(a.name(), b.name());
      back.emplace(b.name(), a.name());
      return true;
    }
    return f != fwd.end() && r != back.end() && f->second == b.name() && r->second == a.name();
  }
  if (a.name() != b.name() || a.value() != b.value() || a.is_duration() != b.is_duration()) return false;
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!alpha_equal(a.args()[i], b.args()[i], fwd, back)) return false;
  return true;
}

inline bool alpha_equal_args(const std::vector<Term>& a, const std::vector<Term>& b,
                             std::map<std::string, std::string>& fwd, std::map<std::string, std::string>& back) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!alpha_equal(a[i], b[i], fwd, back)) return false;
  return true;
}

inline bool alpha_equal(const Expr& a, const Expr& b, std::map<std::string, std::string>& fwd,
                        std::map<std::string, std::string>& back) {
  if (a.op() != b.op() || a.operands().size() != b.operands().size()) return false;
  if (a.is(Op::Leaf)) {
    const Atom& x = a.atom();
    const Atom& y = b.atom();
    return x.is_informal() == y.is_informal() && x.name() == y.name() && alpha_equal_args(x.args(), y.args(), fwd, back);
  }
  if (a.is(Op::Macro)) return a.macro_name() == b.macro_name() && alpha_equal_args(a.macro_args(), b.macro_args(), fwd, back);
  if (a.is(Op::PastWithin) && a.bound() != b.bound()) return false;
  for (std::size_t i = 0; i < a.operands().size(); ++i)
    if (!alpha_equal(a.operands()[i], b.operands()[i], fwd, back)) return false;
  return true;
}

} // namespace detail

/// Canonical form of a macro-free expression: implications eliminated,
/// negations pushed to atoms (negated comparisons complemented),
/// conjunctions and disjunctions flattened and sorted by printed form.
inline Expr normalize(const Expr& e) { return detail::nnf(e, false); }

/// Structural equality up to a bijective renaming of variables.
inline bool alpha_equivalent(const Expr& a, const Expr& b) {
  std::map<std::string, std::string> fwd, back;
  return detail::alpha_equal(a, b, fwd, back);
}

} // namespace tenet
