#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tenet/errors.hpp"
#include "tenet/expr.hpp"
#include "tenet/printer.hpp"

namespace tenet {

/// Proposition key of a ground atom in a trace valuation. Informal phrases
/// are keyed case-insensitively.
inline std::string fact_key(const Atom& a) {
  if (a.is_informal()) return print_atom(Atom::informal(detail::lowercase(a.name()), a.args()));
  return print_atom(a);
}

struct TraceState {
  std::int64_t time = 0; // minutes
  std::set<std::string> facts;

  bool holds(const Atom& a) const { return facts.count(fact_key(a)) > 0; }
};

/// Finite, timestamped behaviour. Timestamps are strictly increasing.
class Trace {
public:
  Trace() = default;

  Trace& add(std::int64_t time, const std::vector<Atom>& true_atoms = {}) {
    if (!states_.empty() && time <= states_.back().time) throw Error("trace timestamps must strictly increase");
    TraceState s{time, {}};
    for (const auto& a : true_atoms) {
      if (!a.is_ground()) throw Error("trace facts must be ground");
      s.facts.insert(fact_key(a));
    }
    states_.push_back(std::move(s));
    return *this;
  }

  /// Convenience overload taking leaf expressions.
  Trace& add(std::int64_t time, std::initializer_list<Expr> true_leaves) {
    std::vector<Atom> atoms;
    for (const auto& e : true_leaves) atoms.push_back(e.atom());
    return add(time, atoms);
  }

  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  const TraceState& operator[](std::size_t i) const { return states_.at(i); }
  const std::vector<TraceState>& states() const noexcept { return states_; }

private:
  std::vector<TraceState> states_;
};

namespace detail {

using Value = std::variant<std::int64_t, std::string>;

inline Value eval_term(const Term& t) {
  switch (t.kind()) {
  case TermKind::variable: throw EvalError("evaluate: unbound variable " + t.name());
  case TermKind::number: return t.value();
  case TermKind::constant: return t.name();
  case TermKind::compound: {
    if (t.is_plus()) {
      Value a = eval_term(t.args()[0]);
      Value b = eval_term(t.args()[1]);
      if (!std::holds_alternative<std::int64_t>(a) || !std::holds_alternative<std::int64_t>(b))
        throw EvalError("evaluate: addition over non-numbers in " + print_term(t));
      return std::get<std::int64_t>(a) + std::get<std::int64_t>(b);
    }
    if (!t.is_ground()) throw EvalError("evaluate: non-ground term " + print_term(t));
    return print_term(t);
  }
  }
  return std::int64_t{0};
}

inline bool eval_comparison(const Atom& a) {
  Value l = eval_term(a.args()[0]);
  Value r = eval_term(a.args()[1]);
  const std::string& op = a.name();
  if (op == "=") return l == r;
  if (op == "!=") return l != r;
  if (!std::holds_alternative<std::int64_t>(l) || !std::holds_alternative<std::int64_t>(r))
    throw EvalError("evaluate: ordering comparison over non-numbers in " + print_atom(a));
  std::int64_t x = std::get<std::int64_t>(l), y = std::get<std::int64_t>(r);
  if (op == "<") return x < y;
  if (op == ">") return x > y;
  if (op == "<=") return x <= y;
  return x >= y;
}

} // namespace detail

/// Finite-trace LTL truth of `e` at state `at`.
///
/// [] and <> range over the remaining states, () is strong (false in the
/// final state), P<d f holds when f held at some state j <= at with
/// time[at] - time[j] < d. Informal atoms are opaque propositions.
inline bool evaluate(const Expr& e, const Trace& t, std::size_t at) {
  if (at >= t.size()) throw EvalError("evaluate: state index out of range");
  switch (e.op()) {
  case Op::Leaf: {
    const Atom& a = e.atom();
    if (!a.is_ground()) throw EvalError("evaluate: non-ground atom " + print_atom(a));
    if (a.is_interpreted()) return detail::eval_comparison(a);
    return t[at].holds(a);
  }
  case Op::Macro: throw EvalError("evaluate: unexpanded macro " + e.macro_name());
  case Op::Not: return !evaluate(e.body(), t, at);
  case Op::And:
    for (const auto& o : e.operands())
      if (!evaluate(o, t, at)) return false;
    return true;
  case Op::Or:
    for (const auto& o : e.operands())
      if (evaluate(o, t, at)) return true;
    return false;
  case Op::Implies: return !evaluate(e.operand(0), t, at) || evaluate(e.operand(1), t, at);
  case Op::Always:
    for (std::size_t j = at; j < t.size(); ++j)
      if (!evaluate(e.body(), t, j)) return false;
    return true;
  case Op::Eventually:
    for (std::size_t j = at; j < t.size(); ++j)
      if (evaluate(e.body(), t, j)) return true;
    return false;
  case Op::Next: return at + 1 < t.size() && evaluate(e.body(), t, at + 1);
  case Op::PastWithin: {
    const std::int64_t now = t[at].time;
    for (std::size_t j = at + 1; j-- > 0;) {
      if (now - t[j].time >= e.bound().in_minutes()) break;
      if (evaluate(e.body(), t, j)) return true;
    }
    return false;
  }
  }
  return false;
}

inline bool evaluate(const Expr& e, const Trace& t) { return evaluate(e, t, 0); }

} // namespace tenet
