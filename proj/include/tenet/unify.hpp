#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "tenet/expr.hpp"
#include "tenet/printer.hpp"

namespace tenet {

/// Finite map from variable names to terms, kept idempotent: no bound
/// variable occurs in any binding's value.
class Substitution {
public:
  Substitution() = default;

  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const noexcept { return bindings_; }

  const Term* find(const std::string& var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  Term apply(const Term& t) const {
    if (bindings_.empty()) return t;
    if (t.is_variable()) {
      const Term* b = find(t.name());
      return b ? *b : t;
    }
    if (!t.is_compound()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(apply(a));
    return Fn(t.name(), std::move(args));
  }

  Expr apply(const Expr& e) const {
    if (bindings_.empty()) return e;
    return e.map_terms([this](const Term& t) { return apply(t); });
  }

  /// Adds var ↦ value. Fails (returns false) on the occurs check or when
  /// var is already bound.
  bool bind(const std::string& var, const Term& value) {
    if (find(var)) return false;
    Term v = apply(value);
    if (v.is_variable() && v.name() == var) return true;
    if (v.contains_variable(var)) return false;
    Substitution single;
    single.bindings_.emplace(var, v);
    for (auto& [_, t] : bindings_) t = single.apply(t);
    bindings_.emplace(var, std::move(v));
    return true;
  }

  friend bool operator==(const Substitution&, const Substitution&) = default;

private:
  std::map<std::string, Term> bindings_;
};

inline Expr apply_subst(const Expr& e, const Substitution& theta) { return theta.apply(e); }
inline Term apply_subst(const Term& t, const Substitution& theta) { return theta.apply(t); }

inline std::string print_subst(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += v + " -> " + print_term(t);
  }
  return out + "}";
}

namespace detail {

inline bool unify_into(const Term& a, const Term& b, Substitution& s) {
  Term x = s.apply(a);
  Term y = s.apply(b);
  if (x.is_variable()) {
    if (y.is_variable() && y.name() == x.name()) return true;
    return s.bind(x.name(), y);
  }
  if (y.is_variable()) return s.bind(y.name(), x);
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
  case TermKind::constant: return x.name() == y.name();
  case TermKind::number: return x.value() == y.value() && x.is_duration() == y.is_duration();
  case TermKind::compound:
    if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
    for (std::size_t i = 0; i < x.args().size(); ++i)
      if (!unify_into(x.args()[i], y.args()[i], s)) return false;
    return true;
  default: return false;
  }
}

inline bool unify_args(const std::vector<Term>& a, const std::vector<Term>& b, Substitution& s) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!unify_into(a[i], b[i], s)) return false;
  return true;
}

inline bool unify_into(const Expr& p, const Expr& q, Substitution& s) {
  if (p.op() != q.op()) return false;
  switch (p.op()) {
  case Op::Leaf:
    if (!p.atom().same_head(q.atom())) return false;
    return unify_args(p.atom().args(), q.atom().args(), s);
  case Op::Macro: return p.macro_name() == q.macro_name() && unify_args(p.macro_args(), q.macro_args(), s);
  case Op::PastWithin:
    if (p.bound() != q.bound()) return false;
    break;
  default: break;
  }
  if (p.operands().size() != q.operands().size()) return false;
  for (std::size_t i = 0; i < p.operands().size(); ++i)
    if (!unify_into(p.operands()[i], q.operands()[i], s)) return false;
  return true;
}

} // namespace detail

/// Most general unifier of two terms, if one exists.
inline std::optional<Substitution> unify(const Term& a, const Term& b, Substitution base = {}) {
  if (!detail::unify_into(a, b, base)) return std::nullopt;
  return base;
}

/// Most general unifier of two expressions. Operators must coincide
/// position by position; variables occur only inside terms.
inline std::optional<Substitution> unify(const Expr& p, const Expr& q, Substitution base = {}) {
  if (!detail::unify_into(p, q, base)) return std::nullopt;
  return base;
}

/// Variable-to-variable renaming that moves each of `vars` found in `avoid`
/// to a fresh name of the form `X_1`, `X_2`, ...
inline Substitution make_renaming(const std::set<std::string>& vars, const std::set<std::string>& avoid) {
  std::set<std::string> used = avoid;
  used.insert(vars.begin(), vars.end());
  Substitution renaming;
  for (const auto& v : vars) {
    if (!avoid.count(v)) continue;
    for (int k = 1;; ++k) {
      std::string fresh = v + "_" + std::to_string(k);
      if (!used.count(fresh)) {
        used.insert(fresh);
        renaming.bind(v, Var(fresh));
        break;
      }
    }
  }
  return renaming;
}

/// Renames the variables of `e` that also occur in `avoid`.
inline Expr rename_apart(const Expr& e, const std::set<std::string>& avoid) {
  return make_renaming(e.variables(), avoid).apply(e);
}

/// Replaces variables by one simultaneous lookup; values are not
/// themselves rewritten.
inline Term substitute_simultaneous(const Term& t, const std::map<std::string, Term>& m) {
  if (t.is_variable()) {
    auto it = m.find(t.name());
    return it == m.end() ? t : it->second;
  }
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute_simultaneous(a, m));
  return Fn(t.name(), std::move(args));
}

inline Expr substitute_simultaneous(const Expr& e, const std::map<std::string, Term>& m) {
  return e.map_terms([&m](const Term& t) { return substitute_simultaneous(t, m); });
}

} // namespace tenet
