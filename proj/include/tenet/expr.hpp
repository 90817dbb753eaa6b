#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tenet/errors.hpp"
#include "tenet/term.hpp"

namespace tenet {

namespace detail {

inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

inline std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

} // namespace detail

inline constexpr std::array<std::string_view, 6> comparison_predicates{"=", "!=", "<", ">", "<=", ">="};

inline bool is_comparison(std::string_view pred) {
  return std::find(comparison_predicates.begin(), comparison_predicates.end(), pred) != comparison_predicates.end();
}

/// Either a formal predicate applied to terms or an informal phrase with
/// optional arguments.
class Atom {
public:
  static Atom formal(std::string predicate, std::vector<Term> args = {}) {
    if (predicate.empty()) throw Error("empty predicate");
    bool interpreted = is_comparison(predicate);
    if (interpreted && args.size() != 2) throw Error("comparison '" + predicate + "' takes exactly two arguments");
    return Atom(false, std::move(predicate), std::move(args), interpreted);
  }

  static Atom informal(std::string_view phrase, std::vector<Term> args = {}) {
    std::string p = detail::collapse_whitespace(phrase);
    if (p.empty()) throw Error("empty informal phrase");
    return Atom(true, std::move(p), std::move(args), false);
  }

  bool is_informal() const noexcept { return informal_; }
  bool is_formal() const noexcept { return !informal_; }
  bool is_interpreted() const noexcept { return interpreted_; }
  /// Predicate name for formal atoms, whitespace-collapsed phrase otherwise.
  const std::string& name() const noexcept { return name_; }
  const std::vector<Term>& args() const noexcept { return args_; }

  /// Identity used for matching: phrases compare case-insensitively.
  std::string match_key() const { return informal_ ? detail::lowercase(name_) : name_; }

  bool same_head(const Atom& other) const {
    return informal_ == other.informal_ && args_.size() == other.args_.size() && match_key() == other.match_key();
  }

  bool is_ground() const {
    return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_ground(); });
  }

  Atom with_args(std::vector<Term> args) const { return Atom(informal_, name_, std::move(args), interpreted_); }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.informal_ == b.informal_ && a.name_ == b.name_ && a.args_ == b.args_;
  }

private:
  Atom(bool informal, std::string name, std::vector<Term> args, bool interpreted)
      : informal_(informal), interpreted_(interpreted), name_(std::move(name)), args_(std::move(args)) {}

  bool informal_;
  bool interpreted_;
  std::string name_;
  std::vector<Term> args_;
};

enum class Op { Leaf, Not, And, Or, Implies, Always, Eventually, Next, PastWithin, Macro };

/// Hybrid expression over informal phrases and formal LTL atoms.
///
/// Immutable and cheap to copy. Child positions used by paths are the
/// operand indices: 0 for unary operators, 0/1 for antecedent/consequent,
/// i for the i-th conjunct or disjunct.
class Expr {
public:
  static Expr leaf(Atom a) { return Expr(Rep{Op::Leaf, {std::move(a)}, {}, {}, {}, {}}); }
  static Expr unary(Op op, Expr body) {
    if (op != Op::Not && op != Op::Always && op != Op::Eventually && op != Op::Next)
      throw Error("not a unary operator");
    return Expr(Rep{op, {}, {std::move(body)}, {}, {}, {}});
  }
  static Expr nary(Op op, std::vector<Expr> operands) {
    if (op != Op::And && op != Op::Or) throw Error("not an n-ary operator");
    if (operands.size() < 2) throw Error("conjunction/disjunction needs at least two operands");
    return Expr(Rep{op, {}, std::move(operands), {}, {}, {}});
  }
  static Expr implies(Expr lhs, Expr rhs) {
    return Expr(Rep{Op::Implies, {}, {std::move(lhs), std::move(rhs)}, {}, {}, {}});
  }
  static Expr past_within(Duration bound, Expr body) {
    return Expr(Rep{Op::PastWithin, {}, {std::move(body)}, bound, {}, {}});
  }
  static Expr macro(std::string name, std::vector<Term> args = {}) {
    if (!is_variable_name(name)) throw Error("macro names start with an uppercase letter: '" + name + "'");
    return Expr(Rep{Op::Macro, {}, {}, {}, std::move(name), std::move(args)});
  }

  Op op() const noexcept { return rep_->op; }
  bool is(Op o) const noexcept { return op() == o; }

  const Atom& atom() const {
    if (!is(Op::Leaf)) throw Error("not a leaf");
    return rep_->atom.front();
  }
  const std::vector<Expr>& operands() const noexcept { return rep_->operands; }
  const Expr& operand(std::size_t i) const { return rep_->operands.at(i); }
  const Expr& body() const { return operand(0); }
  Duration bound() const noexcept { return rep_->bound; }
  const std::string& macro_name() const noexcept { return rep_->macro_name; }
  const std::vector<Term>& macro_args() const noexcept { return rep_->macro_args; }

  /// Same operator and annotations with new operands.
  Expr with_operands(std::vector<Expr> ops) const {
    if (ops.size() != operands().size()) throw Error("operand count mismatch");
    Rep r = *rep_;
    r.operands = std::move(ops);
    return Expr(std::move(r));
  }

  /// Rewrites every term occurring in atoms and macro arguments.
  Expr map_terms(const std::function<Term(const Term&)>& f) const {
    if (is(Op::Leaf)) {
      std::vector<Term> args;
      args.reserve(atom().args().size());
      for (const auto& t : atom().args()) args.push_back(f(t));
      return leaf(atom().with_args(std::move(args)));
    }
    if (is(Op::Macro)) {
      std::vector<Term> args;
      for (const auto& t : macro_args()) args.push_back(f(t));
      return macro(macro_name(), std::move(args));
    }
    std::vector<Expr> ops;
    ops.reserve(operands().size());
    for (const auto& o : operands()) ops.push_back(o.map_terms(f));
    return with_operands(std::move(ops));
  }

  void for_each_atom(const std::function<void(const Atom&)>& f) const {
    if (is(Op::Leaf)) f(atom());
    for (const auto& o : operands()) o.for_each_atom(f);
  }

  void collect_variables(std::set<std::string>& out) const {
    if (is(Op::Leaf))
      for (const auto& t : atom().args()) t.collect_variables(out);
    if (is(Op::Macro))
      for (const auto& t : macro_args()) t.collect_variables(out);
    for (const auto& o : operands()) o.collect_variables(out);
  }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    collect_variables(out);
    return out;
  }

  /// True when no informal atom occurs. Macro bodies are formal by
  /// construction of the knowledge base.
  bool is_formal() const {
    if (is(Op::Leaf)) return atom().is_formal();
    return std::all_of(operands().begin(), operands().end(), [](const Expr& e) { return e.is_formal(); });
  }

  bool contains_macro() const {
    if (is(Op::Macro)) return true;
    return std::any_of(operands().begin(), operands().end(), [](const Expr& e) { return e.contains_macro(); });
  }

  bool is_ground() const { return variables().empty(); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& o : operands()) n += o.size();
    return n;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.rep_ == b.rep_) return true;
    const Rep& x = *a.rep_;
    const Rep& y = *b.rep_;
    return x.op == y.op && x.atom == y.atom && x.bound == y.bound && x.macro_name == y.macro_name &&
           x.macro_args == y.macro_args && x.operands == y.operands;
  }

private:
  struct Rep {
    Op op;
    std::vector<Atom> atom; // exactly one element for leaves
    std::vector<Expr> operands;
    Duration bound;
    std::string macro_name;
    std::vector<Term> macro_args;
  };
  explicit Expr(Rep r) : rep_(std::make_shared<const Rep>(std::move(r))) {}
  std::shared_ptr<const Rep> rep_;
};

// Construction helpers, named after the connectives they build.

inline Expr Leaf(Atom a) { return Expr::leaf(std::move(a)); }
inline Expr formal(std::string predicate, std::vector<Term> args = {}) {
  return Expr::leaf(Atom::formal(std::move(predicate), std::move(args)));
}
inline Expr informal(std::string_view phrase, std::vector<Term> args = {}) {
  return Expr::leaf(Atom::informal(phrase, std::move(args)));
}
inline Expr Cmp(std::string op, Term lhs, Term rhs) {
  if (!is_comparison(op)) throw Error("unknown comparison '" + op + "'");
  return formal(std::move(op), {std::move(lhs), std::move(rhs)});
}
inline Expr Not(Expr e) { return Expr::unary(Op::Not, std::move(e)); }
inline Expr And(std::vector<Expr> ops) { return Expr::nary(Op::And, std::move(ops)); }
inline Expr Or(std::vector<Expr> ops) { return Expr::nary(Op::Or, std::move(ops)); }
inline Expr Implies(Expr a, Expr b) { return Expr::implies(std::move(a), std::move(b)); }
inline Expr Always(Expr e) { return Expr::unary(Op::Always, std::move(e)); }
inline Expr Eventually(Expr e) { return Expr::unary(Op::Eventually, std::move(e)); }
inline Expr Next(Expr e) { return Expr::unary(Op::Next, std::move(e)); }
inline Expr PastWithin(Duration d, Expr e) { return Expr::past_within(d, std::move(e)); }
inline Expr Macro(std::string name, std::vector<Term> args = {}) { return Expr::macro(std::move(name), std::move(args)); }

/// A ⇒ B, i.e. [](A -> B).
inline Expr Entails(Expr a, Expr b) { return Always(Implies(std::move(a), std::move(b))); }

/// Conjunction of one or more operands; a single operand is returned as is.
inline Expr conjoin(std::vector<Expr> ops) {
  if (ops.empty()) throw Error("empty conjunction");
  if (ops.size() == 1) return std::move(ops.front());
  return And(std::move(ops));
}

inline Expr disjoin(std::vector<Expr> ops) {
  if (ops.empty()) throw Error("empty disjunction");
  if (ops.size() == 1) return std::move(ops.front());
  return Or(std::move(ops));
}

} // namespace tenet
