#pragma once

#include <string>
#include <vector>

#include "tenet/expr.hpp"
#include "tenet/unify.hpp"

namespace tenet {

/// Child indices from the root of an expression.
using Path = std::vector<std::size_t>;

enum class Polarity { Positive, Negative };

inline Polarity flip(Polarity p) { return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive; }

inline const char* to_string(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

/// Negation bodies and implication antecedents flip polarity; every
/// other position, temporal operators included, preserves it.
inline bool flips_polarity(const Expr& parent, std::size_t child) {
  return parent.is(Op::Not) || (parent.is(Op::Implies) && child == 0);
}

struct Occurrence {
  Path path;
  Polarity polarity = Polarity::Positive;
  Expr matched;
  Substitution theta;
};

inline std::string print_path(const Path& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + "]";
}

inline const Expr& subexpr_at(const Expr& e, const Path& path) {
  const Expr* cur = &e;
  for (std::size_t idx : path) {
    if (idx >= cur->operands().size()) throw PathError("invalid path " + print_path(path));
    cur = &cur->operands()[idx];
  }
  return *cur;
}

inline Polarity polarity_at(const Expr& e, const Path& path) {
  Polarity pol = Polarity::Positive;
  const Expr* cur = &e;
  for (std::size_t idx : path) {
    if (idx >= cur->operands().size()) throw PathError("invalid path " + print_path(path));
    if (flips_polarity(*cur, idx)) pol = flip(pol);
    cur = &cur->operands()[idx];
  }
  return pol;
}

namespace detail {

inline Expr replace_from(const Expr& e, const Path& path, std::size_t depth, const Expr& replacement) {
  if (depth == path.size()) return replacement;
  std::size_t idx = path[depth];
  if (idx >= e.operands().size()) throw PathError("invalid path " + print_path(path));
  std::vector<Expr> ops = e.operands();
  ops[idx] = replace_from(ops[idx], path, depth + 1, replacement);
  return e.with_operands(std::move(ops));
}

inline void collect_occurrences(const Expr& e, const Expr& pattern, Path& path, Polarity pol,
                                std::vector<Occurrence>& out) {
  if (auto theta = unify(pattern, e)) out.push_back(Occurrence{path, pol, e, std::move(*theta)});
  for (std::size_t i = 0; i < e.operands().size(); ++i) {
    path.push_back(i);
    collect_occurrences(e.operands()[i], pattern, path, flips_polarity(e, i) ? flip(pol) : pol, out);
    path.pop_back();
  }
}

} // namespace detail

/// `e` with the subexpression at `path` replaced.
inline Expr replace_at(const Expr& e, const Path& path, const Expr& replacement) {
  return detail::replace_from(e, path, 0, replacement);
}

/// Every position whose subexpression unifies with `pattern`, in pre-order
/// (leftmost-outermost first). Callers rename the pattern apart from the
/// haystack when both may contain variables.
inline std::vector<Occurrence> find_occurrences(const Expr& haystack, const Expr& pattern) {
  std::vector<Occurrence> out;
  Path path;
  detail::collect_occurrences(haystack, pattern, path, Polarity::Positive, out);
  return out;
}

} // namespace tenet
