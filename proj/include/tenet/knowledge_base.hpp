#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tenet/errors.hpp"
#include "tenet/expr.hpp"
#include "tenet/normalize.hpp"
#include "tenet/occurrence.hpp"
#include "tenet/parser.hpp"
#include "tenet/printer.hpp"
#include "tenet/unify.hpp"

namespace tenet {

enum class RuleKind { Implication, Definition };

/// Domain knowledge: `lhs => rhs` stands for [](lhs -> rhs); `lhs == rhs`
/// is a directional definition, rewritten left to right only.
struct DomainRule {
  std::string id;
  RuleKind kind = RuleKind::Implication;
  Expr lhs;
  Expr rhs;
  std::optional<std::string> note;

  /// The temporal formula the rule asserts.
  Expr as_formula() const {
    if (kind == RuleKind::Implication) return Entails(lhs, rhs);
    return And({Entails(lhs, rhs), Entails(rhs, lhs)});
  }

  friend bool operator==(const DomainRule&, const DomainRule&) = default;
};

/// Restricts a pattern variable to a finite set of constants.
struct Guard {
  std::string variable;
  std::vector<std::string> allowed;

  friend bool operator==(const Guard&, const Guard&) = default;
};

/// Case-0 table entry: informal text and the formula it stands for.
struct FormalizationEntry {
  Expr pattern;
  Expr formula;
  std::vector<Guard> guards;

  friend bool operator==(const FormalizationEntry&, const FormalizationEntry&) = default;
};

struct MacroDef {
  std::string name;
  std::vector<std::string> params;
  Expr body;

  friend bool operator==(const MacroDef&, const MacroDef&) = default;
};

class KnowledgeBase {
public:
  std::vector<DomainRule> rules;
  std::vector<FormalizationEntry> formalizations;
  std::vector<MacroDef> macros;

  const DomainRule* find_rule(std::string_view id) const {
    for (const auto& r : rules)
      if (r.id == id) return &r;
    return nullptr;
  }

  const MacroDef* find_macro(std::string_view name) const {
    for (const auto& m : macros)
      if (m.name == name) return &m;
    return nullptr;
  }

  bool empty() const { return rules.empty() && formalizations.empty() && macros.empty(); }

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

namespace detail {

// Splits a line at the first `#` outside quotes.
inline std::pair<std::string, std::optional<std::string>> split_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') quote = c;
    else if (c == '#') {
      std::string note = collapse_whitespace(line.substr(i + 1));
      return {line.substr(0, i), note.empty() ? std::nullopt : std::optional<std::string>(note)};
    }
  }
  return {line, std::nullopt};
}

inline bool has_informal_atom(const Expr& e) {
  bool found = false;
  e.for_each_atom([&](const Atom& a) { found = found || a.is_informal(); });
  return found;
}

inline void check_rule(const DomainRule& r) {
  if (r.id.empty()) throw KnowledgeBaseError("rule without id");
  if (r.kind == RuleKind::Definition && r.lhs == r.rhs)
    throw KnowledgeBaseError("definition " + r.id + " rewrites an expression to itself");
}

inline DomainRule parse_rule_tokens(ExprParser& p, std::optional<std::string> note) {
  Token id = p.expect(Tok::Ident, "rule id");
  p.expect(Tok::Colon, "':' after rule id");
  Expr lhs = p.expression();
  RuleKind kind;
  if (p.accept(Tok::Entails)) kind = RuleKind::Implication;
  else if (p.accept(Tok::Equiv)) kind = RuleKind::Definition;
  else p.fail("expected '=>' or '=='");
  Expr rhs = p.expression();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return DomainRule{id.text, kind, std::move(lhs), std::move(rhs), std::move(note)};
}

inline MacroDef parse_macro_tokens(ExprParser& p) {
  p.take(); // macro
  Token name = p.expect(Tok::Ident, "macro name");
  if (!is_variable_name(name.text)) throw ParseError("macro names start with an uppercase letter", name.line, name.column);
  std::vector<std::string> params;
  if (p.accept(Tok::LParen)) {
    do {
      Token v = p.expect(Tok::Ident, "macro parameter");
      if (!is_variable_name(v.text)) throw ParseError("macro parameters are variables", v.line, v.column);
      if (std::find(params.begin(), params.end(), v.text) != params.end())
        throw ParseError("repeated macro parameter " + v.text, v.line, v.column);
      params.push_back(v.text);
    } while (p.accept(Tok::Comma));
    p.expect(Tok::RParen, "')'");
  }
  p.expect(Tok::Assign, "':='");
  Expr body = p.expression();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return MacroDef{name.text, std::move(params), std::move(body)};
}

inline FormalizationEntry parse_form_tokens(ExprParser& p) {
  p.take(); // form
  p.expect(Tok::Colon, "':' after form");
  Expr pattern = p.expression();
  p.expect(Tok::LeadsTo, "'~>'");
  Expr formula = p.expression();
  std::vector<Guard> guards;
  if (p.at_keyword("where")) {
    p.take();
    do {
      Token v = p.expect(Tok::Ident, "guard variable");
      if (!p.at_keyword("in")) p.fail("expected 'in'");
      p.take();
      p.expect(Tok::LBrace, "'{'");
      Guard g{v.text, {}};
      do {
        Term c = p.term();
        if (!c.is_constant()) p.fail("guard values are constants");
        g.allowed.push_back(c.name());
      } while (p.accept(Tok::Comma));
      p.expect(Tok::RBrace, "'}'");
      guards.push_back(std::move(g));
    } while (p.accept(Tok::Comma));
  }
  if (!p.at_end()) p.fail("unexpected trailing input");
  return FormalizationEntry{std::move(pattern), std::move(formula), std::move(guards)};
}

inline void check_macro(const MacroDef& m) {
  if (!m.body.is_formal()) throw KnowledgeBaseError("macro " + m.name + " has an informal body");
}

inline void check_formalization(const FormalizationEntry& f) {
  if (!has_informal_atom(f.pattern))
    throw KnowledgeBaseError("formalization pattern " + print_expr(f.pattern) + " has no informal atom");
  if (!f.formula.is_formal())
    throw KnowledgeBaseError("formalization of " + print_expr(f.pattern) + " is not formal");
  auto vars = f.pattern.variables();
  for (const auto& g : f.guards)
    if (!vars.count(g.variable))
      throw KnowledgeBaseError("guard variable " + g.variable + " does not occur in " + print_expr(f.pattern));
}

inline void check_macro_calls(const KnowledgeBase& kb, const Expr& e, const std::string& where) {
  if (e.is(Op::Macro)) {
    const MacroDef* m = kb.find_macro(e.macro_name());
    if (!m) throw KnowledgeBaseError(where + ": unknown macro " + e.macro_name());
    if (m->params.size() != e.macro_args().size())
      throw KnowledgeBaseError(where + ": macro " + e.macro_name() + " expects " + std::to_string(m->params.size()) +
                               " argument(s)");
  }
  for (const auto& o : e.operands()) check_macro_calls(kb, o, where);
}

inline void validate(const KnowledgeBase& kb) {
  std::set<std::string> ids, names;
  for (const auto& r : kb.rules) {
    check_rule(r);
    if (!ids.insert(r.id).second) throw KnowledgeBaseError("duplicate rule id " + r.id);
  }
  for (const auto& m : kb.macros) {
    check_macro(m);
    if (!names.insert(m.name).second) throw KnowledgeBaseError("duplicate macro " + m.name);
  }
  for (const auto& m : kb.macros) check_macro_calls(kb, m.body, "macro " + m.name);
  for (const auto& f : kb.formalizations) {
    check_formalization(f);
    check_macro_calls(kb, f.formula, "formalization of " + print_expr(f.pattern));
  }
}

} // namespace detail

/// Parses a single `id: lhs => rhs` or `id: lhs == rhs` line. A trailing
/// comment becomes the rule's note.
inline DomainRule parse_rule_line(const std::string& line, std::size_t line_no = 1) {
  auto [code, note] = detail::split_comment(line);
  ExprParser p(code, line_no);
  DomainRule r = detail::parse_rule_tokens(p, std::move(note));
  detail::check_rule(r);
  return r;
}

/// Parses a rules file: one declaration per line, `#` comments.
///
///     d1: "remind"(X) => "do"(X)
///     d3: !"enough food" == "<3 meals a day"
///     form: "remind"(X) ~> PHI(X) where X in {breakfast, lunch, dinner}
///     macro PHI(X) := [](time(X) -> (eating(X) | () remind(X)))
inline KnowledgeBase parse_rules(std::string_view text) {
  KnowledgeBase kb;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto [code, note] = detail::split_comment(line);
    if (detail::collapse_whitespace(code).empty()) continue;
    ExprParser p(code, line_no);
    if (p.at_keyword("macro") && p.peek(1).kind == Tok::Ident) {
      kb.macros.push_back(detail::parse_macro_tokens(p));
    } else if (p.at_keyword("form") && p.peek(1).kind == Tok::Colon) {
      kb.formalizations.push_back(detail::parse_form_tokens(p));
    } else {
      DomainRule r = detail::parse_rule_tokens(p, std::move(note));
      if (kb.find_rule(r.id)) throw KnowledgeBaseError("duplicate rule id " + r.id + " on line " + std::to_string(line_no));
      kb.rules.push_back(std::move(r));
    }
  }
  detail::validate(kb);
  return kb;
}

inline std::string print_rule(const DomainRule& r) {
  std::string out = r.id + ": " + print_expr(r.lhs) + (r.kind == RuleKind::Implication ? " => " : " == ") + print_expr(r.rhs);
  if (r.note) out += "  # " + *r.note;
  return out;
}

/// Rules-file text that parses back to an equal knowledge base.
inline std::string print_rules(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& m : kb.macros) {
    out += "macro " + m.name;
    if (!m.params.empty()) {
      out += "(";
      for (std::size_t i = 0; i < m.params.size(); ++i) out += (i ? ", " : "") + m.params[i];
      out += ")";
    }
    out += " := " + print_expr(m.body) + "\n";
  }
  for (const auto& f : kb.formalizations) {
    out += "form: " + print_expr(f.pattern) + " ~> " + print_expr(f.formula);
    for (std::size_t i = 0; i < f.guards.size(); ++i) {
      out += i ? ", " : " where ";
      out += f.guards[i].variable + " in {";
      for (std::size_t j = 0; j < f.guards[i].allowed.size(); ++j)
        out += (j ? ", " : "") + print_term(Const(f.guards[i].allowed[j]));
      out += "}";
    }
    out += "\n";
  }
  for (const auto& r : kb.rules) out += print_rule(r) + "\n";
  return out;
}

/// Returns `kb` extended with `rule`.
inline KnowledgeBase add_rule(const KnowledgeBase& kb, DomainRule rule) {
  detail::check_rule(rule);
  if (kb.find_rule(rule.id)) throw KnowledgeBaseError("duplicate rule id " + rule.id);
  KnowledgeBase out = kb;
  out.rules.push_back(std::move(rule));
  return out;
}

/// A case-1 rewrite: replace the occurrence by the other side of a rule.
struct Case1Move {
  std::string rule_id;
  RuleKind kind = RuleKind::Implication;
  Occurrence occurrence;
  Expr replacement; // instantiated
  Expr result;      // node with the replacement in place
  Expr premise;     // instantiated rule formula justifying the step
};

/// Case-1 moves for `node`, in rule order then leftmost-outermost.
///
/// Implications rewrite their right side at positive occurrences (to the
/// left side) and their left side at negative occurrences (to the right
/// side); definitions rewrite their left side at any polarity.
inline std::vector<Case1Move> match_rules(const KnowledgeBase& kb, const Expr& node) {
  std::vector<Case1Move> out;
  const auto avoid = node.variables();
  for (const auto& rule : kb.rules) {
    Substitution ren = make_renaming(Implies(rule.lhs, rule.rhs).variables(), avoid);
    const Expr lhs = ren.apply(rule.lhs);
    const Expr rhs = ren.apply(rule.rhs);
    const Expr formula = ren.apply(rule.as_formula());

    struct Candidate {
      Occurrence occ;
      const Expr* matched_side;
      const Expr* replacement;
    };
    std::vector<Candidate> cands;
    if (rule.kind == RuleKind::Definition) {
      for (auto& o : find_occurrences(node, lhs)) cands.push_back({std::move(o), &lhs, &rhs});
    } else {
      for (auto& o : find_occurrences(node, rhs))
        if (o.polarity == Polarity::Positive) cands.push_back({std::move(o), &rhs, &lhs});
      for (auto& o : find_occurrences(node, lhs))
        if (o.polarity == Polarity::Negative) cands.push_back({std::move(o), &lhs, &rhs});
      std::stable_sort(cands.begin(), cands.end(),
                       [](const Candidate& a, const Candidate& b) { return a.occ.path < b.occ.path; });
    }
    for (auto& c : cands) {
      const Substitution& theta = c.occ.theta;
      Expr replacement = theta.apply(*c.replacement);
      // A replacement that the matched side still covers under the same
      // bindings would loop without refining anything.
      if (unify(*c.matched_side, replacement, theta)) continue;
      Expr result = theta.apply(replace_at(node, c.occ.path, *c.replacement));
      Expr premise = theta.apply(formula);
      out.push_back(Case1Move{rule.id, rule.kind, std::move(c.occ), std::move(replacement), std::move(result),
                              std::move(premise)});
    }
  }
  return out;
}

/// Case-0 move: the node rewritten into a fully formal expression.
struct Case0Move {
  Expr result;
  std::vector<std::size_t> entries_used; // indices into kb.formalizations
};

namespace detail {

inline bool guard_admits(const FormalizationEntry& f, const Substitution& renaming, const Substitution& theta) {
  for (const auto& g : f.guards) {
    Term bound = theta.apply(renaming.apply(Var(g.variable)));
    if (!bound.is_constant()) return false;
    if (std::find(g.allowed.begin(), g.allowed.end(), bound.name()) == g.allowed.end()) return false;
  }
  return true;
}

inline std::optional<Expr> formalize(const KnowledgeBase& kb, const Expr& e, const std::set<std::string>& avoid,
                                     std::vector<std::size_t>& used) {
  for (std::size_t i = 0; i < kb.formalizations.size(); ++i) {
    const auto& f = kb.formalizations[i];
    Substitution ren = make_renaming(Implies(f.pattern, f.formula).variables(), avoid);
    auto theta = unify(ren.apply(f.pattern), e);
    if (!theta || !guard_admits(f, ren, *theta)) continue;
    used.push_back(i);
    return theta->apply(ren.apply(f.formula));
  }
  if (e.is(Op::Leaf)) {
    if (e.atom().is_informal()) return std::nullopt;
    return e;
  }
  if (e.is(Op::Macro)) return e;
  std::vector<Expr> ops;
  for (const auto& o : e.operands()) {
    auto r = formalize(kb, o, avoid, used);
    if (!r) return std::nullopt;
    ops.push_back(std::move(*r));
  }
  return e.with_operands(std::move(ops));
}

} // namespace detail

/// The formal counterpart of `node`, when every informal atom in it is
/// covered by a formalization entry whose guard admits the binding.
/// Outermost matches win; a compound formalizes when its parts do.
inline std::optional<Case0Move> match_formalizations(const KnowledgeBase& kb, const Expr& node) {
  std::vector<std::size_t> used;
  auto r = detail::formalize(kb, node, node.variables(), used);
  if (!r || !r->is_formal()) return std::nullopt;
  return Case0Move{std::move(*r), std::move(used)};
}

namespace detail {

inline Expr expand(const KnowledgeBase& kb, const Expr& e, int depth) {
  if (depth > 64) throw KnowledgeBaseError("macro expansion does not terminate");
  if (e.is(Op::Macro)) {
    const MacroDef* m = kb.find_macro(e.macro_name());
    if (!m) throw KnowledgeBaseError("unknown macro " + e.macro_name());
    if (m->params.size() != e.macro_args().size())
      throw KnowledgeBaseError("macro " + m->name + " expects " + std::to_string(m->params.size()) + " argument(s), got " +
                               std::to_string(e.macro_args().size()));
    std::set<std::string> arg_vars;
    for (const auto& a : e.macro_args()) a.collect_variables(arg_vars);
    std::set<std::string> locals = m->body.variables();
    for (const auto& p : m->params) locals.erase(p);
    std::set<std::string> avoid = arg_vars;
    avoid.insert(m->params.begin(), m->params.end());
    Substitution ren = make_renaming(locals, avoid);
    std::map<std::string, Term> args;
    for (std::size_t i = 0; i < m->params.size(); ++i) args.emplace(m->params[i], e.macro_args()[i]);
    return expand(kb, substitute_simultaneous(ren.apply(m->body), args), depth + 1);
  }
  if (e.operands().empty()) return e;
  std::vector<Expr> ops;
  for (const auto& o : e.operands()) ops.push_back(expand(kb, o, depth));
  return e.with_operands(std::move(ops));
}

} // namespace detail

/// Replaces every macro call by its instantiated body.
inline Expr expand_macros(const KnowledgeBase& kb, const Expr& e) { return detail::expand(kb, e, 0); }

} // namespace tenet
