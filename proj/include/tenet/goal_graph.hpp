#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tenet/errors.hpp"
#include "tenet/expr.hpp"
#include "tenet/normalize.hpp"
#include "tenet/occurrence.hpp"
#include "tenet/parser.hpp"
#include "tenet/printer.hpp"
#include "tenet/unify.hpp"

namespace tenet {

enum class Decomposition { And, Or, Leaf };

inline const char* to_string(Decomposition d) {
  switch (d) {
  case Decomposition::And: return "and";
  case Decomposition::Or: return "or";
  case Decomposition::Leaf: return "leaf";
  }
  return "leaf";
}

inline Decomposition parse_decomposition(const std::string& s) {
  if (s == "and") return Decomposition::And;
  if (s == "or") return Decomposition::Or;
  if (s == "leaf") return Decomposition::Leaf;
  throw GoalGraphError("unknown decomposition '" + s + "' (expected and, or, leaf)");
}

struct Goal {
  std::string id;
  Expr label;
  Decomposition decomposition = Decomposition::Leaf;
  /// Author asserts the children are necessary, not only sufficient.
  bool strengthened = false;
  bool phantom = false;

  friend bool operator==(const Goal&, const Goal&) = default;
};

/// AND/OR goal DAG. Goals keep their document order; a goal may have
/// several parents.
class GoalGraph {
public:
  GoalGraph() = default;

  /// Validates and builds a graph. `children` maps parent ids to ordered
  /// child ids.
  static GoalGraph build(std::vector<Goal> goals, std::map<std::string, std::vector<std::string>> children) {
    GoalGraph g;
    for (auto& goal : goals) {
      if (goal.id.empty()) throw GoalGraphError("goal without id");
      if (g.goals_.count(goal.id)) throw GoalGraphError("duplicate goal id " + goal.id);
      g.order_.push_back(goal.id);
      g.goals_.emplace(goal.id, std::move(goal));
    }
    for (auto& [parent, kids] : children) {
      if (!g.goals_.count(parent)) throw GoalGraphError("edge from unknown goal " + parent);
      std::set<std::string> seen;
      for (const auto& k : kids) {
        if (!g.goals_.count(k)) throw GoalGraphError("edge from " + parent + " to unknown goal " + k);
        if (!seen.insert(k).second) throw GoalGraphError("goal " + parent + " lists child " + k + " twice");
      }
      if (!kids.empty()) g.edges_[parent] = std::move(kids);
    }
    for (const auto& id : g.order_) {
      const Goal& goal = g.goals_.at(id);
      bool has_kids = !g.children(id).empty();
      if (goal.decomposition == Decomposition::Leaf && has_kids) throw GoalGraphError("leaf goal " + id + " has children");
      if (goal.decomposition != Decomposition::Leaf && !has_kids)
        throw GoalGraphError(std::string(to_string(goal.decomposition)) + " goal " + id + " has no children");
    }
    g.check_acyclic();
    return g;
  }

  bool contains(const std::string& id) const { return goals_.count(id) > 0; }
  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<std::string>& ids() const noexcept { return order_; }

  const Goal& goal(const std::string& id) const {
    auto it = goals_.find(id);
    if (it == goals_.end()) throw GoalGraphError("unknown goal " + id);
    return it->second;
  }

  const std::vector<std::string>& children(const std::string& id) const {
    static const std::vector<std::string> none;
    auto it = edges_.find(id);
    return it == edges_.end() ? none : it->second;
  }

  std::vector<std::string> parents(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& p : order_) {
      const auto& kids = children(p);
      if (std::find(kids.begin(), kids.end(), id) != kids.end()) out.push_back(p);
    }
    return out;
  }

  std::vector<std::string> roots() const {
    std::vector<std::string> out;
    for (const auto& id : order_)
      if (parents(id).empty()) out.push_back(id);
    return out;
  }

  const std::map<std::string, std::vector<std::string>>& edges() const noexcept { return edges_; }

  std::vector<Goal> goals() const {
    std::vector<Goal> out;
    for (const auto& id : order_) out.push_back(goals_.at(id));
    return out;
  }

  friend bool operator==(const GoalGraph&, const GoalGraph&) = default;

private:
  void check_acyclic() const {
    enum class Mark { white, grey, black };
    std::map<std::string, Mark> mark;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
      mark[id] = Mark::grey;
      for (const auto& k : children(id)) {
        if (mark[k] == Mark::grey) throw GoalGraphError("cycle through goal " + k);
        if (mark[k] == Mark::white) visit(k);
      }
      mark[id] = Mark::black;
    };
    for (const auto& id : order_) mark[id] = Mark::white;
    for (const auto& id : order_)
      if (mark[id] == Mark::white) visit(id);
  }

  std::vector<std::string> order_;
  std::map<std::string, Goal> goals_;
  std::map<std::string, std::vector<std::string>> edges_;
};

/// Reads `[{id, label, decomp, strengthened, phantom, children}]`.
inline GoalGraph parse_goal_graph(const nlohmann::json& doc) {
  if (!doc.is_array()) throw GoalGraphError("goal document must be a JSON array");
  std::vector<Goal> goals;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& item : doc) {
    try {
      Goal g{item.at("id").get<std::string>(), parse_expr(item.at("label").get<std::string>())};
      g.decomposition = parse_decomposition(item.value("decomp", std::string("leaf")));
      g.strengthened = item.value("strengthened", false);
      g.phantom = item.value("phantom", false);
      auto kids = item.value("children", std::vector<std::string>{});
      if (!kids.empty()) {
        if (children.count(g.id)) throw GoalGraphError("duplicate goal id " + g.id);
        children[g.id] = kids;
      }
      goals.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw GoalGraphError(std::string("malformed goal entry: ") + e.what());
    }
  }
  return GoalGraph::build(std::move(goals), std::move(children));
}

inline GoalGraph parse_goal_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GoalGraphError(std::string("goal document is not valid JSON: ") + e.what());
  }
  return parse_goal_graph(doc);
}

inline nlohmann::json to_json(const GoalGraph& g) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& goal : g.goals()) {
    out.push_back({{"id", goal.id},
                   {"label", print_expr(goal.label)},
                   {"decomp", to_string(goal.decomposition)},
                   {"strengthened", goal.strengthened},
                   {"phantom", goal.phantom},
                   {"children", g.children(goal.id)}});
  }
  return out;
}

/// Domain knowledge read off a goal decomposition.
struct ImpliedRule {
  std::string goal_id;
  Expr lhs;
  Expr rhs;
  bool reverse = false; // from a strengthened relationship

  Expr as_formula() const { return Entails(lhs, rhs); }
};

namespace detail {

inline std::vector<Expr> child_labels(const GoalGraph& g, const std::string& id, const Substitution& ren) {
  std::vector<Expr> out;
  for (const auto& k : g.children(id)) out.push_back(ren.apply(g.goal(k).label));
  return out;
}

inline std::set<std::string> decomposition_variables(const GoalGraph& g, const std::string& id) {
  std::set<std::string> vars = g.goal(id).label.variables();
  for (const auto& k : g.children(id)) g.goal(k).label.collect_variables(vars);
  return vars;
}

inline std::vector<ImpliedRule> implied_rules_renamed(const GoalGraph& g, const std::string& id, const Substitution& ren) {
  const Goal& goal = g.goal(id);
  auto kids = child_labels(g, id, ren);
  if (kids.empty()) throw GoalGraphError("goal " + id + " has no children");
  Expr label = ren.apply(goal.label);
  std::vector<ImpliedRule> out;
  if (goal.decomposition == Decomposition::Or) {
    for (const auto& k : kids) out.push_back({id, k, label, false});
  } else {
    out.push_back({id, conjoin(kids), label, false});
  }
  if (goal.strengthened) {
    Expr combined = goal.decomposition == Decomposition::Or ? disjoin(kids) : conjoin(kids);
    out.push_back({id, label, combined, true});
  }
  return out;
}

} // namespace detail

/// Forward rules (children suffice for the goal) and, for strengthened
/// goals, the reverse rule (the goal requires its children).
inline std::vector<ImpliedRule> implied_rules(const GoalGraph& g, const std::string& id) {
  return detail::implied_rules_renamed(g, id, Substitution{});
}

enum class GoalRow {
  PositiveOr,  // N[G] -> {N[G1], ..., N[Gk]}
  PositiveAnd, // N[G] -> N[G1 & ... & Gk]
  NegativeOr,  // strengthened, G negative: N[G1 | ... | Gk]
  NegativeAnd, // strengthened, G negative: {N[G1], ..., N[Gk]}
  SpecialOr,   // strengthened, !N = G: !(G1 | ... | Gk)
  SpecialAnd,  // strengthened, !N = G: {!G1, ..., !Gk}
};

inline const char* to_string(GoalRow r) {
  switch (r) {
  case GoalRow::PositiveOr: return "positive-or";
  case GoalRow::PositiveAnd: return "positive-and";
  case GoalRow::NegativeOr: return "negative-or";
  case GoalRow::NegativeAnd: return "negative-and";
  case GoalRow::SpecialOr: return "special-or";
  case GoalRow::SpecialAnd: return "special-and";
  }
  return "";
}

struct Case2Move {
  std::string goal_id;
  GoalRow row = GoalRow::PositiveAnd;
  std::optional<Occurrence> occurrence; // absent for the special case
  std::vector<Expr> children;
  Expr premise; // implied knowledge used, as a formula
};

/// Case-2 moves for `node`, in goal document order.
inline std::vector<Case2Move> match_goals(const GoalGraph& g, const Expr& node) {
  std::vector<Case2Move> out;
  const auto avoid = node.variables();
  for (const auto& id : g.ids()) {
    const Goal& goal = g.goal(id);
    if (g.children(id).empty()) continue;
    Substitution ren = make_renaming(detail::decomposition_variables(g, id), avoid);
    const Expr label = ren.apply(goal.label);
    const auto kids = detail::child_labels(g, id, ren);
    const bool is_or = goal.decomposition == Decomposition::Or;

    std::vector<Expr> premises;
    for (const auto& r : detail::implied_rules_renamed(g, id, ren)) premises.push_back(r.as_formula());
    const Expr premise = conjoin(premises);

    auto occs = find_occurrences(node, label);
    for (const auto& occ : occs) {
      const Substitution& theta = occ.theta;
      auto at = [&](const Expr& replacement) { return theta.apply(replace_at(node, occ.path, replacement)); };
      Case2Move m{id, GoalRow::PositiveAnd, occ, {}, theta.apply(premise)};
      if (occ.polarity == Polarity::Positive) {
        if (is_or) {
          for (const auto& k : kids) {
            Case2Move each = m;
            each.row = GoalRow::PositiveOr;
            each.children = {at(k)};
            out.push_back(std::move(each));
          }
          continue;
        }
        m.row = GoalRow::PositiveAnd;
        m.children = {at(conjoin(kids))};
      } else {
        if (!goal.strengthened) continue;
        if (is_or) {
          m.row = GoalRow::NegativeOr;
          m.children = {at(disjoin(kids))};
        } else {
          m.row = GoalRow::NegativeAnd;
          for (const auto& k : kids) m.children.push_back(at(k));
        }
      }
      out.push_back(std::move(m));
    }

    // The node itself is the negation of the goal.
    if (occs.empty() && goal.strengthened) {
      auto theta = unify(label, negate_simplify(node));
      if (!theta) continue;
      Case2Move m{id, is_or ? GoalRow::SpecialOr : GoalRow::SpecialAnd, std::nullopt, {}, theta->apply(premise)};
      if (is_or) {
        m.children = {negate_simplify(theta->apply(disjoin(kids)))};
      } else {
        for (const auto& k : kids) m.children.push_back(negate_simplify(theta->apply(k)));
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

/// Inserts `fresh` between `parent` and `adopted`, which must currently be
/// children of `parent`. The new goal takes the position of the first
/// adopted child and is marked phantom.
inline GoalGraph insert_phantom(const GoalGraph& g, const std::string& parent, Goal fresh,
                                const std::vector<std::string>& adopted) {
  if (!g.contains(parent)) throw GoalGraphError("unknown parent goal " + parent);
  if (fresh.id.empty() || g.contains(fresh.id)) throw GoalGraphError("goal id '" + fresh.id + "' is not fresh");
  if (adopted.empty()) throw GoalGraphError("a phantom goal must adopt at least one child");
  if (fresh.decomposition == Decomposition::Leaf) fresh.decomposition = Decomposition::And;
  const auto& kids = g.children(parent);
  std::set<std::string> adopt(adopted.begin(), adopted.end());
  if (adopt.size() != adopted.size()) throw GoalGraphError("adopted children repeat");
  for (const auto& a : adopted)
    if (std::find(kids.begin(), kids.end(), a) == kids.end())
      throw GoalGraphError("goal " + a + " is not a child of " + parent);

  std::vector<std::string> parent_kids, fresh_kids;
  bool placed = false;
  for (const auto& k : kids) {
    if (adopt.count(k)) {
      fresh_kids.push_back(k);
      if (!placed) parent_kids.push_back(fresh.id);
      placed = true;
    } else {
      parent_kids.push_back(k);
    }
  }
  fresh.phantom = true;
  auto edges = g.edges();
  edges[parent] = parent_kids;
  edges[fresh.id] = fresh_kids;

  std::vector<Goal> goals = g.goals();
  auto pos = std::find_if(goals.begin(), goals.end(), [&](const Goal& x) { return x.id == parent; });
  goals.insert(pos + 1, std::move(fresh));
  return GoalGraph::build(std::move(goals), std::move(edges));
}

} // namespace tenet
