#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tenet/errors.hpp"
#include "tenet/expr.hpp"
#include "tenet/goal_graph.hpp"
#include "tenet/knowledge_base.hpp"
#include "tenet/normalize.hpp"
#include "tenet/occurrence.hpp"
#include "tenet/parser.hpp"
#include "tenet/printer.hpp"

namespace tenet {

enum class NodeStatus { Open, Formalized };

enum class Answer { Complete, Incomplete, Unreviewed };

inline const char* to_string(NodeStatus s) { return s == NodeStatus::Open ? "open" : "formalized"; }

inline const char* to_string(Answer a) {
  switch (a) {
  case Answer::Complete: return "complete";
  case Answer::Incomplete: return "incomplete";
  case Answer::Unreviewed: return "unreviewed";
  }
  return "unreviewed";
}

inline Answer parse_answer(const std::string& s) {
  if (s == "complete" || s == "c") return Answer::Complete;
  if (s == "incomplete" || s == "i") return Answer::Incomplete;
  if (s == "unreviewed" || s == "u") return Answer::Unreviewed;
  throw SessionError("unknown completeness answer '" + s + "'");
}

/// Whether the children of a node exhaust the ways the node can occur.
struct CompletenessRecord {
  Answer answer = Answer::Unreviewed;
  std::string rationale;

  friend bool operator==(const CompletenessRecord&, const CompletenessRecord&) = default;
};

enum class MoveCase { Formalize = 0, DomainRule = 1, Goal = 2 };

inline int case_number(MoveCase c) { return static_cast<int>(c); }

inline MoveCase move_case_from(int n) {
  if (n < 0 || n > 2) throw SessionError("unknown move case " + std::to_string(n));
  return static_cast<MoveCase>(n);
}

/// One node of the refinement tree. Every behaviour satisfying a child
/// satisfies its parent.
struct RefNode {
  std::string id;
  Expr expr;
  NodeStatus status = NodeStatus::Open;
  std::optional<std::string> annotation; // dN, g or f: how the children were produced
  std::optional<std::string> source;     // rule id, goal id or "f"
  std::optional<std::string> parent;
  std::vector<std::string> children;
  std::optional<CompletenessRecord> completeness;

  bool is_leaf() const noexcept { return children.empty(); }

  friend bool operator==(const RefNode&, const RefNode&) = default;
};

class RefTree {
public:
  RefTree() = default;
  explicit RefTree(Expr root_expr) {
    root_ = "n0";
    nodes_.emplace(root_, RefNode{root_, std::move(root_expr), NodeStatus::Open, {}, {}, {}, {}, {}});
  }

  /// Rebuilds a tree from stored nodes, checking that it is tree shaped.
  static RefTree from_nodes(std::string root, std::vector<RefNode> nodes) {
    RefTree t;
    t.root_ = std::move(root);
    for (auto& n : nodes) {
      std::string id = n.id;
      if (!t.nodes_.emplace(id, std::move(n)).second) throw SessionError("duplicate node id " + id);
    }
    if (!t.nodes_.count(t.root_)) throw SessionError("missing root node " + t.root_);
    if (t.nodes_.at(t.root_).parent) throw SessionError("root node has a parent");
    std::size_t reached = 0;
    std::vector<std::string> stack{t.root_};
    while (!stack.empty()) {
      std::string id = stack.back();
      stack.pop_back();
      ++reached;
      for (const auto& c : t.node(id).children) {
        auto it = t.nodes_.find(c);
        if (it == t.nodes_.end()) throw SessionError("node " + id + " has unknown child " + c);
        if (it->second.parent != id) throw SessionError("node " + c + " does not name " + id + " as parent");
        stack.push_back(c);
      }
    }
    if (reached != t.nodes_.size()) throw SessionError("refinement tree has unreachable or shared nodes");
    return t;
  }

  const std::string& root() const noexcept { return root_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool contains(const std::string& id) const { return nodes_.count(id) > 0; }

  const RefNode& node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw SessionError("unknown node " + id);
    return it->second;
  }
  RefNode& node_mut(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw SessionError("unknown node " + id);
    return it->second;
  }

  /// Node ids in document (pre-)order.
  std::vector<std::string> preorder() const {
    std::vector<std::string> out;
    if (root_.empty()) return out;
    std::vector<std::string> stack{root_};
    while (!stack.empty()) {
      std::string id = stack.back();
      stack.pop_back();
      out.push_back(id);
      const auto& kids = node(id).children;
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  std::vector<std::string> leaves() const {
    std::vector<std::string> out;
    for (const auto& id : preorder())
      if (node(id).is_leaf()) out.push_back(id);
    return out;
  }

  /// Ids from the parent of `id` up to the root.
  std::vector<std::string> ancestors(const std::string& id) const {
    std::vector<std::string> out;
    for (auto p = node(id).parent; p; p = node(*p).parent) out.push_back(*p);
    return out;
  }

  std::string add_child(const std::string& parent, Expr expr, NodeStatus status) {
    std::string id = "n" + std::to_string(nodes_.size());
    nodes_.emplace(id, RefNode{id, std::move(expr), status, {}, {}, parent, {}, {}});
    node_mut(parent).children.push_back(id);
    return id;
  }

  friend bool operator==(const RefTree&, const RefTree&) = default;

private:
  std::string root_;
  std::map<std::string, RefNode> nodes_;
};

/// A candidate refinement of an open leaf.
struct Move {
  MoveCase kind = MoveCase::Formalize;
  std::string source;     // rule id, goal id, or "f"
  std::string annotation; // provenance tag recorded on the refined node
  std::optional<Occurrence> occurrence;
  std::vector<Expr> children;
  std::optional<Expr> premise; // rule or implied goal knowledge, for cases 1 and 2
  bool definition = false;
  std::string detail; // human-readable description of the matched rule side / table row
  std::uint64_t revision = 0;

  /// Identity used to recognise a move across enumerations.
  bool same_as(const Move& o) const {
    auto path = [](const Move& m) { return m.occurrence ? std::optional<Path>(m.occurrence->path) : std::nullopt; };
    return kind == o.kind && source == o.source && path(*this) == path(o) && children == o.children;
  }
};

struct MoveList {
  std::vector<Move> moves;
  /// No move applies: extend the goal graph (phantom goal) or elicit a rule.
  bool needs_expansion = false;
};

/// The evolving derivation: tenet, inputs as currently extended, the tree
/// and the event log whose first entry is the initialisation.
struct Session {
  std::string tenet;
  KnowledgeBase kb;
  GoalGraph goals;
  RefTree tree;
  std::vector<nlohmann::json> log;

  std::uint64_t revision() const noexcept { return log.size(); }

  friend bool operator==(const Session&, const Session&) = default;
};

inline Session init_session(const std::string& tenet, const Expr& negated_tenet, GoalGraph g, KnowledgeBase kb) {
  if (detail::collapse_whitespace(tenet).empty()) throw SessionError("tenet text is empty");
  Session s{tenet, std::move(kb), std::move(g), RefTree(negated_tenet), {}};
  s.log.push_back({{"type", "init"}, {"tenet", tenet}, {"root", print_expr(negated_tenet)}});
  return s;
}

inline Session init_session(const std::string& tenet, const std::string& negated_tenet, GoalGraph g, KnowledgeBase kb) {
  return init_session(tenet, parse_expr(negated_tenet), std::move(g), std::move(kb));
}

/// Open leaves in document order.
inline std::vector<std::string> frontier(const RefTree& t) {
  std::vector<std::string> out;
  for (const auto& id : t.leaves())
    if (t.node(id).status == NodeStatus::Open) out.push_back(id);
  return out;
}

/// Double negations removed, and a top-level `!(C1 & ... & Ck)` broken
/// into `!C1, ..., !Ck`.
inline std::vector<Expr> split_children(const std::vector<Expr>& produced) {
  std::vector<Expr> out;
  for (const auto& p : produced) {
    Expr e = strip_double_negations(p);
    if (e.is(Op::Not) && e.body().is(Op::And)) {
      for (const auto& c : e.body().operands()) out.push_back(negate_simplify(c));
    } else {
      out.push_back(std::move(e));
    }
  }
  return out;
}

namespace detail {

inline void require_open_leaf(const Session& s, const std::string& id) {
  const RefNode& n = s.tree.node(id);
  if (!n.is_leaf()) throw SessionError("node " + id + " is already refined");
  if (n.status != NodeStatus::Open) throw SessionError("node " + id + " is formalized");
}

inline bool loops(const Session& s, const std::string& id, const std::vector<Expr>& children) {
  std::vector<const Expr*> seen{&s.tree.node(id).expr};
  for (const auto& a : s.tree.ancestors(id)) seen.push_back(&s.tree.node(a).expr);
  for (const auto& c : children)
    for (const Expr* e : seen)
      if (c == *e) return true;
  return false;
}

} // namespace detail

/// Moves for an open leaf: case 0 (formalize) first, then case 1 (domain
/// rules, rule order), then case 2 (goals, document order). A move whose
/// child repeats the node or one of its ancestors is left out.
inline MoveList enumerate_moves(const Session& s, const std::string& id) {
  detail::require_open_leaf(s, id);
  const Expr& node = s.tree.node(id).expr;
  MoveList out;

  if (auto f = match_formalizations(s.kb, node)) {
    Move m;
    m.kind = MoveCase::Formalize;
    m.source = "f";
    m.annotation = "f";
    m.children = {strip_double_negations(f->result)};
    m.detail = "formalize";
    m.revision = s.revision();
    out.moves.push_back(std::move(m));
  }

  for (auto& r : match_rules(s.kb, node)) {
    Move m;
    m.kind = MoveCase::DomainRule;
    m.source = r.rule_id;
    m.annotation = r.rule_id;
    m.children = split_children({r.result});
    m.definition = r.kind == RuleKind::Definition;
    m.detail = std::string(to_string(r.occurrence.polarity)) + " occurrence of " + print_expr(r.occurrence.matched) +
               " replaced by " + print_expr(r.replacement);
    m.premise = std::move(r.premise);
    m.occurrence = std::move(r.occurrence);
    m.revision = s.revision();
    if (detail::loops(s, id, m.children)) continue;
    out.moves.push_back(std::move(m));
  }

  for (auto& gm : match_goals(s.goals, node)) {
    Move m;
    m.kind = MoveCase::Goal;
    m.source = gm.goal_id;
    m.annotation = "g";
    m.children = split_children(gm.children);
    m.detail = to_string(gm.row);
    m.premise = std::move(gm.premise);
    m.occurrence = std::move(gm.occurrence);
    m.revision = s.revision();
    if (detail::loops(s, id, m.children)) continue;
    out.moves.push_back(std::move(m));
  }

  out.needs_expansion = out.moves.empty();
  return out;
}

inline nlohmann::json move_event(const std::string& node, const Move& m) {
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : m.children) children.push_back(print_expr(c));
  nlohmann::json ev{{"type", m.kind == MoveCase::Formalize ? "formalize" : "apply"},
                    {"node", node},
                    {"case", case_number(m.kind)},
                    {"source", m.source},
                    {"children", children}};
  ev["path"] = m.occurrence ? nlohmann::json(m.occurrence->path) : nlohmann::json(nullptr);
  return ev;
}

/// Attaches the children of `m` under `id`. The move must come from
/// enumerate_moves on this very session revision.
inline Session apply_move(const Session& s, const std::string& id, const Move& m) {
  if (m.revision != s.revision())
    throw StaleMoveError("move was computed at revision " + std::to_string(m.revision) + ", session is at " +
                         std::to_string(s.revision()));
  detail::require_open_leaf(s, id);
  const auto current = enumerate_moves(s, id).moves;
  if (std::none_of(current.begin(), current.end(), [&](const Move& c) { return c.same_as(m); }))
    throw StaleMoveError("move is not available for node " + id);

  Session out = s;
  const NodeStatus child_status = m.kind == MoveCase::Formalize ? NodeStatus::Formalized : NodeStatus::Open;
  for (const auto& c : m.children) out.tree.add_child(id, c, child_status);
  RefNode& n = out.tree.node_mut(id);
  n.annotation = m.annotation;
  n.source = m.source;
  if (m.definition) n.completeness = CompletenessRecord{Answer::Complete, "complete by definition (" + m.source + ")"};
  out.log.push_back(move_event(id, m));
  return out;
}

inline Session record_completeness(const Session& s, const std::string& id, Answer answer, const std::string& rationale) {
  if (s.tree.node(id).is_leaf()) throw SessionError("node " + id + " has no refinements to review");
  if (answer == Answer::Incomplete && detail::collapse_whitespace(rationale).empty())
    throw SessionError("an incomplete refinement needs a rationale");
  Session out = s;
  out.tree.node_mut(id).completeness = CompletenessRecord{answer, rationale};
  out.log.push_back({{"type", "complete"}, {"node", id}, {"answer", to_string(answer)}, {"rationale", rationale}});
  return out;
}

/// Extends the session's knowledge base with an elicited rule.
inline Session elicit_rule(const Session& s, DomainRule rule) {
  Session out = s;
  std::string line = print_rule(rule);
  out.kb = add_rule(s.kb, std::move(rule));
  out.log.push_back({{"type", "add_rule"}, {"line", line}});
  return out;
}

inline Session elicit_rule(const Session& s, const std::string& line) { return elicit_rule(s, parse_rule_line(line)); }

/// Inserts a phantom goal into the session's goal graph.
inline Session add_phantom_goal(const Session& s, const std::string& parent, Goal fresh,
                                const std::vector<std::string>& adopted) {
  Session out = s;
  nlohmann::json goal{{"id", fresh.id},
                      {"label", print_expr(fresh.label)},
                      {"decomp", to_string(fresh.decomposition == Decomposition::Leaf ? Decomposition::And
                                                                                      : fresh.decomposition)},
                      {"strengthened", fresh.strengthened}};
  out.goals = insert_phantom(s.goals, parent, std::move(fresh), adopted);
  out.log.push_back({{"type", "insert_phantom"}, {"parent", parent}, {"goal", goal}, {"adopt", adopted}});
  return out;
}

/// Negated leaves, in document order, with macros left symbolic.
inline std::vector<Expr> collect_properties(const Session& s) {
  auto open = frontier(s.tree);
  if (!open.empty()) {
    std::string ids;
    for (const auto& id : open) ids += (ids.empty() ? "" : ", ") + id;
    throw SessionError("open leaves remain: " + ids);
  }
  std::vector<Expr> out;
  for (const auto& id : s.tree.leaves()) out.push_back(negate_simplify(s.tree.node(id).expr));
  return out;
}

} // namespace tenet
