#pragma once

// Property checks shared by the acceptance binary and the unit suite.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "tenet/tenet.hpp"

#include "gen.hpp"
#include "oracles.hpp"

namespace tenet::testing {

struct Outcome {
  bool pass = true;
  std::string detail;
  double seconds = 0;
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::filesystem::path data_dir() { return TENET_DATA_DIR; }

// ---- golden replay ------------------------------------------------------

struct ExpectedNode {
  std::string expr;
  std::string tag; // empty for leaves
};

/// The worked refinement tree, in document order, written in the
/// expression grammar.
inline std::vector<ExpectedNode> expected_care_tree() {
  return {
      {R"("harm")", "g"},
      {R"(!"keep healthy")", "d6"},
      {R"(!"enough food")", "d3"},
      {R"("<3 meals a day")", "d9"},
      {R"(!"do"(breakfast))", "d2"},
      {R"(!"remind"(breakfast))", "f"},
      {R"(!PHI(breakfast))", ""},
      {R"(!"do"(lunch))", "d2"},
      {R"(!"remind"(lunch))", "f"},
      {R"(!PHI(lunch))", ""},
      {R"(!"do"(dinner))", "d2"},
      {R"(!"remind"(dinner))", "f"},
      {R"(!PHI(dinner))", ""},
      {R"(!"enough drink")", "d4"},
      {R"("<1.2L/day")", "d7"},
      {R"(!"do"(drinkregularly))", "d2"},
      {R"(!"remind"(drinkregularly))", "f"},
      {R"(!PSI)", ""},
      {R"(!"correct medication")", "d8"},
      {R"("issued != prescribed")", "f"},
      {R"(<>(issued(M) & prescribed(Mp) & M != Mp))", ""},
      {R"(!"keep safe")", "g"},
      {R"(!"monitor")", "g"},
      {R"(!"monitor behaviour")", "f"},
      {R"(!(deteriorated => alerted))", ""},
      {R"(!"monitor critical incident")", "f"},
      {R"(!(emergency => alerted))", ""},
      {R"(!"accompany excursion")", "d5"},
      {R"(!"follow or delegate-by-informing")", "f"},
      {R"(!(leave => (follow | inform)))", ""},
  };
}

/// The eight verification properties of the worked example, macros
/// written out.
inline std::vector<std::string> expected_care_properties() {
  return {
      "[](time(breakfast) -> (eating(breakfast) | () remind(breakfast)))",
      "[](time(lunch) -> (eating(lunch) | () remind(lunch)))",
      "[](time(dinner) -> (eating(dinner) | () remind(dinner)))",
      "[](lastDrink(T) & now(T') & T' > T + 2h -> (P<15m remind(drink) | () remind(drink)))",
      "[]((issued(M) & prescribed(M')) -> M = M')",
      "[](deteriorated -> alerted)",
      "[](emergency -> alerted)",
      "[](leave -> (follow | inform))",
  };
}

/// `a => b` in expected-value text means `[](a -> b)`.
inline Expr parse_expected(std::string text) {
  for (std::size_t at; (at = text.find("=>")) != std::string::npos;) text.replace(at, 2, "->");
  Expr e = parse_expr(text);
  // Rewrite the implications that came from `=>` back under [].
  std::function<Expr(const Expr&)> boxed = [&](const Expr& x) -> Expr {
    if (x.is(Op::Implies)) return Always(x);
    if (x.is(Op::Leaf) || x.is(Op::Macro)) return x;
    std::vector<Expr> ops;
    for (const auto& o : x.operands()) ops.push_back(boxed(o));
    return x.with_operands(std::move(ops));
  };
  return boxed(e);
}

inline Session load_golden_session() {
  const auto dir = data_dir() / "care-o-bot";
  return replay(read_file(dir / "derivation.log.json"), parse_goal_graph(read_file(dir / "goals-fig3.json")),
                parse_rules(read_file(dir / "rules.kb")));
}

inline Outcome check_golden_replay() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream why;
  try {
    Session s = load_golden_session();
    auto props = collect_properties(s);
    out.seconds = seconds_since(t0);

    const auto expected = expected_care_tree();
    const auto ids = s.tree.preorder();
    if (ids.size() != expected.size()) why << "tree has " << ids.size() << " nodes, expected " << expected.size() << "; ";
    std::set<std::string> tags;
    for (std::size_t i = 0; i < std::min(ids.size(), expected.size()); ++i) {
      const RefNode& n = s.tree.node(ids[i]);
      const std::string tag = n.annotation.value_or("");
      tags.insert(tag);
      if (!alpha_equivalent(n.expr, parse_expected(expected[i].expr)) || tag != expected[i].tag)
        why << ids[i] << " is " << print_expr(n.expr) << ":" << tag << ", expected " << expected[i].expr << ":"
            << expected[i].tag << "; ";
    }
    for (const char* t : {"d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "g", "f"})
      if (!tags.count(t)) why << "tag " << t << " missing; ";

    const auto want = expected_care_properties();
    if (props.size() != want.size()) why << props.size() << " properties, expected " << want.size() << "; ";
    for (std::size_t i = 0; i < std::min(props.size(), want.size()); ++i) {
      Expr got = normalize(expand_macros(s.kb, props[i]));
      if (!alpha_equivalent(got, normalize(parse_expr(want[i]))))
        why << "property " << i << " is " << print_expr(props[i]) << "; ";
    }
    if (out.seconds >= 5.0) why << "took " << out.seconds << " s; ";
    out.pass = why.str().empty();
    std::ostringstream d;
    d << s.tree.size() << " nodes, " << props.size() << " properties, " << out.seconds << " s";
    out.detail = out.pass ? d.str() : why.str();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = e.what();
  }
  return out;
}

// ---- goal table soundness ----------------------------------------------

struct TableRow {
  GoalRow row;
  Decomposition decomposition;
  bool strengthened;
  bool special; // goal label is !g and the node is g
  std::string node;
};

inline std::vector<TableRow> table_rows() {
  return {{GoalRow::PositiveOr, Decomposition::Or, false, false, "g"},
          {GoalRow::PositiveAnd, Decomposition::And, false, false, "g"},
          {GoalRow::NegativeOr, Decomposition::Or, true, false, "!g"},
          {GoalRow::NegativeAnd, Decomposition::And, true, false, "!g"},
          {GoalRow::SpecialOr, Decomposition::Or, true, true, "g"},
          {GoalRow::SpecialAnd, Decomposition::And, true, true, "g"}};
}

inline Session table_session(const TableRow& r) {
  Goal parent{"G", parse_expr(r.special ? "!g" : "g"), r.decomposition, r.strengthened, false};
  Goal c1{"G1", parse_expr("g1"), Decomposition::Leaf, false, false};
  Goal c2{"G2", parse_expr("g2"), Decomposition::Leaf, false, false};
  GoalGraph goals = GoalGraph::build({parent, c1, c2}, {{"G", {"G1", "G2"}}});
  return init_session("table", r.node, goals, KnowledgeBase{});
}

inline Outcome check_table_soundness() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream why;
  int checks = 0;
  for (const auto& r : table_rows()) {
    Session s = table_session(r);
    auto moves = enumerate_moves(s, "n0").moves;
    std::vector<Move> row_moves;
    for (auto& m : moves)
      if (m.kind == MoveCase::Goal && m.detail == to_string(r.row)) row_moves.push_back(m);
    if (row_moves.empty()) {
      why << to_string(r.row) << " produced no move; ";
      continue;
    }
    const Expr parent = s.tree.node("n0").expr;
    for (int bits = 0; bits < 8; ++bits) {
      const bool G0 = bits & 1, G1 = bits & 2, G2 = bits & 4;
      // Truth of the goal proposition G; for the special rows G is !g.
      const bool G = r.special ? !G0 : G0;
      const bool combined = r.decomposition == Decomposition::Or ? (G1 || G2) : (G1 && G2);
      // Strengthened goals are equivalent to their decomposition; plain
      // goals are only implied by it.
      const bool admitted = r.strengthened ? G == combined : !combined || G;
      if (!admitted) continue;
      std::vector<Atom> facts;
      if (G0) facts.push_back(Atom::formal("g"));
      if (G1) facts.push_back(Atom::formal("g1"));
      if (G2) facts.push_back(Atom::formal("g2"));
      Trace t;
      t.add(0, facts);
      for (const auto& m : row_moves)
        for (const auto& c : m.children) {
          ++checks;
          if (evaluate(c, t) && !evaluate(parent, t))
            why << to_string(r.row) << ": child " << print_expr(c) << " holds but " << print_expr(parent)
                << " fails at g=" << G0 << " g1=" << G1 << " g2=" << G2 << "; ";
        }
    }
  }
  out.seconds = seconds_since(t0);
  if (out.seconds >= 1.0) why << "took " << out.seconds << " s; ";
  out.pass = why.str().empty();
  out.detail = out.pass ? "6 rows, " + std::to_string(checks) + " child/assignment checks" : why.str();
  return out;
}

// ---- rewrite soundness ---------------------------------------------------

inline const std::vector<Atom>& rewrite_atoms() {
  static const std::vector<Atom> atoms{Atom::formal("p"), Atom::formal("q"), Atom::formal("r", {Const("a")}),
                                       Atom::formal("r", {Const("b")})};
  return atoms;
}

inline Expr random_side(Gen& g, int depth, bool allow_var) {
  if (depth <= 0 || g.chance(0.35)) {
    if (allow_var && g.chance(0.3)) return formal("r", {Var("X")});
    return Leaf(g.pick(rewrite_atoms()));
  }
  auto sub = [&] { return random_side(g, depth - 1, allow_var); };
  switch (g.range(0, 6)) {
  case 0: return Not(sub());
  case 1: return And({sub(), sub()});
  case 2: return Or({sub(), sub()});
  case 3: return Always(sub());
  case 4: return Eventually(sub());
  case 5: return Next(sub());
  default: return PastWithin(Duration::minutes(g.range(3, 12)), sub());
  }
}

/// A random formula with `hole` planted at a random position.
inline Expr plant(Gen& g, const Expr& hole, int depth) {
  if (depth <= 0 || g.chance(0.25)) return hole;
  auto other = [&] { return random_side(g, 1, false); };
  Expr inner = plant(g, hole, depth - 1);
  switch (g.range(0, 8)) {
  case 0: return Not(inner);
  case 1: return g.chance(0.5) ? And({inner, other()}) : And({other(), inner});
  case 2: return g.chance(0.5) ? Or({inner, other()}) : Or({other(), inner});
  case 3: return Implies(inner, other());
  case 4: return Implies(other(), inner);
  case 5: return Always(inner);
  case 6: return Eventually(inner);
  case 7: return Next(inner);
  default: return PastWithin(Duration::minutes(g.range(3, 12)), inner);
  }
}

inline Expr instantiate(const Expr& e, const std::string& c) {
  Substitution s;
  s.bind("X", Const(c));
  return s.apply(e);
}

/// Conjunction of the ground instances of `e` over constants a, b.
inline Expr ground_instances(const Expr& e) {
  auto vars = e.variables();
  std::vector<Expr> out{e};
  for (const auto& v : vars) {
    std::vector<Expr> next;
    for (const auto& x : out)
      for (const char* c : {"a", "b"}) {
        Substitution s;
        s.bind(v, Const(c));
        next.push_back(s.apply(x));
      }
    out = std::move(next);
  }
  return conjoin(out);
}

inline void collect_atoms(const Expr& e, std::map<std::string, Atom>& into) {
  e.for_each_atom([&](const Atom& a) {
    if (!a.is_interpreted()) into.emplace(fact_key(a), a);
  });
}

struct SoundnessRun {
  int applications = 0;
  int counterexamples = 0;
  long long traces = 0;
  std::string first_failure;
};

/// Checks one applied move: on every trace of length <= 4 over the atoms
/// involved, where the governing knowledge holds, each child implies the
/// node.
inline void check_move(const Expr& node, const Move& m, SoundnessRun& run) {
  ++run.applications;
  Expr premise = ground_instances(*m.premise);
  std::map<std::string, Atom> atoms;
  collect_atoms(node, atoms);
  collect_atoms(premise, atoms);
  for (const auto& c : m.children) collect_atoms(c, atoms);
  std::vector<Atom> universe;
  for (auto& [_, a] : atoms) universe.push_back(a);
  for_each_trace(universe, 4, 5, [&](const Trace& t) {
    ++run.traces;
    if (!evaluate(premise, t)) return;
    if (evaluate(node, t)) return;
    for (const auto& c : m.children)
      if (evaluate(c, t)) {
        if (run.counterexamples++ == 0) {
          std::ostringstream d;
          d << "node " << print_expr(node) << ", child " << print_expr(c) << ", premise " << print_expr(premise);
          run.first_failure = d.str();
        }
        return;
      }
  });
}

inline SoundnessRun run_rewrite_soundness(std::uint64_t seed, int min_applications) {
  Gen g(seed);
  SoundnessRun run;
  int guard = 0;
  while (run.applications < min_applications && ++guard < 100000) {
    Session s = [&] {
      if (g.chance(0.6)) {
        // Case 1: one random rule, a node containing one of its sides.
        Expr lhs = random_side(g, 2, true), rhs = random_side(g, 2, true);
        const bool lx = lhs.variables().count("X"), rx = rhs.variables().count("X");
        if (lx != rx) {
          if (lx) lhs = instantiate(lhs, "a");
          else rhs = instantiate(rhs, "b");
        }
        const RuleKind kind = g.chance(0.7) ? RuleKind::Implication : RuleKind::Definition;
        KnowledgeBase kb;
        if (!(kind == RuleKind::Definition && lhs == rhs)) kb.rules.push_back({"r1", kind, lhs, rhs, std::nullopt});
        const Expr side = g.chance(0.5) ? lhs : rhs;
        Expr node = plant(g, instantiate(side, g.chance(0.5) ? "a" : "b"), 3);
        return init_session("soundness", node, GoalGraph{}, kb);
      }
      // Case 2: one goal with two or three children.
      std::vector<Expr> labels{formal("p"), formal("q"), formal("r", {Const("a")}), formal("r", {Const("b")})};
      std::shuffle(labels.begin(), labels.end(), g.engine());
      const bool special = g.chance(0.25);
      const int k = g.range(2, 3);
      Goal top{"top", special ? Not(labels[0]) : labels[0],
               g.chance(0.5) ? Decomposition::And : Decomposition::Or, special || g.chance(0.5), false};
      std::vector<Goal> goals{top};
      std::vector<std::string> kids;
      for (int i = 1; i <= k; ++i) {
        goals.push_back({"c" + std::to_string(i), labels[static_cast<std::size_t>(i)], Decomposition::Leaf, false, false});
        kids.push_back("c" + std::to_string(i));
      }
      Expr node = special ? labels[0] : plant(g, labels[0], 3);
      return init_session("soundness", node, GoalGraph::build(goals, {{"top", kids}}), KnowledgeBase{});
    }();
    const Expr node = s.tree.node("n0").expr;
    for (const auto& m : enumerate_moves(s, "n0").moves) {
      if (m.kind == MoveCase::Formalize) continue;
      check_move(node, m, run);
    }
  }
  return run;
}

inline Outcome check_rewrite_soundness(int min_applications = 200) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  SoundnessRun run = run_rewrite_soundness(20261014, min_applications);
  out.seconds = seconds_since(t0);
  out.pass = run.applications >= min_applications && run.counterexamples == 0;
  std::ostringstream d;
  d << run.applications << " applications, " << run.traces << " traces, " << run.counterexamples << " counterexamples";
  if (!run.first_failure.empty()) d << "; first: " << run.first_failure;
  out.detail = d.str();
  return out;
}

// ---- parser round-trip -------------------------------------------------------

inline Outcome check_parser_roundtrip(int count = 1000) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Gen g(7);
  int failures = 0;
  std::string first;
  for (int i = 0; i < count; ++i) {
    Expr e = random_print_expr(g, 6);
    const std::string text = print_expr(e);
    try {
      if (!(parse_expr(text) == e)) {
        if (failures++ == 0) first = text + " reparsed as " + print_expr(parse_expr(text));
      }
    } catch (const std::exception& ex) {
      if (failures++ == 0) first = text + ": " + ex.what();
    }
  }
  out.seconds = seconds_since(t0);
  out.pass = failures == 0;
  out.detail = std::to_string(count) + " ASTs, " + std::to_string(failures) + " failures" + (first.empty() ? "" : "; first: " + first);
  return out;
}

// ---- unification oracle -------------------------------------------------------

inline Term random_unif_term(Gen& g, int depth) {
  static const std::vector<std::string> leaves{"X", "Y", "a", "b", "c"};
  if (depth <= 0 || g.chance(0.3)) {
    const std::string& l = g.pick(leaves);
    return is_variable_name(l) ? Var(l) : Const(l);
  }
  if (g.chance(0.45)) return Fn("f", {random_unif_term(g, depth - 1)});
  Term a = random_unif_term(g, depth - 1);
  return Fn("g", {a, random_unif_term(g, depth - 1)});
}

inline Outcome check_unification_oracle(int problems = 400) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Gen g(11);
  const auto universe = ground_universe(2);
  int unifiable = 0, failures = 0;
  std::string first;
  auto fail = [&](const std::string& why) {
    if (failures++ == 0) first = why;
  };
  for (int i = 0; i < problems; ++i) {
    Term s = random_unif_term(g, 2), t = random_unif_term(g, 2);
    if (g.chance(0.3)) t = g.chance(0.5) ? Fn("f", {s.is_compound() ? s.args()[0] : s}) : s;
    if (term_depth(t) > 2 || term_depth(s) > 2) continue;
    auto mgu = unify(s, t);
    auto ground = brute_force_unifiers(s, t, universe);
    const std::string pair = print_term(s) + " =? " + print_term(t);
    if (mgu.has_value() != !ground.empty()) {
      fail(pair + ": unify says " + (mgu ? "yes" : "no") + ", search found " + std::to_string(ground.size()));
      continue;
    }
    if (!mgu) continue;
    ++unifiable;
    if (!(mgu->apply(s) == mgu->apply(t))) fail(pair + ": mgu does not unify");
    const Term mx = mgu->apply(Var("X")), my = mgu->apply(Var("Y"));
    for (const auto& a : ground) {
      Assignment binding;
      if (!match_instance(mx, a.at("X"), binding) || !match_instance(my, a.at("Y"), binding)) {
        fail(pair + ": ground unifier X=" + print_term(a.at("X")) + " Y=" + print_term(a.at("Y")) +
             " is not an instance of " + print_subst(*mgu));
        break;
      }
    }
  }
  out.seconds = seconds_since(t0);
  out.pass = failures == 0;
  out.detail = std::to_string(problems) + " problems (" + std::to_string(unifiable) + " unifiable), " +
               std::to_string(universe.size()) + " ground terms, " + std::to_string(failures) + " failures" +
               (first.empty() ? "" : "; first: " + first);
  return out;
}

// ---- normalization semantics ---------------------------------------------------

inline Outcome check_normalization(int formulas = 500, int traces = 50) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Gen g(3);
  Universe u;
  int failures = 0;
  std::string first;
  for (int i = 0; i < formulas; ++i) {
    Expr e = random_ground_expr(g, u, 5);
    Expr n = normalize(e);
    for (int k = 0; k < traces; ++k) {
      Trace t = random_trace(g, u, 6);
      if (evaluate(e, t) != evaluate(n, t)) {
        if (failures++ == 0) first = print_expr(e) + " vs " + print_expr(n);
        break;
      }
    }
  }
  // The medication leaf negated and normalized is the implication form.
  Expr leaf = parse_expr("<>(issued(M) & prescribed(M') & M != M')");
  Expr property = parse_expr("[]((issued(M) & prescribed(M')) -> M = M')");
  const bool medication = alpha_equivalent(normalize(negate_simplify(leaf)), normalize(property));
  if (!medication) first += (first.empty() ? "" : "; ") + std::string("medication normal form differs: ") +
                            print_expr(normalize(negate_simplify(leaf)));
  out.seconds = seconds_since(t0);
  out.pass = failures == 0 && medication;
  out.detail = std::to_string(formulas) + " formulas x " + std::to_string(traces) + " traces, " +
               std::to_string(failures) + " disagreements, medication form " + (medication ? "equal" : "differs") +
               (first.empty() ? "" : "; " + first);
  return out;
}

// ---- persistence -----------------------------------------------------------------

/// Random walk over the worked example: moves, reviews and elicited rules.
inline Session random_session(Gen& g) {
  const auto dir = data_dir() / "care-o-bot";
  Session s = init_session("do not harm", "\"harm\"", parse_goal_graph(read_file(dir / "goals-fig4.json")),
                           parse_rules(read_file(dir / "rules.kb")));
  const int steps = g.range(0, 30);
  for (int i = 0; i < steps; ++i) {
    const int what = g.range(0, 9);
    if (what == 0) {
      const std::string id = "e" + std::to_string(s.kb.rules.size() + 1);
      s = elicit_rule(s, id + ": \"x" + std::to_string(i) + "\" => \"y" + std::to_string(i) + "\"  # step " + std::to_string(i));
      continue;
    }
    if (what == 1) {
      std::vector<std::string> inner;
      for (const auto& id : s.tree.preorder())
        if (!s.tree.node(id).is_leaf()) inner.push_back(id);
      if (inner.empty()) continue;
      const Answer a = g.chance(0.5) ? Answer::Incomplete : Answer::Complete;
      s = record_completeness(s, g.pick(inner), a, "rationale " + std::to_string(g.range(0, 999)));
      continue;
    }
    auto open = frontier(s.tree);
    if (open.empty()) break;
    const std::string node = g.pick(open);
    auto moves = enumerate_moves(s, node).moves;
    if (moves.empty()) continue;
    s = apply_move(s, node, g.pick(moves));
  }
  return s;
}

inline Outcome check_persistence(int sessions = 100) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto root = std::filesystem::temp_directory_path() / ("tenet-persist-" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);
  Gen g(5);
  int failures = 0, crashes = 0;
  std::string first;
  auto fail = [&](const std::string& why) {
    if (failures++ == 0) first = why;
  };
  for (int i = 0; i < sessions; ++i) {
    const std::string name = "s" + std::to_string(i) + ".json";
    SessionStore store(root);
    Session a = random_session(g);
    const std::string hash = store.save(name, a);
    Session back = store.load(name);
    if (!(back == a)) fail(name + ": loaded session differs");
    if (session_hash(back) != hash) fail(name + ": hash changed across save/load");
    if (serialize_session(back) != serialize_session(a)) fail(name + ": document not stable");

    // A later save dies between writing the temp file and the rename.
    Session b = random_session(g);
    SessionStore crashing(root);
    const int mode = i % 3;
    crashing.set_commit_hook([mode](const std::filesystem::path& temp) {
      if (mode == 1) {
        std::ofstream(temp, std::ios::trunc) << "{\"format\": \"tenet-se";
      } else if (mode == 2) {
        std::filesystem::remove(temp);
      }
      throw std::runtime_error("simulated crash");
    });
    try {
      crashing.save(name, b);
      fail(name + ": simulated crash did not interrupt the save");
    } catch (const std::runtime_error&) {
      ++crashes;
    }
    try {
      Session after = store.load(name);
      if (!(after == a) || session_hash(after) != hash) fail(name + ": crash altered the stored session");
    } catch (const std::exception& e) {
      fail(name + ": stored session unreadable after crash: " + e.what());
    }
    // The store recovers: the next save goes through.
    if (store.save(name, b) != session_hash(b) || !(store.load(name) == b)) fail(name + ": save after crash failed");
  }
  std::filesystem::remove_all(root);
  out.seconds = seconds_since(t0);
  out.pass = failures == 0;
  out.detail = std::to_string(sessions) + " sessions, " + std::to_string(crashes) + " simulated crashes, " +
               std::to_string(failures) + " failures" + (first.empty() ? "" : "; first: " + first);
  return out;
}

} // namespace tenet::testing
