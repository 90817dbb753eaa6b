#pragma once

#include <string>

#include "json.hpp"

#include "tenet/errors.hpp"
#include "tenet/goal_graph.hpp"
#include "tenet/knowledge_base.hpp"
#include "tenet/refinement.hpp"
#include "tenet/session_io.hpp"

namespace tenet {

namespace detail {

inline std::optional<Path> event_path(const nlohmann::json& ev) {
  if (!ev.contains("path") || ev.at("path").is_null()) return std::nullopt;
  return ev.at("path").get<Path>();
}

inline Session replay_move(const Session& s, const nlohmann::json& ev) {
  const auto node = ev.at("node").get<std::string>();
  const int kase = ev.at("case").get<int>();
  const auto source = ev.at("source").get<std::string>();
  const auto path = event_path(ev);
  const auto children = ev.at("children").get<std::vector<std::string>>();
  if (!s.tree.contains(node)) throw ReplayError("unknown node " + node);
  for (const auto& m : enumerate_moves(s, node).moves) {
    if (case_number(m.kind) != kase || m.source != source) continue;
    if ((m.occurrence ? std::optional<Path>(m.occurrence->path) : std::nullopt) != path) continue;
    std::vector<std::string> printed;
    for (const auto& c : m.children) printed.push_back(print_expr(c));
    if (printed != children) continue;
    return apply_move(s, node, m);
  }
  throw ReplayError("no case-" + std::to_string(kase) + " move from " + source + " matches at node " + node);
}

inline Goal goal_from_event(const nlohmann::json& g) {
  Goal out{g.at("id").get<std::string>(), parse_expr(g.at("label").get<std::string>())};
  out.decomposition = parse_decomposition(g.value("decomp", std::string("and")));
  out.strengthened = g.value("strengthened", false);
  return out;
}

inline Session replay_event(const Session& s, const nlohmann::json& ev) {
  const auto type = ev.at("type").get<std::string>();
  if (type == "apply" || type == "formalize") return replay_move(s, ev);
  if (type == "add_rule") return elicit_rule(s, ev.at("line").get<std::string>());
  if (type == "insert_phantom")
    return add_phantom_goal(s, ev.at("parent").get<std::string>(), goal_from_event(ev.at("goal")),
                            ev.at("adopt").get<std::vector<std::string>>());
  if (type == "complete")
    return record_completeness(s, ev.at("node").get<std::string>(), parse_answer(ev.at("answer").get<std::string>()),
                               ev.value("rationale", std::string()));
  if (type == "init") throw ReplayError("init may only be the first event");
  throw ReplayError("unknown event type '" + type + "'");
}

} // namespace detail

/// Rebuilds a session by re-running every logged event against the given
/// inputs. Accepts a log document or a bare event array.
inline Session replay(const nlohmann::json& log, const GoalGraph& g0, const KnowledgeBase& kb0) {
  const nlohmann::json& events = log.is_object() ? log.at("events") : log;
  if (!events.is_array() || events.empty()) throw ReplayError("log has no events");
  std::optional<Session> s;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    try {
      if (i == 0) {
        if (ev.at("type").get<std::string>() != "init") throw ReplayError("first event must be init");
        s = init_session(ev.at("tenet").get<std::string>(), ev.at("root").get<std::string>(), g0, kb0);
      } else {
        s = detail::replay_event(*s, ev);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ReplayError("event " + std::to_string(i) + " is malformed: " + e.what());
    } catch (const ReplayError& e) {
      throw ReplayError("event " + std::to_string(i) + ": " + e.what());
    } catch (const Error& e) {
      throw ReplayError("event " + std::to_string(i) + " is inapplicable: " + e.what());
    }
  }
  if (log.is_object() && log.contains("tree_hash")) {
    const auto expected = log.at("tree_hash").get<std::string>();
    const auto actual = tree_hash(s->tree);
    if (expected != actual) throw ReplayError("tree hash mismatch: log expects " + expected + ", replay produced " + actual);
  }
  return *s;
}

inline Session replay(const std::string& log_text, const GoalGraph& g0, const KnowledgeBase& kb0) {
  nlohmann::json log;
  try {
    log = nlohmann::json::parse(log_text);
  } catch (const nlohmann::json::exception& e) {
    throw ReplayError(std::string("log is not valid JSON: ") + e.what());
  }
  return replay(log, g0, kb0);
}

} // namespace tenet
