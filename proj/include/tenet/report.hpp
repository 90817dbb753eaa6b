#pragma once

#include <algorithm>
#include <set>
#include <string>

#include "json.hpp"

#include "tenet/errors.hpp"
#include "tenet/knowledge_base.hpp"
#include "tenet/printer.hpp"
#include "tenet/refinement.hpp"
#include "tenet/session_io.hpp"

namespace tenet {

enum class ExportFormat { Props, Report, Log };

inline ExportFormat parse_export_format(const std::string& s) {
  if (s == "props") return ExportFormat::Props;
  if (s == "report") return ExportFormat::Report;
  if (s == "log") return ExportFormat::Log;
  throw SessionError("unknown export format '" + s + "' (expected props, report, log)");
}

/// Ids of rules added during the session rather than shipped in the input.
inline std::set<std::string> elicited_rule_ids(const Session& s) {
  std::set<std::string> out;
  for (const auto& ev : s.log)
    if (ev.value("type", std::string()) == "add_rule") out.insert(parse_rule_line(ev.at("line").get<std::string>()).id);
  return out;
}

namespace detail {

inline std::string provenance_of(const Session& s, const RefNode& n, const std::set<std::string>& elicited) {
  if (!n.annotation) return "";
  if (*n.annotation == "f") return "formalization";
  if (*n.annotation == "g") return s.goals.contains(*n.source) && s.goals.goal(*n.source).phantom ? "phantom" : "goal";
  return elicited.count(*n.source) ? "elicited" : "domain";
}

inline nlohmann::json chain_of(const Session& s, const std::string& leaf, const std::set<std::string>& elicited) {
  auto path = s.tree.ancestors(leaf);
  std::reverse(path.begin(), path.end());
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& id : path) {
    const RefNode& n = s.tree.node(id);
    chain.push_back({{"node", id},
                     {"expr", print_expr(n.expr)},
                     {"annotation", *n.annotation},
                     {"source", *n.source},
                     {"provenance", provenance_of(s, n, elicited)}});
  }
  return chain;
}

} // namespace detail

/// One property per line, in leaf document order.
inline std::string export_props(const Session& s) {
  std::string out;
  for (const auto& p : collect_properties(s)) out += print_expr(p) + "\n";
  return out;
}

/// Properties with the refinement chain that produced each one, plus
/// residual-risk items from refinements reviewed as incomplete.
inline nlohmann::json build_report(const Session& s) {
  const auto props = collect_properties(s);
  const auto leaves = s.tree.leaves();
  const auto elicited = elicited_rule_ids(s);
  nlohmann::json properties = nlohmann::json::array();
  for (std::size_t i = 0; i < leaves.size(); ++i)
    properties.push_back({{"leaf", leaves[i]},
                          {"formula", print_expr(props[i])},
                          {"chain", detail::chain_of(s, leaves[i], elicited)}});
  nlohmann::json residuals = nlohmann::json::array();
  nlohmann::json unreviewed = nlohmann::json::array();
  for (const auto& id : s.tree.preorder()) {
    const RefNode& n = s.tree.node(id);
    if (n.is_leaf()) continue;
    if (n.completeness && n.completeness->answer == Answer::Incomplete)
      residuals.push_back({{"node", id}, {"expr", print_expr(n.expr)}, {"rationale", n.completeness->rationale}});
    else if (!n.completeness || n.completeness->answer == Answer::Unreviewed)
      unreviewed.push_back(id);
  }
  nlohmann::json macros = nlohmann::json::object();
  for (const auto& m : s.kb.macros)
    macros[m.name] = {{"params", m.params}, {"body", print_expr(m.body)}};
  return {{"tenet", s.tenet},
          {"root", print_expr(s.tree.node(s.tree.root()).expr)},
          {"tree_hash", tree_hash(s.tree)},
          {"properties", properties},
          {"macros", macros},
          {"residuals", residuals},
          {"unreviewed", unreviewed}};
}

inline std::string export_report(const Session& s) { return build_report(s).dump(2) + "\n"; }

inline std::string export_log(const Session& s) { return log_document(s).dump(2) + "\n"; }

/// Export bytes shared by the CLI and the HTTP API.
inline std::string export_session(const Session& s, ExportFormat f) {
  switch (f) {
  case ExportFormat::Props: return export_props(s);
  case ExportFormat::Report: return export_report(s);
  case ExportFormat::Log: return export_log(s);
  }
  return "";
}

} // namespace tenet
