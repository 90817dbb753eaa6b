#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "tenet/errors.hpp"
#include "tenet/goal_graph.hpp"
#include "tenet/knowledge_base.hpp"
#include "tenet/parser.hpp"
#include "tenet/printer.hpp"
#include "tenet/refinement.hpp"

namespace tenet {

inline constexpr const char* kSessionFormat = "tenet-session/1";
inline constexpr const char* kLogFormat = "tenet-log/1";

/// Lowercase hex SHA-256 of `data`.
inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

inline nlohmann::json to_json(const RefNode& n) {
  nlohmann::json j{{"id", n.id}, {"expr", print_expr(n.expr)}, {"status", to_string(n.status)}, {"children", n.children}};
  j["annotation"] = n.annotation ? nlohmann::json(*n.annotation) : nlohmann::json(nullptr);
  j["source"] = n.source ? nlohmann::json(*n.source) : nlohmann::json(nullptr);
  j["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
  if (n.completeness)
    j["completeness"] = {{"answer", to_string(n.completeness->answer)}, {"rationale", n.completeness->rationale}};
  else
    j["completeness"] = nullptr;
  return j;
}

/// Nodes in document order.
inline nlohmann::json to_json(const RefTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& id : t.preorder()) nodes.push_back(to_json(t.node(id)));
  return {{"root", t.root()}, {"nodes", nodes}};
}

namespace detail {

inline std::optional<std::string> opt_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

inline NodeStatus parse_status(const std::string& s) {
  if (s == "open") return NodeStatus::Open;
  if (s == "formalized") return NodeStatus::Formalized;
  throw SessionError("unknown node status '" + s + "'");
}

} // namespace detail

inline RefTree tree_from_json(const nlohmann::json& j) {
  try {
    std::vector<RefNode> nodes;
    for (const auto& n : j.at("nodes")) {
      RefNode node{n.at("id").get<std::string>(), parse_expr(n.at("expr").get<std::string>()), NodeStatus::Open, {}, {}, {}, {}, {}};
      node.status = detail::parse_status(n.at("status").get<std::string>());
      node.annotation = detail::opt_string(n, "annotation");
      node.source = detail::opt_string(n, "source");
      node.parent = detail::opt_string(n, "parent");
      node.children = n.at("children").get<std::vector<std::string>>();
      if (n.contains("completeness") && !n.at("completeness").is_null()) {
        const auto& c = n.at("completeness");
        node.completeness = CompletenessRecord{parse_answer(c.at("answer").get<std::string>()),
                                               c.at("rationale").get<std::string>()};
      }
      nodes.push_back(std::move(node));
    }
    return RefTree::from_nodes(j.at("root").get<std::string>(), std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw SessionError(std::string("malformed tree: ") + e.what());
  }
}

/// Content hash of a refinement tree: expressions, tags, structure, reviews.
inline std::string tree_hash(const RefTree& t) { return sha256_hex(to_json(t).dump()); }

namespace detail {

inline nlohmann::json session_body(const Session& s) {
  return {{"format", kSessionFormat}, {"tenet", s.tenet},     {"kb", print_rules(s.kb)},
          {"goals", to_json(s.goals)}, {"tree", to_json(s.tree)}, {"log", s.log}};
}

} // namespace detail

/// Content hash over everything persisted for the session.
inline std::string session_hash(const Session& s) { return sha256_hex(detail::session_body(s).dump()); }

inline nlohmann::json to_json(const Session& s) {
  nlohmann::json j = detail::session_body(s);
  j["hash"] = sha256_hex(j.dump());
  return j;
}

inline std::string serialize_session(const Session& s) { return to_json(s).dump(2) + "\n"; }

/// Parses a session document and checks its stored hash.
inline Session session_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string()) != kSessionFormat) throw SessionError("not a " + std::string(kSessionFormat) + " document");
    Session s{j.at("tenet").get<std::string>(), parse_rules(j.at("kb").get<std::string>()),
              parse_goal_graph(j.at("goals")), tree_from_json(j.at("tree")), {}};
    for (const auto& ev : j.at("log")) s.log.push_back(ev);
    const std::string stored = j.at("hash").get<std::string>();
    if (session_hash(s) != stored) throw SessionError("session hash mismatch: document is corrupt or was edited");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SessionError(std::string("malformed session document: ") + e.what());
  }
}

inline Session parse_session(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SessionError(std::string("session document is not valid JSON: ") + e.what());
  }
  return session_from_json(j);
}

/// Log document: the session's events plus the resulting tree hash.
inline nlohmann::json log_document(const Session& s) {
  return {{"format", kLogFormat}, {"events", s.log}, {"tree_hash", tree_hash(s.tree)}};
}

} // namespace tenet
