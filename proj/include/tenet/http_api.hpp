#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "tenet/errors.hpp"
#include "tenet/refinement.hpp"
#include "tenet/report.hpp"
#include "tenet/session_io.hpp"

namespace tenet {

inline nlohmann::json move_to_json(const Move& m, std::size_t index) {
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : m.children) children.push_back(print_expr(c));
  nlohmann::json j{{"index", index},         {"case", case_number(m.kind)}, {"source", m.source},
                   {"annotation", m.annotation}, {"children", children},     {"definition", m.definition},
                   {"detail", m.detail}};
  j["path"] = m.occurrence ? nlohmann::json(m.occurrence->path) : nlohmann::json(nullptr);
  j["premise"] = m.premise ? nlohmann::json(print_expr(*m.premise)) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json moves_to_json(const Session& s, const std::string& node, const MoveList& list) {
  nlohmann::json moves = nlohmann::json::array();
  for (std::size_t i = 0; i < list.moves.size(); ++i) moves.push_back(move_to_json(list.moves[i], i));
  return {{"node", node},
          {"expr", print_expr(s.tree.node(node).expr)},
          {"revision", s.revision()},
          {"moves", moves},
          {"needsExpansion", list.needs_expansion}};
}

inline nlohmann::json session_summary(const Session& s) {
  return {{"tenet", s.tenet},
          {"root", print_expr(s.tree.node(s.tree.root()).expr)},
          {"hash", session_hash(s)},
          {"treeHash", tree_hash(s.tree)},
          {"revision", s.revision()},
          {"nodes", s.tree.size()},
          {"frontier", frontier(s.tree)},
          {"goals", s.goals.size()},
          {"rules", s.kb.rules.size()}};
}

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  std::map<std::string, std::string> query;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Session-backed request handler. Reads use the latest committed
/// snapshot; mutations run one at a time, check `expectedHash` against the
/// current session hash and are persisted before they become visible.
class Api {
public:
  using Persist = std::function<void(const Session&)>;

  explicit Api(Session s, Persist persist = {})
      : current_(std::make_shared<const Session>(std::move(s))), persist_(std::move(persist)) {}

  std::shared_ptr<const Session> snapshot() const {
    std::lock_guard lock(snapshot_mu_);
    return current_;
  }

  ApiResponse handle(const ApiRequest& req) const {
    try {
      return route(req);
    } catch (const HttpFailure& f) {
      return error(f.status, f.what());
    } catch (const StaleMoveError& e) {
      return error(409, e.what());
    } catch (const StoreError& e) {
      return error(500, e.what());
    } catch (const Error& e) {
      return error(422, e.what());
    } catch (const nlohmann::json::exception& e) {
      return error(422, std::string("invalid payload: ") + e.what());
    }
  }

private:
  struct HttpFailure : Error {
    HttpFailure(int s, const std::string& what) : Error(what), status(s) {}
    int status;
  };

  static ApiResponse json_response(const nlohmann::json& j, int status = 200) { return {status, j.dump(2) + "\n"}; }
  static ApiResponse error(int status, const std::string& message) {
    return json_response({{"error", message}, {"status", status}}, status);
  }

  static std::vector<std::string> segments(const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : path) {
      if (c == '/') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  static nlohmann::json body_of(const ApiRequest& req) {
    try {
      auto j = nlohmann::json::parse(req.body.empty() ? "{}" : req.body);
      if (!j.is_object()) throw HttpFailure(422, "payload must be a JSON object");
      return j;
    } catch (const nlohmann::json::parse_error& e) {
      throw HttpFailure(422, std::string("payload is not valid JSON: ") + e.what());
    }
  }

  static void require_node(const Session& s, const std::string& id) {
    if (!s.tree.contains(id)) throw HttpFailure(404, "unknown node " + id);
  }

  ApiResponse route(const ApiRequest& req) const {
    const auto seg = segments(req.path);
    if (seg.empty() || seg[0] != "api") throw HttpFailure(404, "no such endpoint " + req.path);
    if (req.method == "GET") return get(seg, req);
    if (req.method == "POST") return post(seg, req);
    throw HttpFailure(405, "method not allowed");
  }

  ApiResponse get(const std::vector<std::string>& seg, const ApiRequest& req) const {
    auto s = snapshot();
    if (seg.size() == 2 && seg[1] == "session") return json_response(session_summary(*s));
    if (seg.size() == 2 && seg[1] == "tree") {
      nlohmann::json j = to_json(s->tree);
      j["hash"] = session_hash(*s);
      j["treeHash"] = tree_hash(s->tree);
      return json_response(j);
    }
    if (seg.size() == 4 && seg[1] == "nodes" && seg[3] == "moves") {
      require_node(*s, seg[2]);
      nlohmann::json j = moves_to_json(*s, seg[2], enumerate_moves(*s, seg[2]));
      j["hash"] = session_hash(*s);
      return json_response(j);
    }
    if (seg.size() == 2 && seg[1] == "export") {
      auto it = req.query.find("format");
      const ExportFormat f = parse_export_format(it == req.query.end() ? "props" : it->second);
      return {200, export_session(*s, f), f == ExportFormat::Props ? "text/plain" : "application/json"};
    }
    throw HttpFailure(404, "no such endpoint " + req.path);
  }

  ApiResponse post(const std::vector<std::string>& seg, const ApiRequest& req) const {
    const auto body = body_of(req);
    std::lock_guard write(write_mu_);
    auto s = snapshot();
    if (!body.contains("expectedHash") || !body.at("expectedHash").is_string())
      throw HttpFailure(422, "expectedHash is required");
    if (body.at("expectedHash").get<std::string>() != session_hash(*s))
      throw HttpFailure(409, "session changed: expectedHash does not match");

    std::optional<Session> next;
    nlohmann::json extra = nlohmann::json::object();
    if (seg.size() == 4 && seg[1] == "nodes" && seg[3] == "apply") {
      require_node(*s, seg[2]);
      const auto& idx = body.at("moveIndex");
      if (!idx.is_number_integer()) throw HttpFailure(422, "moveIndex must be an integer");
      const auto list = enumerate_moves(*s, seg[2]);
      const auto k = idx.get<long long>();
      if (k < 0 || static_cast<std::size_t>(k) >= list.moves.size())
        throw HttpFailure(422, "moveIndex " + std::to_string(k) + " out of range (" + std::to_string(list.moves.size()) +
                                   " moves)");
      next = apply_move(*s, seg[2], list.moves[static_cast<std::size_t>(k)]);
      extra["children"] = next->tree.node(seg[2]).children;
    } else if (seg.size() == 4 && seg[1] == "nodes" && seg[3] == "completeness") {
      require_node(*s, seg[2]);
      next = record_completeness(*s, seg[2], parse_answer(body.at("answer").get<std::string>()),
                                 body.value("rationale", std::string()));
    } else if (seg.size() == 2 && seg[1] == "rules") {
      next = elicit_rule(*s, body.at("line").get<std::string>());
    } else if (seg.size() == 3 && seg[1] == "goals" && seg[2] == "phantom") {
      Goal g{body.at("id").get<std::string>(), parse_expr(body.at("label").get<std::string>())};
      g.decomposition = parse_decomposition(body.value("decomp", std::string("and")));
      g.strengthened = body.value("strengthened", false);
      next = add_phantom_goal(*s, body.at("parent").get<std::string>(), std::move(g),
                              body.at("adopt").get<std::vector<std::string>>());
    } else {
      throw HttpFailure(404, "no such endpoint " + req.path);
    }

    if (persist_) persist_(*next);
    auto committed = std::make_shared<const Session>(std::move(*next));
    {
      std::lock_guard lock(snapshot_mu_);
      current_ = committed;
    }
    nlohmann::json out = session_summary(*committed);
    out.update(extra);
    return json_response(out);
  }

  mutable std::mutex snapshot_mu_;
  mutable std::mutex write_mu_;
  mutable std::shared_ptr<const Session> current_;
  Persist persist_;
};

/// Routes `/api/...` requests on `server` to `api`; other paths fall
/// through to any static mount.
inline void bind_http(httplib::Server& server, const Api& api) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, req.body, {}};
    for (const auto& [k, v] : req.params) r.query[k] = v;
    ApiResponse out = api.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.Get(R"(/api/.*)", forward);
  server.Post(R"(/api/.*)", forward);
  server.Put(R"(/api/.*)", forward);
  server.Patch(R"(/api/.*)", forward);
  server.Delete(R"(/api/.*)", forward);
}

} // namespace tenet
