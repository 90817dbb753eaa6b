// Command-line driver for refinement sessions.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tenet/http_api.hpp"
#include "tenet/tenet.hpp"

namespace {

using namespace tenet;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError("cannot write " + path);
  out << text;
}

void print_tree(const Session& s, const std::string& id, int depth) {
  const RefNode& n = s.tree.node(id);
  std::cout << std::string(2 * depth, ' ') << n.id << "  " << print_expr(n.expr);
  if (n.annotation) std::cout << " :" << *n.annotation;
  if (n.status == NodeStatus::Formalized) std::cout << "  [formalized]";
  if (n.is_leaf() && n.status == NodeStatus::Open) std::cout << "  [open]";
  if (n.completeness) std::cout << "  {" << to_string(n.completeness->answer) << "}";
  std::cout << "\n";
  for (const auto& c : n.children) print_tree(s, c, depth + 1);
}

void print_moves(const Session& s, const std::string& node, const MoveList& list) {
  std::cout << node << "  " << print_expr(s.tree.node(node).expr) << "\n";
  if (list.needs_expansion) {
    std::cout << "no moves: add a phantom goal (phantom) or elicit a rule (rule-add)\n";
    return;
  }
  for (std::size_t i = 0; i < list.moves.size(); ++i) {
    const Move& m = list.moves[i];
    std::cout << "[" << i << "] case " << case_number(m.kind) << " " << m.source;
    if (m.occurrence) std::cout << " at " << print_path(m.occurrence->path);
    std::cout << " (" << m.detail << ")\n";
    for (const auto& c : m.children) std::cout << "      -> " << print_expr(c) << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Derive verification properties from a tenet by guided refinement"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  SessionStore store = SessionStore::from_env(".");
  std::string session, node, tenet_text, root, goals_file, rules_file, out, rule_line, parent, label, goal_id,
      decomp = "and", answer, why, format = "props", log_file, static_dir;
  std::vector<std::string> adopt;
  bool strengthened = false;
  long long move_index = -1;
  int port = 8714;

  auto* cmd_new = app.add_subcommand("new", "Start a session from a negated tenet");
  cmd_new->add_option("--tenet", tenet_text, "Tenet text")->required();
  cmd_new->add_option("--root", root, "Negated tenet as an expression")->required();
  cmd_new->add_option("--goals", goals_file, "Goal graph JSON")->required()->check(CLI::ExistingFile);
  cmd_new->add_option("--rules", rules_file, "Knowledge base file")->required()->check(CLI::ExistingFile);
  cmd_new->add_option("--out", out, "Session file to create")->required();

  auto* cmd_show = app.add_subcommand("show", "Print the refinement tree");
  cmd_show->add_option("--session", session)->required();

  auto* cmd_moves = app.add_subcommand("moves", "List the moves for an open leaf");
  cmd_moves->add_option("--session", session)->required();
  cmd_moves->add_option("--node", node)->required();
  bool moves_json = false;
  cmd_moves->add_flag("--json", moves_json, "Print the move list as JSON");

  auto* cmd_apply = app.add_subcommand("apply", "Apply a listed move and save");
  cmd_apply->add_option("--session", session)->required();
  cmd_apply->add_option("--node", node)->required();
  cmd_apply->add_option("--move", move_index, "Index from `moves`")->required();

  auto* cmd_rule = app.add_subcommand("rule-add", "Add an elicited domain rule");
  cmd_rule->add_option("--session", session)->required();
  cmd_rule->add_option("--rule", rule_line, "Rule line, e.g. 'd10: a => b'")->required();

  auto* cmd_phantom = app.add_subcommand("phantom", "Insert a phantom goal");
  cmd_phantom->add_option("--session", session)->required();
  cmd_phantom->add_option("--parent", parent)->required();
  cmd_phantom->add_option("--label", label, "Goal label expression")->required();
  cmd_phantom->add_option("--adopt", adopt, "Children of the parent to move under the new goal")
      ->required()
      ->delimiter(',');
  cmd_phantom->add_option("--id", goal_id, "Goal id (derived from the label when omitted)");
  cmd_phantom->add_option("--decomp", decomp, "and or or")->check(CLI::IsMember({"and", "or"}));
  cmd_phantom->add_flag("--strengthened", strengthened, "Children are necessary as well as sufficient");

  auto* cmd_complete = app.add_subcommand("complete", "Record whether a refinement is complete");
  cmd_complete->add_option("--session", session)->required();
  cmd_complete->add_option("--node", node)->required();
  cmd_complete->add_option("--answer", answer)->required()->check(
      CLI::IsMember({"c", "i", "u", "complete", "incomplete", "unreviewed"}));
  cmd_complete->add_option("--why", why, "Rationale (required for incomplete)");

  auto* cmd_export = app.add_subcommand("export", "Write properties, the report or the event log");
  cmd_export->add_option("--session", session)->required();
  cmd_export->add_option("--format", format)->check(CLI::IsMember({"props", "report", "log"}));
  cmd_export->add_option("--out", out, "Output file (stdout when omitted)");

  auto* cmd_replay = app.add_subcommand("replay", "Rebuild a session from an event log");
  cmd_replay->add_option("--log", log_file)->required()->check(CLI::ExistingFile);
  cmd_replay->add_option("--goals", goals_file)->required()->check(CLI::ExistingFile);
  cmd_replay->add_option("--rules", rules_file)->required()->check(CLI::ExistingFile);
  cmd_replay->add_option("--out", out, "Save the rebuilt session");

  auto* cmd_serve = app.add_subcommand("serve", "Serve the HTTP API for a session");
  cmd_serve->add_option("--session", session)->required();
  cmd_serve->add_option("--port", port)->check(CLI::Range(1, 65535));
  cmd_serve->add_option("--static", static_dir, "Directory of UI assets served at /")->check(CLI::ExistingDirectory);
  std::string host = "127.0.0.1";
  cmd_serve->add_option("--host", host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto load = [&] { return store.load(session); };
  auto save = [&](const Session& s) { store.save(session, s); };

  if (*cmd_new) {
    Session s = init_session(tenet_text, root, parse_goal_graph(read_file(goals_file)), parse_rules(read_file(rules_file)));
    store.save(out, s);
    std::cout << "created " << store.path_of(out).string() << " (root n0: " << print_expr(s.tree.node("n0").expr) << ")\n";
  } else if (*cmd_show) {
    Session s = load();
    print_tree(s, s.tree.root(), 0);
  } else if (*cmd_moves) {
    Session s = load();
    if (!s.tree.contains(node)) throw SessionError("unknown node " + node);
    auto list = enumerate_moves(s, node);
    if (moves_json)
      std::cout << moves_to_json(s, node, list).dump(2) << "\n";
    else
      print_moves(s, node, list);
  } else if (*cmd_apply) {
    Session s = load();
    if (!s.tree.contains(node)) throw SessionError("unknown node " + node);
    auto list = enumerate_moves(s, node);
    if (move_index < 0 || static_cast<std::size_t>(move_index) >= list.moves.size())
      throw UsageError("move index " + std::to_string(move_index) + " out of range (" +
                       std::to_string(list.moves.size()) + " moves for " + node + ")");
    Session next = apply_move(s, node, list.moves[static_cast<std::size_t>(move_index)]);
    save(next);
    for (const auto& c : next.tree.node(node).children)
      std::cout << c << "  " << print_expr(next.tree.node(c).expr) << "\n";
  } else if (*cmd_rule) {
    save(elicit_rule(load(), rule_line));
  } else if (*cmd_phantom) {
    Goal g{goal_id, parse_expr(label)};
    if (g.id.empty()) {
      for (char c : print_expr(g.label))
        if (std::isalnum(static_cast<unsigned char>(c))) g.id += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!g.id.empty() && g.id.back() != '-') g.id += '-';
      while (!g.id.empty() && g.id.back() == '-') g.id.pop_back();
      if (g.id.empty()) throw UsageError("cannot derive a goal id from the label; pass --id");
    }
    g.decomposition = parse_decomposition(decomp);
    g.strengthened = strengthened;
    save(add_phantom_goal(load(), parent, std::move(g), adopt));
  } else if (*cmd_complete) {
    save(record_completeness(load(), node, parse_answer(answer), why));
  } else if (*cmd_export) {
    write_output(out, export_session(load(), parse_export_format(format)));
  } else if (*cmd_replay) {
    Session s = replay(read_file(log_file), parse_goal_graph(read_file(goals_file)), parse_rules(read_file(rules_file)));
    if (!out.empty()) store.save(out, s);
    std::cout << "replayed " << s.log.size() << " events: " << s.tree.size() << " nodes, " << frontier(s.tree).size()
              << " open, tree " << tree_hash(s.tree) << "\n";
  } else if (*cmd_serve) {
    Api api(load(), [&](const Session& s) { save(s); });
    httplib::Server server;
    bind_http(server, api);
    if (!static_dir.empty()) server.set_mount_point("/", static_dir);
    std::cout << "serving " << store.path_of(session).string() << " on http://" << host << ":" << port << "\n" << std::flush;
    if (!server.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "tenet: " << e.what() << "\n";
    return 2;
  } catch (const tenet::ParseError& e) {
    std::cerr << "tenet: parse error at " << e.line() << ":" << e.column() << ": " << e.reason() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tenet: " << e.what() << "\n";
    return 1;
  }
}
