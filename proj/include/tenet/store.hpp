#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "tenet/errors.hpp"
#include "tenet/session_io.hpp"

namespace tenet {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw StoreError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Session files under a root directory. Saves write a temp file next to
/// the target and rename it into place, so a reader sees either the old or
/// the new document.
class SessionStore {
public:
  /// Called after the temp file is complete and before the rename.
  using CommitHook = std::function<void(const std::filesystem::path& temp)>;

  explicit SessionStore(std::filesystem::path root = ".") : root_(std::move(root)) {}

  /// Root from TENET_SESSION_DIR when set, else `fallback`.
  static SessionStore from_env(std::filesystem::path fallback = ".") {
    if (const char* dir = std::getenv("TENET_SESSION_DIR"); dir && *dir) return SessionStore(dir);
    return SessionStore(std::move(fallback));
  }

  const std::filesystem::path& root() const noexcept { return root_; }

  std::filesystem::path path_of(const std::string& name) const {
    std::filesystem::path p(name);
    return p.is_absolute() ? p : root_ / p;
  }

  bool exists(const std::string& name) const { return std::filesystem::exists(path_of(name)); }

  void set_commit_hook(CommitHook hook) { hook_ = std::move(hook); }

  /// Writes the session and returns its content hash.
  std::string save(const std::string& name, const Session& s) const {
    const auto target = path_of(name);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    auto temp = target;
    temp += ".tmp";
    const std::string text = serialize_session(s);
    {
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      if (!out) throw StoreError("cannot write " + temp.string());
      out << text;
      out.flush();
      if (!out) throw StoreError("short write to " + temp.string());
    }
    if (hook_) hook_(temp);
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec) throw StoreError("cannot move " + temp.string() + " into place: " + ec.message());
    return session_hash(s);
  }

  Session load(const std::string& name) const {
    const auto p = path_of(name);
    if (!std::filesystem::exists(p)) throw StoreError("no session at " + p.string());
    try {
      return parse_session(read_file(p));
    } catch (const StoreError&) {
      throw;
    } catch (const Error& e) {
      throw StoreError(p.string() + ": " + e.what());
    }
  }

private:
  std::filesystem::path root_;
  CommitHook hook_;
};

} // namespace tenet
