#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tenet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression, rules file line or goal document.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line), column_(column), reason_(what) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

class KnowledgeBaseError : public Error {
public:
  using Error::Error;
};

class GoalGraphError : public Error {
public:
  using Error::Error;
};

/// Raised by the evaluator for non-ground input or unexpanded macros.
class EvalError : public Error {
public:
  using Error::Error;
};

class PathError : public Error {
public:
  using Error::Error;
};

/// Invalid operation on a refinement session.
class SessionError : public Error {
public:
  using Error::Error;
};

/// A move computed against an older session revision.
class StaleMoveError : public SessionError {
public:
  using SessionError::SessionError;
};

class ReplayError : public Error {
public:
  using Error::Error;
};

class StoreError : public Error {
public:
  using Error::Error;
};

} // namespace tenet
