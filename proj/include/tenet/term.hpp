#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tenet/errors.hpp"

namespace tenet {

enum class TimeUnit { minute, hour, day };

/// Non-negative span of time, held canonically in minutes.
class Duration {
public:
  constexpr Duration() = default;

  static Duration of(std::int64_t magnitude, TimeUnit unit) {
    if (magnitude < 0) throw Error("negative duration");
    switch (unit) {
    case TimeUnit::minute: return Duration(magnitude);
    case TimeUnit::hour: return Duration(magnitude * 60);
    case TimeUnit::day: return Duration(magnitude * 1440);
    }
    return Duration(magnitude);
  }
  static Duration minutes(std::int64_t m) { return of(m, TimeUnit::minute); }

  constexpr std::int64_t in_minutes() const noexcept { return minutes_; }

  /// Largest unit that divides the span exactly; used for printing.
  std::pair<std::int64_t, TimeUnit> display() const noexcept {
    if (minutes_ != 0 && minutes_ % 1440 == 0) return {minutes_ / 1440, TimeUnit::day};
    if (minutes_ != 0 && minutes_ % 60 == 0) return {minutes_ / 60, TimeUnit::hour};
    return {minutes_, TimeUnit::minute};
  }

  friend constexpr bool operator==(Duration, Duration) = default;
  friend constexpr auto operator<=>(Duration, Duration) = default;

private:
  constexpr explicit Duration(std::int64_t m) : minutes_(m) {}
  std::int64_t minutes_ = 0;
};

inline char unit_suffix(TimeUnit u) {
  switch (u) {
  case TimeUnit::minute: return 'm';
  case TimeUnit::hour: return 'h';
  case TimeUnit::day: return 'd';
  }
  return 'm';
}

enum class TermKind { variable, constant, number, compound };

inline bool is_variable_name(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

/// First-order term. Immutable; copies share structure.
class Term {
public:
  static constexpr const char* plus_functor = "+";

  static Term variable(std::string name) {
    if (!is_variable_name(name)) throw Error("variable name must start with an uppercase letter: '" + name + "'");
    return Term(Rep{TermKind::variable, std::move(name), 0, false, {}});
  }
  static Term constant(std::string name) {
    if (name.empty()) throw Error("empty constant name");
    return Term(Rep{TermKind::constant, std::move(name), 0, false, {}});
  }
  static Term number(std::int64_t value) { return Term(Rep{TermKind::number, {}, value, false, {}}); }
  static Term duration(Duration d) { return Term(Rep{TermKind::number, {}, d.in_minutes(), true, {}}); }
  static Term compound(std::string functor, std::vector<Term> args) {
    if (functor.empty()) throw Error("empty functor");
    if (args.empty()) throw Error("compound term '" + functor + "' needs at least one argument");
    return Term(Rep{TermKind::compound, std::move(functor), 0, false, std::move(args)});
  }
  /// Term-level addition, only given meaning inside comparisons.
  static Term plus(Term lhs, Term rhs) { return compound(plus_functor, {std::move(lhs), std::move(rhs)}); }

  TermKind kind() const noexcept { return rep_->kind; }
  bool is_variable() const noexcept { return kind() == TermKind::variable; }
  bool is_constant() const noexcept { return kind() == TermKind::constant; }
  bool is_number() const noexcept { return kind() == TermKind::number; }
  bool is_compound() const noexcept { return kind() == TermKind::compound; }
  bool is_plus() const noexcept { return is_compound() && rep_->name == plus_functor && rep_->args.size() == 2; }

  /// Variable or constant name, or compound functor.
  const std::string& name() const noexcept { return rep_->name; }
  /// Integer value; minutes for durations.
  std::int64_t value() const noexcept { return rep_->value; }
  bool is_duration() const noexcept { return rep_->duration; }
  const std::vector<Term>& args() const noexcept { return rep_->args; }

  bool is_ground() const {
    if (is_variable()) return false;
    for (const auto& a : args())
      if (!a.is_ground()) return false;
    return true;
  }

  void collect_variables(std::set<std::string>& out) const {
    if (is_variable()) out.insert(name());
    for (const auto& a : args()) a.collect_variables(out);
  }

  bool contains_variable(const std::string& var) const {
    if (is_variable()) return name() == var;
    for (const auto& a : args())
      if (a.contains_variable(var)) return true;
    return false;
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.rep_ == b.rep_) return true;
    const Rep& x = *a.rep_;
    const Rep& y = *b.rep_;
    return x.kind == y.kind && x.name == y.name && x.value == y.value && x.duration == y.duration && x.args == y.args;
  }

private:
  struct Rep {
    TermKind kind;
    std::string name;
    std::int64_t value;
    bool duration;
    std::vector<Term> args;
  };
  explicit Term(Rep r) : rep_(std::make_shared<const Rep>(std::move(r))) {}
  std::shared_ptr<const Rep> rep_;
};

inline Term Var(std::string name) { return Term::variable(std::move(name)); }
inline Term Const(std::string name) { return Term::constant(std::move(name)); }
inline Term Num(std::int64_t v) { return Term::number(v); }
inline Term Fn(std::string functor, std::vector<Term> args) { return Term::compound(std::move(functor), std::move(args)); }

} // namespace tenet
