#pragma once

#include "causa/rational.hpp"

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace causa {

using Id = std::string;
using Tick = std::int64_t;

/// Stand-in horizon for open intervals when no query horizon is given.
inline constexpr Tick kForever = std::numeric_limits<Tick>::max() / 4;

/// A run of ticks on the discrete time line. Ticks are unit spans between
/// integer instants: the interval covers ticks start, start+1, ..., end-1 and
/// its boundary instants are `start` and `end`. An absent end marks an ongoing
/// occurrent, resolved against a horizon when a bound is needed.
struct Interval {
  Tick start = 0;
  std::optional<Tick> end;

  static Interval closed(Tick start, Tick end) { return Interval{start, end}; }
  static Interval open_from(Tick start) { return Interval{start, std::nullopt}; }

  [[nodiscard]] bool is_open() const { return !end.has_value(); }
  [[nodiscard]] Tick end_or(Tick horizon) const { return end ? *end : horizon; }
  [[nodiscard]] bool contains(Tick t) const { return t >= start && (!end || t < *end); }
  [[nodiscard]] bool empty() const { return end && *end == start; }

  bool operator==(const Interval&) const = default;
};

/// True iff the intervals share at least one whole tick. Touching at a single
/// boundary instant is not overlap.
bool overlaps(const Interval& a, const Interval& b, Tick horizon = kForever);

/// True iff `a` ends exactly where `b` starts and the two do not overlap.
bool meets(const Interval& a, const Interval& b, Tick horizon = kForever);

std::string to_string(const Interval& interval);

// ---------------------------------------------------------------------------
// Vocabulary shared by the calculus and the model container.

enum class Subfunction { achieves, prevents, allows, disallows, maintain };
enum class Directness { direct, indirect };
enum class PatternKind { event_state, process_process, state_state };
enum class Polarity { facilitative, preventive };
enum class OccurrentKind { state, process, event, maintain };

std::string to_string(Subfunction s);
std::string to_string(Directness d);
std::string to_string(PatternKind p);
std::string to_string(Polarity p);
std::string to_string(OccurrentKind k);
std::optional<Subfunction> parse_subfunction(std::string_view text);

/// Achieves and Prevents are direct; the other quadrant members are not.
[[nodiscard]] constexpr bool is_direct(Subfunction s) {
  return s == Subfunction::achieves || s == Subfunction::prevents;
}

// ---------------------------------------------------------------------------
// Model content.

enum class EntityKind { object, region };

struct Entity {
  Id id;
  EntityKind kind = EntityKind::object;
  bool operator==(const Entity&) const = default;
};

struct Parameter {
  Id id;
  Id bearer;
  std::string quantity_kind;
  Rational value;
  bool operator==(const Parameter&) const = default;
};

enum class Comparison { lt, le, eq, ne, ge, gt };
std::string to_string(Comparison c);
std::optional<Comparison> parse_comparison(std::string_view text);

struct ParameterPredicate {
  Id parameter;
  Comparison op = Comparison::eq;
  Rational threshold;

  [[nodiscard]] bool holds_for(const Rational& value) const;
  bool operator==(const ParameterPredicate&) const = default;
};

struct Proposition {
  std::string name;
  bool operator==(const Proposition&) const = default;
};

/// Device-engine hints an author may attach to any occurrent.
struct Hints {
  std::vector<Id> refines_into;  // finer-grained occurrents, in causal order
  Id operand;
  Id medium;
  Id conduit_region;
  std::string device_name;
  std::string direction;  // push or pull; recorded, not simulated
  bool primitive = false;  // irreducible, proactive phenomenon
  bool operator==(const Hints&) const = default;
};

/// A time-indexed quality: either a predicate over one parameter or a named
/// proposition about its bearer.
struct State {
  Id id;
  Id bearer;
  std::variant<Proposition, ParameterPredicate> condition;
  std::optional<Interval> interval;  // declared holding schedule, if any
  Hints hints;

  [[nodiscard]] const ParameterPredicate* predicate() const {
    return std::get_if<ParameterPredicate>(&condition);
  }
  bool operator==(const State&) const = default;
};

enum class ProcessKind { operand_bearing, intransitive };

struct Delta {
  Id parameter;
  Rational per_tick;
  bool operator==(const Delta&) const = default;
};

struct Process {
  Id id;
  ProcessKind kind = ProcessKind::operand_bearing;
  std::set<Id> participants;
  std::set<Id> driven_states;
  std::vector<Delta> deltas;
  /// Scheduled processes carry an interval. Processes without one are
  /// activated by their preconditions and then run for `duration` ticks
  /// (absent duration: open-ended).
  std::optional<Interval> interval;
  std::optional<Tick> duration;
  Hints hints;

  [[nodiscard]] bool triggered() const { return !interval.has_value(); }
  bool operator==(const Process&) const = default;
};

struct Event {
  Id id;
  Id constituted_by;
  Interval interval;
  std::set<Id> resultant_states;
  std::set<Id> terminated_states;
  Hints hints;
  bool operator==(const Event&) const = default;
};

/// Reified omission: keeps `state` unchanged across `interval`. `omits` names
/// the occurrent whose non-occurrence this stands for, when there is one.
struct Maintain {
  Id id;
  Id state;
  Interval interval;
  Id context;
  Id omits;
  bool operator==(const Maintain&) const = default;
};

struct Precondition {
  Id id;
  Id occurrent;
  Polarity polarity = Polarity::facilitative;
  Id state;
  bool operator==(const Precondition&) const = default;
};

struct Term {
  Rational coefficient{1};
  Id parameter;
  bool operator==(const Term&) const = default;
};

enum class EquationProvenance { shared_individual, declared_identity };

/// lhs = sum(rhs). Causation-free; `dependent` is the parameter recomputed
/// when the others change.
struct Equation {
  Id id;
  Id lhs;
  std::vector<Term> rhs;
  Id dependent;
  EquationProvenance provenance = EquationProvenance::declared_identity;

  [[nodiscard]] std::vector<Id> parameters() const;
  [[nodiscard]] bool mentions(const Id& parameter) const;
  /// lhs - sum(rhs) under the given valuation.
  [[nodiscard]] Rational residual(const std::map<Id, Rational>& values) const;
  /// Value of `dependent` that makes the residual vanish.
  [[nodiscard]] Rational solve(const std::map<Id, Rational>& values) const;
  bool operator==(const Equation&) const = default;
};

struct Context {
  Id id;
  std::set<Id> assumptions;
  std::map<Id, std::set<Id>> exclusions;  // group id -> members

  /// At most one member of a group holds; a member is never incompatible
  /// with itself.
  [[nodiscard]] bool incompatible(const Id& a, const Id& b) const;
  bool operator==(const Context&) const = default;
};

struct AssertedLink {
  Id source;
  Id target;
  Directness directness = Directness::indirect;
  std::optional<Subfunction> subfunction;
  Id context;  // empty: holds in every context

  [[nodiscard]] std::string key() const { return "link:" + source + "->" + target; }
  auto operator<=>(const AssertedLink&) const = default;
};

/// Container for one causal model. Immutable once built and validated; all
/// analyses take it by const reference.
struct Model {
  std::map<Id, Entity> entities;
  std::map<Id, Parameter> parameters;
  std::map<Id, State> states;
  std::map<Id, Process> processes;
  std::map<Id, Event> events;
  std::map<Id, Maintain> maintains;
  std::map<Id, Precondition> preconditions;
  std::map<Id, Equation> equations;
  std::map<Id, Context> contexts;
  std::vector<AssertedLink> links;

  bool operator==(const Model&) const = default;

  [[nodiscard]] bool empty() const;
  [[nodiscard]] std::optional<OccurrentKind> kind_of(const Id& id) const;
  [[nodiscard]] bool is_occurrent(const Id& id) const { return kind_of(id).has_value(); }
  /// Every occurrent id, sorted.
  [[nodiscard]] std::vector<Id> occurrents() const;
  [[nodiscard]] std::optional<Interval> interval_of(const Id& occurrent) const;
  [[nodiscard]] std::set<Id> participants_of(const Id& occurrent) const;
  [[nodiscard]] const Hints* hints_of(const Id& occurrent) const;
  [[nodiscard]] std::vector<const Precondition*> preconditions_of(const Id& occurrent) const;
  [[nodiscard]] const Context* context(const Id& id) const;
  /// True iff the state holds at `t` per its declared schedule or the
  /// context's assumptions.
  [[nodiscard]] bool state_declared_at(const Id& state, Tick t, const Id& context = {}) const;
  /// Canonical sort order for `links`.
  void normalize();
};

/// Overlap/meet/constitution between occurrents of one model. Occurrents
/// without an interval never overlap or meet anything.
bool overlaps(const Model& model, const Id& a, const Id& b, Tick horizon = kForever);
bool meets(const Model& model, const Id& a, const Id& b, Tick horizon = kForever);
bool constitutes(const Model& model, const Id& process, const Id& event);

// ---------------------------------------------------------------------------
// Validation.

enum class Severity { error, warning };

struct Issue {
  Severity severity = Severity::error;
  std::string rule;
  Id subject;  // declaration the issue is about (link keys for links)
  std::string message;
  bool operator==(const Issue&) const = default;
};

[[nodiscard]] bool has_errors(const std::vector<Issue>& issues);

/// Structural checks: references, interval and timing invariants, equations,
/// refinement acyclicity. Deterministic and idempotent.
std::vector<Issue> validate_structure(const Model& model);

/// Base class for the typed failures thrown by analyses.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

} // namespace causa
