#pragma once

#include "causa/ontology.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace causa {

/// One parameter change. Process deltas are causal; equation closure is not.
struct ParameterUpdate {
  Tick tick = 0;
  Id parameter;
  Rational from;
  Rational to;
  bool causal = false;
  Id source;  // process or equation id

  bool operator==(const ParameterUpdate&) const = default;
};

struct Snapshot {
  Tick tick = 0;
  std::map<Id, Rational> values;
  std::map<Id, bool> states;
  std::set<Id> active;  // processes running during this tick

  bool operator==(const Snapshot&) const = default;
};

struct Activation {
  Id occurrent;
  Tick tick = 0;
  std::vector<Id> last_flipped;  // precondition ids, sorted; several on a tie
  std::vector<Id> flipped_by;    // events, processes or equations behind the flip

  bool operator==(const Activation&) const = default;
};

struct Completion {
  Id event;
  Tick tick = 0;
  std::set<Id> resultant_states;
  std::set<Id> terminated_states;

  bool operator==(const Completion&) const = default;
};

struct Trace {
  Tick horizon = 0;
  std::vector<Snapshot> snapshots;
  std::vector<ParameterUpdate> updates;
  std::vector<Activation> activations;
  std::vector<Completion> completions;
  std::map<Id, Interval> triggered_runs;

  bool operator==(const Trace&) const = default;
};

struct ActivationSpec {
  Id occurrent;
  std::vector<Precondition> facilitative;
  std::vector<Precondition> preventive;
  std::map<Id, Id> state_parameters;  // predicate states -> their parameter
};

ActivationSpec activation_spec(const Model& model, const Id& occurrent);

struct ActivationDecision {
  bool fire = false;
  Tick flip_tick = 0;
  std::vector<Id> last_flipped;
  std::vector<Id> flipped_by;
};

/// Fires iff every facilitative precondition holds and every preventive one
/// does not. `history` holds the snapshots before `snapshot` plus the logs
/// through its tick; it is used to find which precondition flipped last.
/// Throws Error("UnknownState") when a referenced state is not in the snapshot.
ActivationDecision trigger_check(const ActivationSpec& spec, const Snapshot& snapshot,
                                 const Trace& history = {});

/// Sets `changed` to `new_value` and recomputes every equation dependent.
/// Returned updates are non-causal. Throws Error("OverconstrainedSystem")
/// when an equation cannot be satisfied without moving a fixed parameter,
/// Error("UnderdeterminedSystem") when the dependents are circular.
std::vector<ParameterUpdate> propagate(const Model& model, const std::map<Id, Rational>& values,
                                       const Id& changed, const Rational& new_value, Tick tick = 0);

/// Extends a trace consistent through tick-1 by one tick: process deltas,
/// equation closure, event completion, then activation.
Trace step(const Model& model, Tick tick, Trace world);

/// Snapshots for ticks 0..horizon. Deterministic.
Trace run(const Model& model, Tick horizon);

struct Violation {
  Tick tick = 0;
  std::string check;  // equation, simultaneity, event-state, activation, labeling
  std::string message;
};

struct VerificationReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

VerificationReport verify_trace(const Trace& trace, const Model& model);

} // namespace causa
