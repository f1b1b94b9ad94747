#include "causa/simulation.hpp"

#include "causa/calculus.hpp"

#include <algorithm>

namespace causa {

namespace {

// Equations ordered so that every dependent is computed before any equation
// that reads it.
std::vector<const Equation*> solve_order(const Model& model) {
  std::map<Id, std::set<Id>> after;  // equation -> equations that read its dependent
  std::map<Id, int> indegree;
  for (const auto& [id, eq] : model.equations) indegree[id];
  for (const auto& [a, ea] : model.equations) {
    for (const auto& [b, eb] : model.equations) {
      if (a == b || ea.dependent == eb.dependent || !eb.mentions(ea.dependent)) continue;
      if (after[a].insert(b).second) ++indegree[b];
    }
  }
  std::set<Id> ready;
  for (const auto& [id, n] : indegree)
    if (n == 0) ready.insert(id);
  std::vector<const Equation*> order;
  while (!ready.empty()) {
    Id id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(&model.equations.at(id));
    for (const auto& next : after[id])
      if (--indegree[next] == 0) ready.insert(next);
  }
  if (order.size() != model.equations.size())
    throw Error("UnderdeterminedSystem", "equation dependents depend on each other in a cycle");
  return order;
}

void close_equations(const Model& model, std::map<Id, Rational>& values, const std::set<Id>& pinned,
                     Tick tick, std::vector<ParameterUpdate>& updates) {
  std::set<Id> fixed = pinned;
  for (const Equation* eq : solve_order(model)) {
    for (const auto& p : eq->parameters())
      if (!values.count(p)) throw Error("UnknownId", "equation " + eq->id + " reads unknown parameter '" + p + "'");
    Rational value = eq->solve(values);
    Rational& current = values[eq->dependent];
    if (fixed.count(eq->dependent)) {
      if (value != current)
        throw Error("OverconstrainedSystem", "equation " + eq->id + " needs " + eq->dependent + " = " +
                                                 to_string(value) + " but it is fixed at " +
                                                 to_string(current) + " (tick " + std::to_string(tick) + ")");
      continue;
    }
    if (value != current) {
      updates.push_back({tick, eq->dependent, current, value, false, eq->id});
      current = value;
    }
    fixed.insert(eq->dependent);
  }
}

bool proposition_holds(const State& state, Tick t, const std::vector<Completion>& completions) {
  // Latest change wins; a completion beats a declared boundary on the same tick.
  std::optional<std::pair<Tick, int>> latest;  // (tick, priority)
  bool value = false;
  auto consider = [&](Tick at, int priority, bool v) {
    if (at > t) return;
    std::pair<Tick, int> key{at, priority};
    if (!latest || key >= *latest) {
      latest = key;
      value = v;
    }
  };
  if (state.interval) {
    consider(state.interval->start, 0, true);
    if (state.interval->end) consider(*state.interval->end, 0, false);
  }
  for (const auto& c : completions) {
    if (c.terminated_states.count(state.id)) consider(c.tick, 1, false);
    if (c.resultant_states.count(state.id)) consider(c.tick, 2, true);
  }
  return value;
}

void finish_tick(const Model& model, Tick t, std::map<Id, Rational> values, Trace& world) {
  for (const auto& [id, e] : model.events) {
    if (e.interval.end == t) world.completions.push_back({id, t, e.resultant_states, e.terminated_states});
  }

  Snapshot snap;
  snap.tick = t;
  for (const auto& [id, s] : model.states) {
    if (const auto* pred = s.predicate()) {
      auto v = values.find(pred->parameter);
      snap.states[id] = v != values.end() && pred->holds_for(v->second);
    } else {
      snap.states[id] = proposition_holds(s, t, world.completions);
    }
  }
  snap.values = std::move(values);
  for (const auto& [id, p] : model.processes) {
    if (p.interval && p.interval->contains(t)) snap.active.insert(id);
    auto run = world.triggered_runs.find(id);
    if (run != world.triggered_runs.end() && run->second.contains(t)) snap.active.insert(id);
  }

  for (const auto& [id, p] : model.processes) {
    if (!p.triggered() || world.triggered_runs.count(id)) continue;
    auto decision = trigger_check(activation_spec(model, id), snap, world);
    if (!decision.fire) continue;
    world.triggered_runs[id] = p.duration ? Interval::closed(t, t + *p.duration) : Interval::open_from(t);
    world.activations.push_back({id, t, decision.last_flipped, decision.flipped_by});
    if (world.triggered_runs[id].contains(t)) snap.active.insert(id);
  }

  world.snapshots.push_back(std::move(snap));
  world.horizon = t;
}

} // namespace

ActivationSpec activation_spec(const Model& model, const Id& occurrent) {
  ActivationSpec spec;
  spec.occurrent = occurrent;
  for (const Precondition* pre : model.preconditions_of(occurrent)) {
    (pre->polarity == Polarity::facilitative ? spec.facilitative : spec.preventive).push_back(*pre);
    auto s = model.states.find(pre->state);
    if (s != model.states.end())
      if (const auto* pred = s->second.predicate()) spec.state_parameters[pre->state] = pred->parameter;
  }
  return spec;
}

ActivationDecision trigger_check(const ActivationSpec& spec, const Snapshot& snapshot, const Trace& history) {
  auto lookup = [](const Snapshot& snap, const Id& state) {
    auto it = snap.states.find(state);
    if (it == snap.states.end())
      throw Error("UnknownState", "no value for state '" + state + "' at tick " + std::to_string(snap.tick));
    return it->second;
  };
  ActivationDecision decision;
  decision.fire = true;
  std::vector<std::pair<const Precondition*, bool>> all;  // (precondition, facilitative)
  for (const auto& p : spec.facilitative) all.emplace_back(&p, true);
  for (const auto& p : spec.preventive) all.emplace_back(&p, false);
  for (const auto& [pre, facilitative] : all) {
    if (lookup(snapshot, pre->state) != facilitative) decision.fire = false;
  }
  if (!decision.fire || all.empty()) return decision;

  auto snapshot_at = [&](Tick t) -> const Snapshot* {
    if (t == snapshot.tick) return &snapshot;
    if (t < 0 || t >= static_cast<Tick>(history.snapshots.size())) return nullptr;
    return &history.snapshots[static_cast<std::size_t>(t)];
  };
  // Start of the run of ticks over which each precondition has been satisfied.
  std::vector<Tick> since(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    Tick t = snapshot.tick;
    while (const Snapshot* earlier = snapshot_at(t - 1)) {
      if (lookup(*earlier, all[i].first->state) != all[i].second) break;
      --t;
    }
    since[i] = t;
  }
  decision.flip_tick = *std::max_element(since.begin(), since.end());
  std::set<Id> causes;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (since[i] != decision.flip_tick) continue;
    const Id& state = all[i].first->state;
    decision.last_flipped.push_back(all[i].first->id);
    for (const auto& c : history.completions) {
      if (c.tick == decision.flip_tick && (c.resultant_states.count(state) || c.terminated_states.count(state)))
        causes.insert(c.event);
    }
    if (auto p = spec.state_parameters.find(state); p != spec.state_parameters.end()) {
      for (const auto& u : history.updates)
        if (u.tick == decision.flip_tick && u.parameter == p->second) causes.insert(u.source);
    }
  }
  std::sort(decision.last_flipped.begin(), decision.last_flipped.end());
  decision.flipped_by.assign(causes.begin(), causes.end());
  return decision;
}

std::vector<ParameterUpdate> propagate(const Model& model, const std::map<Id, Rational>& values,
                                       const Id& changed, const Rational& new_value, Tick tick) {
  bool mentioned = std::any_of(model.equations.begin(), model.equations.end(),
                               [&](const auto& e) { return e.second.mentions(changed); });
  if (!mentioned) return {};
  auto working = values;
  working[changed] = new_value;
  std::vector<ParameterUpdate> updates;
  close_equations(model, working, {changed}, tick, updates);
  return updates;
}

Trace step(const Model& model, Tick tick, Trace world) {
  if (tick < 1 || static_cast<Tick>(world.snapshots.size()) != tick)
    throw Error("InvalidArgument", "trace is not consistent through tick " + std::to_string(tick - 1));
  const Snapshot& previous = world.snapshots.back();
  auto values = previous.values;
  std::set<Id> pinned;
  for (const auto& id : previous.active) {
    for (const auto& d : model.processes.at(id).deltas) {
      Rational& v = values[d.parameter];
      world.updates.push_back({tick, d.parameter, v, v + d.per_tick, true, id});
      v += d.per_tick;
      pinned.insert(d.parameter);
    }
  }
  close_equations(model, values, pinned, tick, world.updates);
  finish_tick(model, tick, std::move(values), world);
  return world;
}

Trace run(const Model& model, Tick horizon) {
  if (horizon < 0) throw Error("InvalidArgument", "horizon must be non-negative");
  Trace trace;
  trace.horizon = horizon;
  if (model.empty()) return trace;
  std::map<Id, Rational> values;
  for (const auto& [id, p] : model.parameters) values[id] = p.value;
  close_equations(model, values, {}, 0, trace.updates);
  finish_tick(model, 0, std::move(values), trace);
  for (Tick t = 1; t <= horizon; ++t) trace = step(model, t, std::move(trace));
  return trace;
}

VerificationReport verify_trace(const Trace& trace, const Model& model) {
  VerificationReport report;
  auto violation = [&](Tick t, const char* check, std::string message) {
    report.violations.push_back({t, check, std::move(message)});
  };

  for (const auto& snap : trace.snapshots) {
    for (const auto& [id, eq] : model.equations) {
      auto params = eq.parameters();
      bool complete = std::all_of(params.begin(), params.end(),
                                  [&](const Id& p) { return snap.values.count(p) > 0; });
      if (!complete) {
        violation(snap.tick, "equation", id + " has a parameter without a value");
      } else if (auto r = eq.residual(snap.values); r != Rational{0}) {
        violation(snap.tick, "equation", id + " is off by " + to_string(r));
      }
    }
  }

  for (const auto& [a, pa] : model.processes) {
    for (const auto& [b, pb] : model.processes) {
      // Only an equation forces two processes to run in lockstep.
      if (a == b || !coupling_equation(model, a, b)) continue;
      for (const auto& snap : trace.snapshots) {
        if (snap.active.count(a) != snap.active.count(b))
          violation(snap.tick, "simultaneity", a + " and " + b + " are not active together");
      }
    }
  }

  auto state_at = [&](Tick t, const Id& s) -> std::optional<bool> {
    if (t < 0 || t >= static_cast<Tick>(trace.snapshots.size())) return std::nullopt;
    const auto& states = trace.snapshots[static_cast<std::size_t>(t)].states;
    auto it = states.find(s);
    if (it == states.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [id, e] : model.events) {
    Tick end = e.interval.end_or(kForever);
    if (end > trace.horizon || trace.snapshots.empty()) continue;
    bool logged = std::any_of(trace.completions.begin(), trace.completions.end(),
                              [&](const Completion& c) { return c.event == id && c.tick == end; });
    if (!logged) violation(end, "event-state", id + " completion not logged");
    for (const auto& s : e.resultant_states) {
      if (state_at(end, s) != true) violation(end, "event-state", s + " does not hold when " + id + " completes");
      for (Tick t = e.interval.start; t < end; ++t) {
        if (state_at(t, s) == true) violation(t, "event-state", s + " holds before " + id + " completes");
      }
    }
  }

  for (const auto& [id, p] : model.processes) {
    if (!p.triggered()) continue;
    auto first = std::find_if(trace.snapshots.begin(), trace.snapshots.end(),
                              [&](const Snapshot& s) { return s.active.count(id) > 0; });
    if (first == trace.snapshots.end()) continue;
    bool logged = std::any_of(trace.activations.begin(), trace.activations.end(),
                              [&](const Activation& a) { return a.occurrent == id && a.tick == first->tick; });
    if (!logged) violation(first->tick, "activation", id + " runs without a logged activation");
  }

  for (const auto& a : trace.activations) {
    auto p = model.processes.find(a.occurrent);
    if (p == model.processes.end() || !p->second.triggered()) {
      violation(a.tick, "activation", a.occurrent + " is not a triggered process");
      continue;
    }
    auto spec = activation_spec(model, a.occurrent);
    bool has_preconditions = !spec.facilitative.empty() || !spec.preventive.empty();
    if (has_preconditions && a.last_flipped.empty())
      violation(a.tick, "activation", a.occurrent + " activation names no precondition");
    if (a.tick < static_cast<Tick>(trace.snapshots.size())) {
      const auto& snap = trace.snapshots[static_cast<std::size_t>(a.tick)];
      if (!snap.active.count(a.occurrent))
        violation(a.tick, "activation", a.occurrent + " is not active at its activation tick");
      try {
        if (!trigger_check(spec, snap).fire)
          violation(a.tick, "activation", a.occurrent + " preconditions are not met");
      } catch (const Error& err) {
        violation(a.tick, "activation", err.what());
      }
    }
  }

  for (const auto& u : trace.updates) {
    if (model.processes.count(u.source)) {
      if (!u.causal) violation(u.tick, "labeling", "update of " + u.parameter + " by " + u.source + " must be causal");
    } else if (model.equations.count(u.source)) {
      if (u.causal) violation(u.tick, "labeling", "update of " + u.parameter + " by " + u.source + " must be non-causal");
    } else {
      violation(u.tick, "labeling", "update of " + u.parameter + " has unknown source '" + u.source + "'");
    }
  }
  return report;
}

} // namespace causa
