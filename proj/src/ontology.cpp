#include "causa/ontology.hpp"

#include <algorithm>
#include <functional>

namespace causa {

bool overlaps(const Interval& a, const Interval& b, Tick horizon) {
  Tick lo = std::max(a.start, b.start);
  Tick hi = std::min(a.end_or(horizon), b.end_or(horizon));
  return lo < hi;
}

bool meets(const Interval& a, const Interval& b, Tick horizon) {
  return a.end_or(horizon) == b.start && !overlaps(a, b, horizon);
}

std::string to_string(const Interval& interval) {
  return "[" + std::to_string(interval.start) + "," +
         (interval.end ? std::to_string(*interval.end) : std::string("open")) + ")";
}

std::string to_string(Subfunction s) {
  switch (s) {
    case Subfunction::achieves: return "Achieves";
    case Subfunction::prevents: return "Prevents";
    case Subfunction::allows: return "Allows";
    case Subfunction::disallows: return "Disallows";
    case Subfunction::maintain: return "Maintain";
  }
  return "?";
}

std::optional<Subfunction> parse_subfunction(std::string_view text) {
  for (auto s : {Subfunction::achieves, Subfunction::prevents, Subfunction::allows,
                 Subfunction::disallows, Subfunction::maintain}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::string to_string(Directness d) { return d == Directness::direct ? "direct" : "indirect"; }

std::string to_string(PatternKind p) {
  switch (p) {
    case PatternKind::event_state: return "E->S";
    case PatternKind::process_process: return "P->P";
    case PatternKind::state_state: return "S->S";
  }
  return "?";
}

std::string to_string(Polarity p) {
  return p == Polarity::facilitative ? "facilitative" : "preventive";
}

std::string to_string(OccurrentKind k) {
  switch (k) {
    case OccurrentKind::state: return "state";
    case OccurrentKind::process: return "process";
    case OccurrentKind::event: return "event";
    case OccurrentKind::maintain: return "maintain";
  }
  return "?";
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::lt: return "lt";
    case Comparison::le: return "le";
    case Comparison::eq: return "eq";
    case Comparison::ne: return "ne";
    case Comparison::ge: return "ge";
    case Comparison::gt: return "gt";
  }
  return "?";
}

std::optional<Comparison> parse_comparison(std::string_view text) {
  for (auto c : {Comparison::lt, Comparison::le, Comparison::eq, Comparison::ne,
                 Comparison::ge, Comparison::gt}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

bool ParameterPredicate::holds_for(const Rational& value) const {
  switch (op) {
    case Comparison::lt: return value < threshold;
    case Comparison::le: return value <= threshold;
    case Comparison::eq: return value == threshold;
    case Comparison::ne: return value != threshold;
    case Comparison::ge: return value >= threshold;
    case Comparison::gt: return value > threshold;
  }
  return false;
}

std::vector<Id> Equation::parameters() const {
  std::vector<Id> out{lhs};
  for (const auto& term : rhs) out.push_back(term.parameter);
  return out;
}

bool Equation::mentions(const Id& parameter) const {
  auto params = parameters();
  return std::find(params.begin(), params.end(), parameter) != params.end();
}

Rational Equation::residual(const std::map<Id, Rational>& values) const {
  Rational sum = values.at(lhs);
  for (const auto& term : rhs) sum -= term.coefficient * values.at(term.parameter);
  return sum;
}

Rational Equation::solve(const std::map<Id, Rational>& values) const {
  // Coefficient of the dependent on the lhs-minus-rhs side.
  Rational own{0};
  Rational rest{0};
  if (lhs == dependent) own += 1; else rest += values.at(lhs);
  for (const auto& term : rhs) {
    if (term.parameter == dependent) own -= term.coefficient;
    else rest -= term.coefficient * values.at(term.parameter);
  }
  if (own == Rational{0}) throw Error("UnderdeterminedSystem", "equation " + id + " does not fix " + dependent);
  return -rest / own;
}

bool Context::incompatible(const Id& a, const Id& b) const {
  if (a == b) return false;
  for (const auto& [group, members] : exclusions) {
    if (members.count(a) && members.count(b)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

bool Model::empty() const {
  return entities.empty() && parameters.empty() && states.empty() && processes.empty() &&
         events.empty() && maintains.empty() && preconditions.empty() && equations.empty() &&
         contexts.empty() && links.empty();
}

std::optional<OccurrentKind> Model::kind_of(const Id& id) const {
  if (states.count(id)) return OccurrentKind::state;
  if (processes.count(id)) return OccurrentKind::process;
  if (events.count(id)) return OccurrentKind::event;
  if (maintains.count(id)) return OccurrentKind::maintain;
  return std::nullopt;
}

std::vector<Id> Model::occurrents() const {
  std::vector<Id> out;
  for (const auto& [id, _] : states) out.push_back(id);
  for (const auto& [id, _] : processes) out.push_back(id);
  for (const auto& [id, _] : events) out.push_back(id);
  for (const auto& [id, _] : maintains) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Interval> Model::interval_of(const Id& occurrent) const {
  if (auto it = states.find(occurrent); it != states.end()) return it->second.interval;
  if (auto it = processes.find(occurrent); it != processes.end()) return it->second.interval;
  if (auto it = events.find(occurrent); it != events.end()) return it->second.interval;
  if (auto it = maintains.find(occurrent); it != maintains.end()) return it->second.interval;
  return std::nullopt;
}

std::set<Id> Model::participants_of(const Id& occurrent) const {
  if (auto it = processes.find(occurrent); it != processes.end()) return it->second.participants;
  if (auto it = events.find(occurrent); it != events.end()) {
    if (auto p = processes.find(it->second.constituted_by); p != processes.end())
      return p->second.participants;
    return {};
  }
  if (auto it = states.find(occurrent); it != states.end()) {
    if (!it->second.bearer.empty()) return {it->second.bearer};
    if (const auto* pred = it->second.predicate()) {
      if (auto p = parameters.find(pred->parameter); p != parameters.end() && !p->second.bearer.empty())
        return {p->second.bearer};
    }
    return {};
  }
  if (auto it = maintains.find(occurrent); it != maintains.end()) return participants_of(it->second.state);
  return {};
}

const Hints* Model::hints_of(const Id& occurrent) const {
  if (auto it = states.find(occurrent); it != states.end()) return &it->second.hints;
  if (auto it = processes.find(occurrent); it != processes.end()) return &it->second.hints;
  if (auto it = events.find(occurrent); it != events.end()) return &it->second.hints;
  return nullptr;
}

std::vector<const Precondition*> Model::preconditions_of(const Id& occurrent) const {
  std::vector<const Precondition*> out;
  for (const auto& [id, pre] : preconditions) {
    if (pre.occurrent == occurrent) out.push_back(&pre);
  }
  return out;
}

const Context* Model::context(const Id& id) const {
  auto it = contexts.find(id);
  return it == contexts.end() ? nullptr : &it->second;
}

bool Model::state_declared_at(const Id& state, Tick t, const Id& context_id) const {
  if (const Context* ctx = context(context_id); ctx && ctx->assumptions.count(state)) return true;
  auto it = states.find(state);
  if (it == states.end()) return false;
  return it->second.interval && it->second.interval->contains(t);
}

void Model::normalize() {
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
}

bool overlaps(const Model& model, const Id& a, const Id& b, Tick horizon) {
  auto ia = model.interval_of(a);
  auto ib = model.interval_of(b);
  return ia && ib && overlaps(*ia, *ib, horizon);
}

bool meets(const Model& model, const Id& a, const Id& b, Tick horizon) {
  auto ia = model.interval_of(a);
  auto ib = model.interval_of(b);
  return ia && ib && meets(*ia, *ib, horizon);
}

bool constitutes(const Model& model, const Id& process, const Id& event) {
  auto e = model.events.find(event);
  auto p = model.processes.find(process);
  if (e == model.events.end() || p == model.processes.end()) return false;
  return e->second.constituted_by == process && p->second.interval == e->second.interval;
}

// ---------------------------------------------------------------------------

bool has_errors(const std::vector<Issue>& issues) {
  return std::any_of(issues.begin(), issues.end(),
                     [](const Issue& i) { return i.severity == Severity::error; });
}

namespace {

class Validator {
 public:
  explicit Validator(const Model& model) : m_(model) {}

  std::vector<Issue> run() {
    for (const auto& [id, p] : m_.parameters) check_parameter(p);
    for (const auto& [id, s] : m_.states) check_state(s);
    for (const auto& [id, p] : m_.processes) check_process(p);
    for (const auto& [id, e] : m_.events) check_event(e);
    for (const auto& [id, mt] : m_.maintains) check_maintain(mt);
    for (const auto& [id, pre] : m_.preconditions) check_precondition(pre);
    check_equations();
    for (const auto& [id, c] : m_.contexts) check_context(c);
    for (const auto& link : m_.links) check_link_refs(link);
    check_refinement_cycles();
    return std::move(issues_);
  }

 private:
  void error(const std::string& rule, const Id& subject, std::string message) {
    issues_.push_back({Severity::error, rule, subject, std::move(message)});
  }
  void warning(const std::string& rule, const Id& subject, std::string message) {
    issues_.push_back({Severity::warning, rule, subject, std::move(message)});
  }

  void need_entity(const Id& subject, const Id& ref, const char* what) {
    if (!ref.empty() && !m_.entities.count(ref))
      error("REF", subject, std::string(what) + " '" + ref + "' is not a declared entity");
  }
  void need_state(const Id& subject, const Id& ref, const char* what) {
    if (!m_.states.count(ref))
      error("REF", subject, std::string(what) + " '" + ref + "' is not a declared state");
  }
  void need_occurrent(const Id& subject, const Id& ref, const char* what) {
    if (!m_.is_occurrent(ref))
      error("REF", subject, std::string(what) + " '" + ref + "' is not a declared occurrent");
  }
  void need_parameter(const Id& subject, const Id& ref, const char* what) {
    if (!m_.parameters.count(ref))
      error("REF", subject, std::string(what) + " '" + ref + "' is not a declared parameter");
  }

  void check_interval(const Id& subject, const Interval& iv) {
    if (iv.start < 0) error("INTERVAL", subject, "interval starts before tick 0");
    if (iv.end && *iv.end < iv.start) error("INTERVAL", subject, "interval ends before it starts");
  }

  void check_hints(const Id& subject, const Hints& h) {
    for (const auto& r : h.refines_into) {
      need_occurrent(subject, r, "refinement");
      if (r == subject) error("REFINE-CYCLE", subject, "occurrent refines into itself");
    }
    need_entity(subject, h.operand, "operand");
    need_entity(subject, h.medium, "medium");
    need_entity(subject, h.conduit_region, "conduit region");
    if (auto it = m_.entities.find(h.conduit_region);
        it != m_.entities.end() && it->second.kind != EntityKind::region)
      error("REF", subject, "conduit region '" + h.conduit_region + "' is not declared as a region");
  }

  void check_parameter(const Parameter& p) { need_entity(p.id, p.bearer, "bearer"); }

  void check_state(const State& s) {
    need_entity(s.id, s.bearer, "bearer");
    if (const auto* pred = s.predicate()) {
      need_parameter(s.id, pred->parameter, "predicate parameter");
      if (s.interval)
        warning("STATE-SCHEDULE", s.id,
                "predicate states take their truth from parameter values; the declared interval is ignored in simulation");
    } else if (std::get<Proposition>(s.condition).name.empty()) {
      error("STATE-CONDITION", s.id, "state needs a proposition or a parameter predicate");
    }
    if (s.interval) check_interval(s.id, *s.interval);
    check_hints(s.id, s.hints);
  }

  void check_process(const Process& p) {
    for (const auto& e : p.participants) need_entity(p.id, e, "participant");
    for (const auto& s : p.driven_states) need_state(p.id, s, "driven state");
    if (p.kind == ProcessKind::operand_bearing && p.driven_states.empty())
      error("OPERAND", p.id, "operand-bearing process drives no state");
    std::set<Id> driven_params;
    for (const auto& s : p.driven_states) {
      if (auto it = m_.states.find(s); it != m_.states.end())
        if (const auto* pred = it->second.predicate()) driven_params.insert(pred->parameter);
    }
    for (const auto& d : p.deltas) {
      need_parameter(p.id, d.parameter, "delta parameter");
      if (m_.parameters.count(d.parameter) && !driven_params.count(d.parameter))
        error("DELTA", p.id, "delta on '" + d.parameter + "' which no driven state is about");
    }
    if (p.interval) {
      check_interval(p.id, *p.interval);
      if (p.duration) error("TRIGGER", p.id, "duration is only meaningful for triggered processes");
    } else if (p.duration && *p.duration < 1) {
      error("TRIGGER", p.id, "duration must be at least one tick");
    }
    check_hints(p.id, p.hints);
  }

  void check_event(const Event& e) {
    check_interval(e.id, e.interval);
    if (!e.interval.end || *e.interval.end <= e.interval.start)
      error("EVENT-CLOSED", e.id, "an event spans a closed, non-empty interval");
    auto p = m_.processes.find(e.constituted_by);
    if (p == m_.processes.end()) {
      error("REF", e.id, "constituting process '" + e.constituted_by + "' is not a declared process");
    } else if (p->second.triggered() || *p->second.interval != e.interval) {
      error("CONSTITUTION", e.id,
            "event interval must equal the interval of its constituting process '" + e.constituted_by + "'");
    }
    for (const auto& s : e.resultant_states) {
      need_state(e.id, s, "resultant state");
      auto it = m_.states.find(s);
      if (it != m_.states.end() && it->second.interval && e.interval.end &&
          it->second.interval->start != *e.interval.end)
        error("RESULTANT-TIMING", e.id,
              "resultant state '" + s + "' must begin at the event's completion tick " +
                  std::to_string(*e.interval.end));
    }
    for (const auto& s : e.terminated_states) need_state(e.id, s, "terminated state");
    check_hints(e.id, e.hints);
  }

  void check_maintain(const Maintain& mt) {
    check_interval(mt.id, mt.interval);
    if (mt.interval.is_open()) error("INTERVAL", mt.id, "a maintain spans a closed interval");
    if (!mt.context.empty() && !m_.contexts.count(mt.context))
      error("REF", mt.id, "context '" + mt.context + "' is not declared");
    if (!mt.omits.empty()) need_occurrent(mt.id, mt.omits, "omitted occurrent");
    if (!m_.states.count(mt.state)) {
      need_state(mt.id, mt.state, "maintained state");
    } else if (!m_.state_declared_at(mt.state, mt.interval.start, mt.context)) {
      error("MAINTAIN", mt.id,
            "state '" + mt.state + "' does not hold at tick " + std::to_string(mt.interval.start));
    }
  }

  void check_precondition(const Precondition& pre) {
    need_occurrent(pre.id, pre.occurrent, "occurrent");
    need_state(pre.id, pre.state, "condition");
    if (m_.maintains.count(pre.occurrent))
      warning("MAINTAIN-TARGET", pre.id, "precondition attached to a maintain occurrent");
  }

  void check_equations() {
    std::map<Id, Id> dependent_owner;
    for (const auto& [id, eq] : m_.equations) {
      std::set<Id> seen;
      for (const auto& p : eq.parameters()) {
        need_parameter(id, p, "equation parameter");
        if (!seen.insert(p).second) error("EQUATION", id, "parameter '" + p + "' appears twice");
      }
      for (const auto& t : eq.rhs)
        if (t.coefficient == Rational{0}) error("EQUATION", id, "zero coefficient on '" + t.parameter + "'");
      if (!eq.mentions(eq.dependent))
        error("EQUATION", id, "dependent '" + eq.dependent + "' does not occur in the equation");
      if (auto [it, fresh] = dependent_owner.emplace(eq.dependent, id); !fresh)
        warning("EQUATION-DEPENDENT", id,
                "'" + eq.dependent + "' is also the dependent of equation " + it->second);
    }
  }

  void check_context(const Context& c) {
    for (const auto& s : c.assumptions) need_state(c.id, s, "assumption");
    for (const auto& [group, members] : c.exclusions) {
      for (const auto& m : members) need_occurrent(group, m, "exclusion member");
      if (members.size() < 2)
        warning("EXCLUSION", group, "exclusion group with fewer than two members excludes nothing");
    }
  }

  void check_link_refs(const AssertedLink& link) {
    need_occurrent(link.key(), link.source, "link source");
    need_occurrent(link.key(), link.target, "link target");
    if (!link.context.empty() && !m_.contexts.count(link.context))
      error("REF", link.key(), "context '" + link.context + "' is not declared");
    if (m_.maintains.count(link.target))
      warning("MAINTAIN-TARGET", link.key(), "a maintain occurrent is the target of a causal link");
  }

  void check_refinement_cycles() {
    std::map<Id, int> mark;  // 0 unvisited, 1 on stack, 2 done
    std::function<bool(const Id&)> visit = [&](const Id& id) -> bool {
      int& m = mark[id];
      if (m == 1) return true;
      if (m == 2) return false;
      m = 1;
      if (const Hints* h = m_.hints_of(id)) {
        for (const auto& r : h->refines_into)
          if (r != id && visit(r)) return true;
      }
      mark[id] = 2;
      return false;
    };
    for (const auto& id : m_.occurrents()) {
      if (mark[id] == 0 && visit(id))
        error("REFINE-CYCLE", id, "refinement of '" + id + "' is cyclic");
    }
  }

  const Model& m_;
  std::vector<Issue> issues_;
};

} // namespace

std::vector<Issue> validate_structure(const Model& model) { return Validator(model).run(); }

} // namespace causa
