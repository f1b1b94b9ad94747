#include "causa/calculus.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace causa {

namespace {

std::optional<PatternKind> pattern_of_kinds(OccurrentKind source, OccurrentKind target) {
  if (source == OccurrentKind::event && target == OccurrentKind::state) return PatternKind::event_state;
  if (source == OccurrentKind::process && target == OccurrentKind::process) return PatternKind::process_process;
  if (source == OccurrentKind::state && target == OccurrentKind::state) return PatternKind::state_state;
  return std::nullopt;
}

const char* rule_for(PatternKind p) {
  switch (p) {
    case PatternKind::event_state: return rules::achieves_event_state;
    case PatternKind::process_process: return rules::achieves_process_process;
    case PatternKind::state_state: return rules::achieves_state_state;
  }
  return "";
}

// Parameters a process moves through the predicate states it drives.
std::set<Id> driven_parameters(const Model& model, const Process& process) {
  std::set<Id> out;
  for (const auto& s : process.driven_states) {
    if (auto it = model.states.find(s); it != model.states.end())
      if (const auto* pred = it->second.predicate()) out.insert(pred->parameter);
  }
  return out;
}

std::optional<std::string> equation_coupling(const Model& model, const Process& x, const Process& z) {
  auto from = driven_parameters(model, x);
  auto to = driven_parameters(model, z);
  for (const auto& [id, eq] : model.equations) {
    if (!to.count(eq.dependent) || from.count(eq.dependent)) continue;
    for (const auto& p : eq.parameters()) {
      if (p != eq.dependent && from.count(p))
        return "equation " + id + " carries " + p + " to " + eq.dependent;
    }
  }
  return std::nullopt;
}

Derivation base_derivation(const Id& x, const Id& z, const Id& context, PatternKind kind,
                           std::string evidence) {
  Derivation d;
  d.conclusion = {x, z, Subfunction::achieves, Directness::direct, context, kind};
  d.rule = rule_for(kind);
  d.witnesses = {{"X", x}, {"Y", z}};
  d.evidence = std::move(evidence);
  return d;
}

const Context kEmptyContext{};

const Context* resolve_context(const Model& model, const Id& context) {
  if (context.empty()) return &kEmptyContext;
  return model.context(context);
}

bool is_state(const Model& model, const Id& id) { return model.states.count(id) > 0; }

// Tree heights of each rule; a derivation needs a budget at least this big.
constexpr int kPreventsHeight = 2;
constexpr int kAchieveBranchHeight = 2;
constexpr int kPreventBranchHeight = 3;

std::optional<Derivation> prevents_within(const Model& model, const Id& x, const Id& y,
                                          const Context& ctx, const Id& context_id,
                                          std::vector<Candidate>* examined) {
  if (direct_relata_rejection(model, x, y)) return std::nullopt;
  for (const auto& z : model.occurrents()) {
    if (z == y) continue;
    auto achieved = achieves(model, x, z, context_id);
    bool incompatible = ctx.incompatible(y, z);
    if (achieved && incompatible) {
      Derivation d;
      d.conclusion = {x, y, Subfunction::prevents, Directness::direct, context_id,
                      achieved->conclusion.pattern};
      d.rule = rules::prevents;
      d.witnesses = {{"X", x}, {"Y", y}, {"Z", z}};
      d.children.push_back(std::move(*achieved));
      return d;
    }
    if (examined && achieved)
      examined->push_back({z, "", "achieved by " + x + " but not incompatible with " + y});
    else if (examined && incompatible)
      examined->push_back({z, "", "incompatible with " + y + " but not achieved by " + x});
  }
  return std::nullopt;
}

enum class Via { achieve, prevent, maintain };

struct Branch {
  const char* rule;
  Via via;
  Polarity polarity;
  int height;
};

DeriveResult derive_indirect(const Model& model, const Id& x, const Id& y, const Id& context_id,
                             const DerivationOptions& options, Subfunction subfunction,
                             const std::array<Branch, 3>& branches) {
  DeriveResult result;
  result.failure.subfunction = to_string(subfunction);
  const Context* ctx = resolve_context(model, context_id);
  if (!ctx) {
    result.failure.note = "unknown context '" + context_id + "'";
    return result;
  }
  auto pres = model.preconditions_of(y);
  for (const auto& branch : branches) {
    for (const Precondition* pre : pres) {
      if (pre->polarity != branch.polarity) continue;
      const Id& z = pre->state;
      if (!is_state(model, z)) continue;
      if (branch.height > options.max_depth) {
        result.failure.depth_limited = true;
        result.failure.examined.push_back({z, branch.rule, "depth bound reached"});
        continue;
      }
      std::optional<Derivation> child;
      switch (branch.via) {
        case Via::achieve: child = achieves(model, x, z, context_id); break;
        case Via::prevent: child = prevents_within(model, x, z, *ctx, context_id, nullptr); break;
        case Via::maintain: child = maintains(model, x, z, context_id); break;
      }
      if (!child) {
        static constexpr const char* verbs[] = {"achieve", "prevent", "maintain"};
        result.failure.examined.push_back(
            {z, branch.rule,
             x + " does not " + verbs[static_cast<int>(branch.via)] + " " + z + " (" +
                 to_string(pre->polarity) + " for " + y + ")"});
        continue;
      }
      Derivation d;
      d.conclusion = {x, y, subfunction, Directness::indirect, context_id, std::nullopt};
      d.rule = branch.rule;
      d.witnesses = {{"X", x}, {"Y", y}, {"Z", z}, {"precondition", pre->id}};
      d.children.push_back(std::move(*child));
      result.derivation = std::move(d);
      return result;
    }
  }
  if (pres.empty()) result.failure.note = y + " has no declared preconditions";
  return result;
}

constexpr std::array<Branch, 3> kAllowsBranches{{
    {rules::allows_achieve, Via::achieve, Polarity::facilitative, kAchieveBranchHeight},
    {rules::allows_prevent, Via::prevent, Polarity::preventive, kPreventBranchHeight},
    {rules::allows_maintain, Via::maintain, Polarity::facilitative, kAchieveBranchHeight},
}};

constexpr std::array<Branch, 3> kDisallowsBranches{{
    {rules::disallows_achieve, Via::achieve, Polarity::preventive, kAchieveBranchHeight},
    {rules::disallows_prevent, Via::prevent, Polarity::facilitative, kPreventBranchHeight},
    {rules::disallows_maintain, Via::maintain, Polarity::preventive, kAchieveBranchHeight},
}};

} // namespace

std::optional<std::string> coupling_equation(const Model& model, const Id& x, const Id& z) {
  auto a = model.processes.find(x);
  auto b = model.processes.find(z);
  if (a == model.processes.end() || b == model.processes.end()) return std::nullopt;
  return equation_coupling(model, a->second, b->second);
}

// ---------------------------------------------------------------------------

std::optional<PatternRejection> direct_relata_rejection(const Model& model, const Id& source,
                                                        const Id& target) {
  auto ks = model.kind_of(source);
  auto kt = model.kind_of(target);
  if (ks != OccurrentKind::event || !kt) return std::nullopt;
  if (*kt == OccurrentKind::event)
    return PatternRejection{
        rule_ids::event_event,
        "no direct causation between events: " + source + " is completed before it could act on " + target,
        "route the influence through a resultant state of " + source +
            " that is a precondition of " + target};
  if (*kt == OccurrentKind::process)
    return PatternRejection{
        rule_ids::event_process,
        "an event cannot directly start a process: " + source + " -> " + target,
        "model the collision as a quick push process overlapping " + target +
            ", or let a resultant state of " + source + " allow it"};
  return std::nullopt;
}

PatternVerdict achieves_pattern(const Model& model, const Id& source, const Id& target,
                                const Id& context) {
  auto ks = model.kind_of(source);
  auto kt = model.kind_of(target);
  if (!ks || !kt)
    return PatternRejection{"REF", "unknown occurrent in " + source + " -> " + target, ""};
  if (auto rejection = direct_relata_rejection(model, source, target)) return *rejection;
  auto kind = pattern_of_kinds(*ks, *kt);
  if (!kind)
    return PatternRejection{rule_ids::achieves_pattern,
                            "Achieves relates event->state, process->process or state->state, not " +
                                to_string(*ks) + "->" + to_string(*kt),
                            ""};
  if (auto d = achieves(model, source, target, context)) return PatternMatch{*kind, d->evidence};
  return PatternRejection{rule_ids::no_evidence,
                          "no structural evidence that " + source + " achieves " + target, ""};
}

std::optional<Derivation> achieves(const Model& model, const Id& x, const Id& z, const Id& context) {
  if (x == z) return std::nullopt;
  auto kx = model.kind_of(x);
  auto kz = model.kind_of(z);
  if (!kx || !kz) return std::nullopt;
  auto kind = pattern_of_kinds(*kx, *kz);
  if (!kind) return std::nullopt;

  if (*kind == PatternKind::event_state && model.events.at(x).resultant_states.count(z))
    return base_derivation(x, z, context, *kind, "resultant state of " + x);

  if (*kind == PatternKind::process_process && overlaps(model, x, z)) {
    if (auto coupling = equation_coupling(model, model.processes.at(x), model.processes.at(z)))
      return base_derivation(x, z, context, *kind, *coupling);
  }

  for (const auto& link : model.links) {
    if (link.source != x || link.target != z || link.directness != Directness::direct) continue;
    if (link.subfunction && *link.subfunction != Subfunction::achieves) continue;
    if (!link.context.empty() && !context.empty() && link.context != context) continue;
    if (*kind == PatternKind::process_process && !overlaps(model, x, z)) continue;
    return base_derivation(x, z, context, *kind, "asserted");
  }
  return std::nullopt;
}

std::optional<Derivation> maintains(const Model& model, const Id& x, const Id& z, const Id& context) {
  auto it = model.maintains.find(x);
  if (it == model.maintains.end()) return std::nullopt;
  const Maintain& mt = it->second;
  if (mt.state != z || mt.interval.empty()) return std::nullopt;
  if (!mt.context.empty() && !context.empty() && mt.context != context) return std::nullopt;
  Derivation d;
  d.conclusion = {x, z, Subfunction::maintain, Directness::indirect, context, std::nullopt};
  d.rule = rules::maintains;
  d.witnesses = {{"X", x}, {"Y", z}};
  d.evidence = "unchanged over " + to_string(mt.interval);
  return d;
}

std::string NoWitness::message() const {
  std::string out = "no witness for " + subfunction;
  if (!note.empty()) out += ": " + note;
  if (depth_limited) out += " (derivation depth bound reached)";
  for (const auto& c : examined) {
    out += "\n  Z=" + c.witness;
    if (!c.branch.empty()) out += " [" + c.branch + "]";
    out += ": " + c.reason;
  }
  return out;
}

DeriveResult derive_prevents(const Model& model, const Id& x, const Id& y, const Id& context,
                             const DerivationOptions& options) {
  DeriveResult result;
  result.failure.subfunction = to_string(Subfunction::prevents);
  if (auto rejection = direct_relata_rejection(model, x, y)) {
    result.failure.note = rejection->rule_id + ": " + rejection->message;
    return result;
  }
  const Context* ctx = resolve_context(model, context);
  if (!ctx) {
    result.failure.note = "unknown context '" + context + "'";
    return result;
  }
  if (options.max_depth < kPreventsHeight) {
    result.failure.depth_limited = true;
    return result;
  }
  result.derivation = prevents_within(model, x, y, *ctx, context, &result.failure.examined);
  if (!result.derivation && result.failure.examined.empty())
    result.failure.note = "no occurrent achieved by " + x + " is declared incompatible with " + y;
  return result;
}

DeriveResult derive_allows(const Model& model, const Id& x, const Id& y, const Id& context,
                           const DerivationOptions& options) {
  return derive_indirect(model, x, y, context, options, Subfunction::allows, kAllowsBranches);
}

DeriveResult derive_disallows(const Model& model, const Id& x, const Id& y, const Id& context,
                              const DerivationOptions& options) {
  return derive_indirect(model, x, y, context, options, Subfunction::disallows, kDisallowsBranches);
}

Maintain maintain(const Model& model, const Id& state, const Interval& interval, const Id& context,
                  const Id& id) {
  if (!model.states.count(state)) throw Error("UnknownId", "no state '" + state + "'");
  if (!model.state_declared_at(state, interval.start, context))
    throw Error("StateNotHolding",
                "state '" + state + "' does not hold at tick " + std::to_string(interval.start));
  Maintain m;
  m.id = id.empty() ? "maintain:" + state : id;
  m.state = state;
  m.interval = interval;
  m.context = context;
  return m;
}

std::vector<Derivation> classify_link(const Model& model, const Id& source, const Id& target,
                                      const Id& context, const DerivationOptions& options) {
  std::vector<Derivation> out;
  if (options.max_depth >= 1) {
    if (auto d = achieves(model, source, target, context)) out.push_back(std::move(*d));
  }
  if (auto r = derive_prevents(model, source, target, context, options)) out.push_back(std::move(*r.derivation));
  if (auto r = derive_allows(model, source, target, context, options)) out.push_back(std::move(*r.derivation));
  if (auto r = derive_disallows(model, source, target, context, options)) out.push_back(std::move(*r.derivation));
  if (auto d = maintains(model, source, target, context)) out.push_back(std::move(*d));
  return out;
}

std::vector<Id> analysis_contexts(const Model& model) {
  if (model.contexts.empty()) return {Id{}};
  std::vector<Id> out;
  for (const auto& [id, _] : model.contexts) out.push_back(id);
  return out;
}

bool recheck(const Model& model, const Derivation& d) {
  auto witness = [&](const char* name) -> const Id* {
    auto it = d.witnesses.find(name);
    return it == d.witnesses.end() ? nullptr : &it->second;
  };
  for (const auto& [name, id] : d.witnesses) {
    if (name == "precondition" ? !model.preconditions.count(id) : !model.is_occurrent(id)) return false;
  }
  const Id* x = witness("X");
  const Id* y = witness("Y");
  if (!x || !y || *x != d.conclusion.source || *y != d.conclusion.target) return false;
  const Id& ctx = d.conclusion.context;

  if (d.rule == rules::achieves_event_state || d.rule == rules::achieves_process_process ||
      d.rule == rules::achieves_state_state) {
    auto again = achieves(model, *x, *y, ctx);
    return again && again->rule == d.rule && d.children.empty();
  }
  if (d.rule == rules::maintains) return maintains(model, *x, *y, ctx).has_value();

  const Id* z = witness("Z");
  if (!z || d.children.size() != 1 || !recheck(model, d.children.front())) return false;
  const Derivation& child = d.children.front();
  if (child.conclusion.source != *x || child.conclusion.target != *z) return false;
  if (child.conclusion.context != ctx) return false;

  if (d.rule == rules::prevents) {
    const Context* c = resolve_context(model, ctx);
    return c && c->incompatible(*y, *z) && child.conclusion.subfunction == Subfunction::achieves &&
           !direct_relata_rejection(model, *x, *y);
  }

  const Id* pre_id = witness("precondition");
  if (!pre_id) return false;
  const Precondition& pre = model.preconditions.at(*pre_id);
  if (pre.occurrent != *y || pre.state != *z) return false;

  struct Expect { const char* rule; Subfunction via; Polarity polarity; };
  static constexpr Expect table[] = {
      {rules::allows_achieve, Subfunction::achieves, Polarity::facilitative},
      {rules::allows_prevent, Subfunction::prevents, Polarity::preventive},
      {rules::allows_maintain, Subfunction::maintain, Polarity::facilitative},
      {rules::disallows_achieve, Subfunction::achieves, Polarity::preventive},
      {rules::disallows_prevent, Subfunction::prevents, Polarity::facilitative},
      {rules::disallows_maintain, Subfunction::maintain, Polarity::preventive},
  };
  for (const auto& e : table) {
    if (d.rule == e.rule) return child.conclusion.subfunction == e.via && pre.polarity == e.polarity;
  }
  return false;
}

// ---------------------------------------------------------------------------

std::string to_string(PlacementCase p) {
  switch (p) {
    case PlacementCase::a: return "a";
    case PlacementCase::b: return "b";
    case PlacementCase::c: return "c";
    case PlacementCase::d: return "d";
  }
  return "?";
}

PlacementVerdict interaction_placement(const Model& model, const Id& c, const Id& e) {
  PlacementVerdict v;
  auto ic = model.interval_of(c);
  auto ie = model.interval_of(e);
  if (!ic || !ie) {
    v.diagnostic = "both occurrents need intervals to place their interaction";
    return v;
  }
  if (overlaps(*ic, *ie)) {
    v.placement = PlacementCase::d;
    v.valid = true;
    v.directness = Directness::direct;
    v.diagnostic = "the occurrents share ticks, so the interaction lies inside both";
    return v;
  }

  std::set<Id> produced;
  switch (*model.kind_of(c)) {
    case OccurrentKind::event: produced = model.events.at(c).resultant_states; break;
    case OccurrentKind::process: produced = model.processes.at(c).driven_states; break;
    case OccurrentKind::maintain: produced = {model.maintains.at(c).state}; break;
    case OccurrentKind::state: produced = {c}; break;
  }
  std::set<Id> preconditions;
  for (const Precondition* p : model.preconditions_of(e)) preconditions.insert(p->state);
  for (const auto& z : produced) {
    bool related = preconditions.count(z) > 0;
    for (const auto& [id, ctx] : model.contexts) related = related || ctx.incompatible(z, e);
    if (related) {
      v.mediating_state = z;
      break;
    }
  }

  if (ic->end_or(kForever) > ie->start) {
    v.diagnostic = "the effect precedes its cause";
    return v;
  }
  if (!v.mediating_state.empty()) {
    v.placement = PlacementCase::a;
    v.valid = true;
    v.directness = Directness::indirect;
    v.diagnostic = "mediated by state " + v.mediating_state;
    return v;
  }
  if (meets(*ic, *ie)) {
    v.placement = model.kind_of(c) == OccurrentKind::process ? PlacementCase::b : PlacementCase::c;
    v.diagnostic =
        "the occurrents share only a boundary instant; a direct interaction needs at least one "
        "common tick to transfer anything";
    return v;
  }
  v.placement = PlacementCase::a;
  v.diagnostic = "nothing can interact after the cause completed and before the effect began "
                 "unless a state mediates";
  return v;
}

// ---------------------------------------------------------------------------

bool chain_continues(const Model& model, const CausalLink& previous, const CausalLink& next) {
  if (next.source == previous.target) return true;
  auto it = model.maintains.find(next.source);
  return it != model.maintains.end() && !it->second.omits.empty() && it->second.omits == previous.target;
}

ChainReport validate_chain(const Model& model, std::span<const CausalLink> chain,
                           const DerivationOptions& options) {
  ChainReport report;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (!chain_continues(model, chain[i - 1], chain[i]))
      throw Error("BrokenChain", "link " + std::to_string(i) + " (" + chain[i].source + " -> " +
                                     chain[i].target + ") does not continue from " + chain[i - 1].target);
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const CausalLink& link = chain[i];
    auto issue = [&](std::string rule, std::string message) {
      report.issues.push_back({i, std::move(rule), std::move(message)});
    };
    if (link.subfunction == Subfunction::allows || link.subfunction == Subfunction::disallows)
      report.necessary = false;
    if (link.subfunction == Subfunction::maintain) {
      issue("SUBFUNCTION", "a chain link must carry Achieves, Prevents, Allows or Disallows");
      report.derivations.emplace_back();
      continue;
    }
    if ((link.directness == Directness::direct) != is_direct(link.subfunction))
      issue(rule_ids::directness, to_string(link.subfunction) + " cannot be " + to_string(link.directness));
    if (link.directness == Directness::direct) {
      if (auto rejection = direct_relata_rejection(model, link.source, link.target))
        issue(rejection->rule_id, rejection->message);
      if (!link.pattern) issue(rule_ids::achieves_pattern, "direct link without a pattern");
    }

    std::optional<Derivation> d;
    switch (link.subfunction) {
      case Subfunction::achieves: d = achieves(model, link.source, link.target, link.context); break;
      case Subfunction::prevents:
        d = derive_prevents(model, link.source, link.target, link.context, options).derivation;
        break;
      case Subfunction::allows:
        d = derive_allows(model, link.source, link.target, link.context, options).derivation;
        break;
      case Subfunction::disallows:
        d = derive_disallows(model, link.source, link.target, link.context, options).derivation;
        break;
      case Subfunction::maintain: break;
    }
    if (!d) {
      issue("NOT-DERIVABLE", link.source + " " + to_string(link.subfunction) + " " + link.target +
                                 " is not derivable in the model");
    } else if (link.directness == Directness::indirect &&
               (!d->witnesses.count("Z") || !model.states.count(d->witnesses.at("Z")))) {
      issue("NO-MEDIATOR", "indirect link without a mediating state");
    } else if (link.pattern && d->conclusion.pattern && *link.pattern != *d->conclusion.pattern) {
      issue(rule_ids::achieves_pattern, "declared pattern " + to_string(*link.pattern) +
                                            " but derived " + to_string(*d->conclusion.pattern));
    }
    report.derivations.push_back(std::move(d));
  }
  report.valid = report.issues.empty();
  return report;
}

// ---------------------------------------------------------------------------

StateReduction reduce_state_state(const CausalLink& link, const Model& model) {
  auto s1 = model.states.find(link.source);
  auto s2 = model.states.find(link.target);
  if (s1 == model.states.end() || s2 == model.states.end())
    throw Error("NotStateState", link.source + " -> " + link.target + " is not a state-state link");
  if (s1->second.hints.primitive || s2->second.hints.primitive)
    throw Error("NoUnderlyingProcess",
                link.source + " -> " + link.target + " relates declared-primitive states");

  std::vector<Id> drivers1, drivers2;
  for (const auto& [id, p] : model.processes) {
    if (p.driven_states.count(link.source)) drivers1.push_back(id);
    if (p.driven_states.count(link.target)) drivers2.push_back(id);
  }
  for (const auto& p1 : drivers1) {
    for (const auto& p2 : drivers2) {
      auto d = achieves(model, p1, p2, link.context);
      if (!d) continue;
      StateReduction out;
      out.process_link = d->conclusion;
      for (const auto& [eid, e] : model.events) {
        if (!constitutes(model, p1, eid)) continue;
        out.completion_event = eid;
        if (e.resultant_states.count(link.target))
          out.completion_link = CausalLink{eid, link.target, Subfunction::achieves, Directness::direct,
                                           link.context, PatternKind::event_state};
        break;
      }
      return out;
    }
  }
  throw Error("NoUnderlyingProcess", "no concurrent processes drive " + link.source + " and " +
                                         link.target + "; the link is primitive at this granularity");
}

// ---------------------------------------------------------------------------

std::vector<Issue> check_links(const Model& model) {
  std::vector<Issue> issues;
  for (const auto& link : model.links) {
    auto ks = model.kind_of(link.source);
    auto kt = model.kind_of(link.target);
    if (!ks || !kt) continue;
    const std::string key = link.key();
    if (link.directness == Directness::direct) {
      if (link.subfunction && !is_direct(*link.subfunction)) {
        issues.push_back({Severity::error, rule_ids::directness, key,
                          to_string(*link.subfunction) + " is an indirect subfunction"});
        continue;
      }
      if (auto rejection = direct_relata_rejection(model, link.source, link.target)) {
        issues.push_back({Severity::error, rejection->rule_id, key,
                          rejection->message + "; " + rejection->rewrite_hint});
        continue;
      }
      bool achieves_link = !link.subfunction || *link.subfunction == Subfunction::achieves;
      if (achieves_link && !pattern_of_kinds(*ks, *kt)) {
        issues.push_back({Severity::error, rule_ids::achieves_pattern, key,
                          "Achieves relates event->state, process->process or state->state, not " +
                              to_string(*ks) + "->" + to_string(*kt)});
        continue;
      }
      if (achieves_link && *ks == OccurrentKind::process && !overlaps(model, link.source, link.target))
        issues.push_back({Severity::warning, "SIMULTANEITY", key,
                          "direct process->process link between processes that never overlap"});
      continue;
    }
    if (link.subfunction && is_direct(*link.subfunction)) {
      issues.push_back({Severity::error, rule_ids::directness, key,
                        to_string(*link.subfunction) + " is a direct subfunction"});
      continue;
    }
    std::vector<Id> contexts = link.context.empty() ? analysis_contexts(model) : std::vector<Id>{link.context};
    bool derivable = false;
    for (const auto& ctx : contexts) {
      for (const auto& d : classify_link(model, link.source, link.target, ctx)) {
        if (!link.subfunction || d.conclusion.subfunction == *link.subfunction) derivable = true;
      }
    }
    if (!derivable)
      issues.push_back({Severity::warning, "NOT-DERIVABLE", key,
                        "asserted " + (link.subfunction ? to_string(*link.subfunction) : std::string("link")) +
                            " is not derivable from the model"});
  }
  return issues;
}

std::vector<Issue> check_model(const Model& model) {
  auto issues = validate_structure(model);
  if (!has_errors(issues)) {
    auto more = check_links(model);
    issues.insert(issues.end(), more.begin(), more.end());
  }
  return issues;
}

} // namespace causa
