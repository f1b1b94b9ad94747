#pragma once

#include "causa/ontology.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace causa {

/// One causal assertion between two occurrents.
struct CausalLink {
  Id source;
  Id target;
  Subfunction subfunction = Subfunction::achieves;
  Directness directness = Directness::direct;
  Id context;
  std::optional<PatternKind> pattern;

  bool operator==(const CausalLink&) const = default;
};

/// Proof tree for a link. `witnesses` binds the rule variables (X, Y, Z, W)
/// to model ids; `children` are the sub-derivations the rule body used.
struct Derivation {
  CausalLink conclusion;
  std::string rule;
  std::map<std::string, Id> witnesses;
  std::string evidence;
  std::vector<Derivation> children;

  bool operator==(const Derivation&) const = default;
};

// Rule identifiers.
namespace rules {
inline constexpr const char* achieves_event_state = "achieves.event-state";
inline constexpr const char* achieves_process_process = "achieves.process-process";
inline constexpr const char* achieves_state_state = "achieves.state-state";
inline constexpr const char* maintains = "maintains";
inline constexpr const char* prevents = "prevents.achieve-incompatible";
inline constexpr const char* allows_achieve = "allows.achieve-facilitative";
inline constexpr const char* allows_prevent = "allows.prevent-preventive";
inline constexpr const char* allows_maintain = "allows.maintain-facilitative";
inline constexpr const char* disallows_achieve = "disallows.achieve-preventive";
inline constexpr const char* disallows_prevent = "disallows.prevent-facilitative";
inline constexpr const char* disallows_maintain = "disallows.maintain-preventive";
}  // namespace rules

// Diagnostic rule ids for illegal direct relata.
namespace rule_ids {
inline constexpr const char* event_event = "CLAIM3";
inline constexpr const char* event_process = "EVENT-PROCESS";
inline constexpr const char* achieves_pattern = "ACHIEVES-PATTERN";
inline constexpr const char* no_evidence = "NO-EVIDENCE";
inline constexpr const char* directness = "DIRECTNESS";
}  // namespace rule_ids

struct DerivationOptions {
  /// Bound on derivation tree height. Prevents nests Achieves, and the
  /// indirect subfunctions nest Prevents, so 3 suffices for every rule.
  int max_depth = 8;
};

// ---------------------------------------------------------------------------
// Achieves patterns.

struct PatternMatch {
  PatternKind kind;
  std::string evidence;
};

struct PatternRejection {
  std::string rule_id;
  std::string message;
  std::string rewrite_hint;
};

using PatternVerdict = std::variant<PatternMatch, PatternRejection>;

/// Decides whether source -> target can be a direct Achieves and on which
/// pattern. Event -> event and event -> process are always rejected, with a
/// hint at the state-mediated rewrite.
PatternVerdict achieves_pattern(const Model& model, const Id& source, const Id& target,
                                const Id& context = {});

/// Kind-level legality of a direct link, independent of evidence. Returns the
/// rejection for E->E and E->P, nullopt otherwise.
std::optional<PatternRejection> direct_relata_rejection(const Model& model, const Id& source,
                                                        const Id& target);

/// Equation through which process z's parameters follow process x's, if any.
std::optional<std::string> coupling_equation(const Model& model, const Id& x, const Id& z);

/// Base Achieves facts: resultant states of events, equation-coupled or
/// asserted concurrent processes, asserted state-state links.
std::optional<Derivation> achieves(const Model& model, const Id& x, const Id& z,
                                   const Id& context = {});

/// x is a maintain occurrent over a non-empty interval keeping z unchanged.
std::optional<Derivation> maintains(const Model& model, const Id& x, const Id& z,
                                    const Id& context = {});

// ---------------------------------------------------------------------------
// Derived subfunctions.

struct Candidate {
  Id witness;
  std::string branch;
  std::string reason;
};

struct NoWitness {
  std::string subfunction;
  std::vector<Candidate> examined;
  bool depth_limited = false;
  std::string note;

  [[nodiscard]] std::string message() const;
};

struct DeriveResult {
  std::optional<Derivation> derivation;
  NoWitness failure;

  explicit operator bool() const { return derivation.has_value(); }
};

/// x Prevents y in ctx: some Z that x achieves is incompatible with y.
DeriveResult derive_prevents(const Model& model, const Id& x, const Id& y, const Id& context,
                             const DerivationOptions& options = {});
/// x Allows y in ctx via a state Z: achieve a facilitative, prevent a
/// preventive, or maintain a facilitative precondition of y.
DeriveResult derive_allows(const Model& model, const Id& x, const Id& y, const Id& context,
                           const DerivationOptions& options = {});
/// x Disallows y in ctx via a state Z: achieve a preventive, prevent a
/// facilitative, or maintain a preventive precondition of y.
DeriveResult derive_disallows(const Model& model, const Id& x, const Id& y, const Id& context,
                              const DerivationOptions& options = {});

/// Builds a maintain occurrent keeping `state` unchanged over `interval`.
/// Throws Error("StateNotHolding") unless the state holds at interval start.
Maintain maintain(const Model& model, const Id& state, const Interval& interval,
                  const Id& context = {}, const Id& id = {});

/// Every subfunction derivable from source to target in the context, one
/// derivation each, in square order (Achieves, Prevents, Allows, Disallows,
/// then Maintain). Empty means no causal link is derivable.
std::vector<Derivation> classify_link(const Model& model, const Id& source, const Id& target,
                                      const Id& context, const DerivationOptions& options = {});

/// Contexts an analysis should range over: every declared context, or the
/// single implicit empty context when none is declared.
std::vector<Id> analysis_contexts(const Model& model);

/// Re-checks a derivation's rule body against its witnesses.
bool recheck(const Model& model, const Derivation& derivation);

// ---------------------------------------------------------------------------
// Interaction placement.

enum class PlacementCase { a, b, c, d };
std::string to_string(PlacementCase p);

struct PlacementVerdict {
  PlacementCase placement = PlacementCase::a;
  bool valid = false;
  std::optional<Directness> directness;
  Id mediating_state;
  std::string diagnostic;
};

/// Where the interaction between cause c and effect e can sit on the time line.
PlacementVerdict interaction_placement(const Model& model, const Id& c, const Id& e);

// ---------------------------------------------------------------------------
// Chains.

struct ChainIssue {
  std::size_t link = 0;
  std::string rule;
  std::string message;
};

struct ChainReport {
  bool valid = true;
  bool necessary = true;  // no Allows/Disallows anywhere in the chain
  std::vector<ChainIssue> issues;
  std::vector<std::optional<Derivation>> derivations;
};

/// True when `next` continues the chain after `previous`: it starts at the
/// previous target, or it is a maintain standing for the omission of it.
bool chain_continues(const Model& model, const CausalLink& previous, const CausalLink& next);

/// Validates a chain link by link. Throws Error("BrokenChain") when two
/// consecutive links share no occurrent.
ChainReport validate_chain(const Model& model, std::span<const CausalLink> chain,
                           const DerivationOptions& options = {});

// ---------------------------------------------------------------------------
// State-state reduction.

struct StateReduction {
  CausalLink process_link;                     // P1 -> P2
  std::optional<CausalLink> completion_link;   // E1 -> S2, when P1 completes
  Id completion_event;
};

/// Explains an S1 -> S2 link through the processes that drive the two states.
/// Throws Error("NoUnderlyingProcess") when the model has no finer content.
StateReduction reduce_state_state(const CausalLink& link, const Model& model);

// ---------------------------------------------------------------------------

/// Link-level checks on asserted links: illegal direct relata fail fast,
/// indirect assertions that cannot be derived are warnings.
std::vector<Issue> check_links(const Model& model);

/// validate_structure + check_links.
std::vector<Issue> check_model(const Model& model);

} // namespace causa
