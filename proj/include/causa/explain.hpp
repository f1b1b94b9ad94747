#pragma once

#include "causa/calculus.hpp"
#include "causa/export.hpp"

#include <optional>
#include <string>
#include <vector>

namespace causa {

/// One node of a backward explanation. `relation` names how this node bears
/// on its parent: a subfunction, or "omits" when the parent is a maintain
/// standing for this occurrent not happening.
struct ExplanationNode {
  Id occurrent;
  std::string relation;
  std::optional<Derivation> derivation;
  bool primitive = false;
  bool repeated = false;  // already explained higher up; not expanded again
  std::vector<ExplanationNode> causes;
};

struct ExplanationTree {
  Id question;
  ExplanationNode root;
};

/// Why did `occurrent` happen (or not)? Walks incoming derivable links over
/// every analysis context, effect to cause.
/// Throws Error("UnknownId") for an unknown occurrent.
ExplanationTree explain(const Model& model, const Id& occurrent, const DerivationOptions& options = {});

std::string render_text(const ExplanationTree& tree);
Json to_json(const ExplanationTree& tree);

/// Relation sequences (omissions skipped) along every root-to-leaf path.
std::vector<std::vector<std::string>> explanation_paths(const ExplanationTree& tree);

} // namespace causa
