#pragma once

#include "causa/calculus.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace causa {

/// A system identified from a causal pair C -> E: the effect gives the
/// outputs, the cause is the internal behavior.
struct Device {
  Id id;
  std::map<std::string, std::vector<Id>> roles;  // device, operand, conduit, medium
  std::set<Id> participants;
  std::set<Id> input_states;
  std::set<Id> output_states;
  Id behavior;
  std::vector<Device> sub_devices;

  bool operator==(const Device&) const = default;
};

enum class LeafKind { primitive_proactive, event_state, process_process };
std::string to_string(LeafKind k);

struct Leaf {
  Id device;
  LeafKind kind = LeafKind::primitive_proactive;
  int depth = 1;
  std::string detail;

  bool operator==(const Leaf&) const = default;
};

struct DeviceTree {
  Device root;
  std::vector<Leaf> leaves;

  [[nodiscard]] int depth() const;
};

/// Thrown by decompose when refinement goes deeper than max-depth. Carries
/// the tree built so far.
class DepthExceeded : public Error {
 public:
  DepthExceeded(const std::string& message, DeviceTree partial)
      : Error("DepthExceeded", message), partial_(std::move(partial)) {}
  [[nodiscard]] const DeviceTree& partial() const { return partial_; }

 private:
  DeviceTree partial_;
};

/// Binds the participants of the cause into a device whose outputs come from
/// the effect. Throws Error("MissingParticipants") when the cause has no
/// participants or names entities the model lacks.
Device identify_device(const CausalLink& link, const Model& model);

/// Re-applies identify_device down the declared refinement of the behavior.
DeviceTree decompose(const Device& device, const Model& model, int max_depth = 8);

/// Asserted direct Achieves links whose cause is not part of some other
/// occurrent's refinement: the starting points for device analysis.
std::vector<CausalLink> device_roots(const Model& model);

struct AdjacencyEntry {
  CausalLink link;
  bool adjacent = true;
  std::vector<Id> intermediate;  // occurrents found between cause and effect
};

struct AdjacencyReport {
  std::vector<AdjacencyEntry> entries;
  [[nodiscard]] bool all_adjacent() const;
};

/// A link is adjacent when nothing outside the cause's own refinement sits
/// between the cause and the effect in the asserted link graph.
AdjacencyReport check_adjacency(std::span<const CausalLink> chain, const Model& model);

} // namespace causa
