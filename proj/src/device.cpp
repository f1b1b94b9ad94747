#include "causa/device.hpp"

#include <algorithm>
#include <deque>

namespace causa {

std::string to_string(LeafKind k) {
  switch (k) {
    case LeafKind::primitive_proactive: return "primitive-proactive";
    case LeafKind::event_state: return "E->S-leaf";
    case LeafKind::process_process: return "P->P-leaf";
  }
  return "?";
}

int DeviceTree::depth() const {
  int out = 1;
  for (const auto& leaf : leaves) out = std::max(out, leaf.depth);
  return out;
}

bool AdjacencyReport::all_adjacent() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.adjacent; });
}

namespace {

std::set<Id> output_states_of(const Model& model, const Id& effect) {
  switch (*model.kind_of(effect)) {
    case OccurrentKind::state: return {effect};
    case OccurrentKind::process: return model.processes.at(effect).driven_states;
    case OccurrentKind::event: return model.events.at(effect).resultant_states;
    case OccurrentKind::maintain: return {model.maintains.at(effect).state};
  }
  return {};
}

class Decomposer {
 public:
  Decomposer(const Model& model, int max_depth) : model_(model), max_depth_(max_depth) {}

  DeviceTree run(const Device& device) {
    DeviceTree tree;
    tree.root = device;
    expand(tree.root, 1, tree.leaves);
    if (!exceeded_.empty())
      throw DepthExceeded("refinement of '" + exceeded_ + "' goes deeper than max-depth " +
                              std::to_string(max_depth_),
                          std::move(tree));
    return tree;
  }

 private:
  void expand(Device& device, int depth, std::vector<Leaf>& leaves) {
    const Hints* hints = model_.hints_of(device.behavior);
    if (hints && hints->primitive) {
      leaves.push_back({device.id, LeafKind::primitive_proactive, depth, device.behavior});
      return;
    }
    if (hints && !hints->refines_into.empty()) {
      if (depth + 1 > max_depth_) {
        if (exceeded_.empty()) exceeded_ = device.behavior;
        return;
      }
      const auto& parts = hints->refines_into;
      bool refined = false;
      for (const auto& part : parts) {
        auto it = model_.events.find(part);
        if (it == model_.events.end() || it->second.resultant_states.empty()) continue;
        CausalLink link{part, *it->second.resultant_states.begin(), Subfunction::achieves,
                        Directness::direct, {}, PatternKind::event_state};
        device.sub_devices.push_back(identify_device(link, model_));
        expand(device.sub_devices.back(), depth + 1, leaves);
        refined = true;
      }
      for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        const Id& a = parts[i];
        const Id& b = parts[i + 1];
        if (!model_.processes.count(a) || !model_.processes.count(b)) continue;
        if (!achieves(model_, a, b)) continue;
        leaves.push_back({device.id, LeafKind::process_process, depth + 1, a + " => " + b});
        refined = true;
      }
      if (refined) return;
    }
    leaves.push_back({device.id, leaf_kind(device), depth, device.behavior});
  }

  LeafKind leaf_kind(const Device& device) const {
    switch (*model_.kind_of(device.behavior)) {
      case OccurrentKind::event: return LeafKind::event_state;
      case OccurrentKind::process: return LeafKind::process_process;
      case OccurrentKind::maintain: return LeafKind::primitive_proactive;
      case OccurrentKind::state: break;
    }
    for (const auto& out : device.output_states) {
      if (out == device.behavior) continue;
      try {
        reduce_state_state({device.behavior, out, Subfunction::achieves, Directness::direct, {},
                            PatternKind::state_state},
                           model_);
        return LeafKind::process_process;
      } catch (const Error&) {
      }
    }
    return LeafKind::primitive_proactive;
  }

  const Model& model_;
  int max_depth_;
  Id exceeded_;
};

void refinement_closure(const Model& model, const Id& id, std::set<Id>& out) {
  if (!out.insert(id).second) return;
  if (const Hints* h = model.hints_of(id))
    for (const auto& r : h->refines_into) refinement_closure(model, r, out);
}

} // namespace

Device identify_device(const CausalLink& link, const Model& model) {
  const Id& cause = link.source;
  const Id& effect = link.target;
  if (!model.is_occurrent(cause)) throw Error("UnknownId", "no occurrent '" + cause + "'");
  if (!model.is_occurrent(effect)) throw Error("UnknownId", "no occurrent '" + effect + "'");

  Device device;
  device.behavior = cause;
  device.participants = model.participants_of(cause);
  if (device.participants.empty())
    throw Error("MissingParticipants", "'" + cause + "' has no participants to make up a device");
  std::vector<Id> missing;
  for (const auto& p : device.participants)
    if (!model.entities.count(p)) missing.push_back(p);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error("MissingParticipants", "participants of '" + cause + "' not in the model: " + list);
  }

  static const Hints kNoHints;
  const Hints* found = model.hints_of(cause);
  const Hints& hints = found ? *found : kNoHints;
  device.id = hints.device_name.empty() ? "device:" + cause : hints.device_name;

  std::set<Id> bound;
  auto bind = [&](const std::string& role, const Id& entity) {
    if (entity.empty() || bound.count(entity)) return;
    device.roles[role].push_back(entity);
    bound.insert(entity);
  };
  // Operand first: an entity that is both carried and acted upon is the operand.
  bind("operand", hints.operand);
  bind("medium", hints.medium);
  bind("conduit", hints.conduit_region);
  for (const auto& p : device.participants) {
    auto e = model.entities.find(p);
    if (e->second.kind == EntityKind::region) bind("conduit", p);
  }
  for (const auto& p : device.participants) bind("device", p);

  device.output_states = output_states_of(model, effect);
  if (device.output_states.empty())
    throw Error("NoOutput", "'" + effect + "' yields no state for the device to achieve");
  for (const Precondition* pre : model.preconditions_of(cause))
    if (pre->polarity == Polarity::facilitative) device.input_states.insert(pre->state);
  if (auto it = model.events.find(cause); it != model.events.end())
    device.input_states.insert(it->second.terminated_states.begin(), it->second.terminated_states.end());
  return device;
}

DeviceTree decompose(const Device& device, const Model& model, int max_depth) {
  if (max_depth < 1) throw Error("InvalidArgument", "max-depth must be at least 1");
  return Decomposer(model, max_depth).run(device);
}

std::vector<CausalLink> device_roots(const Model& model) {
  std::set<Id> refined;
  for (const auto& id : model.occurrents()) {
    if (const Hints* h = model.hints_of(id)) refined.insert(h->refines_into.begin(), h->refines_into.end());
  }
  std::vector<CausalLink> out;
  for (const auto& link : model.links) {
    if (link.directness != Directness::direct) continue;
    if (link.subfunction && *link.subfunction != Subfunction::achieves) continue;
    if (refined.count(link.source)) continue;
    auto verdict = achieves_pattern(model, link.source, link.target, link.context);
    auto* match = std::get_if<PatternMatch>(&verdict);
    if (!match) continue;
    out.push_back({link.source, link.target, Subfunction::achieves, Directness::direct, link.context,
                   match->kind});
  }
  return out;
}

AdjacencyReport check_adjacency(std::span<const CausalLink> chain, const Model& model) {
  AdjacencyReport report;
  for (const auto& link : chain) {
    std::map<Id, std::set<Id>> graph;
    for (const auto& a : model.links) {
      if (a.source == link.source && a.target == link.target) continue;
      graph[a.source].insert(a.target);
    }
    std::set<Id> inside;
    refinement_closure(model, link.source, inside);

    // Breadth-first search that only walks through occurrents outside the
    // cause's refinement; reaching the effect that way means something
    // sits in between.
    std::map<Id, Id> parent;
    std::deque<Id> queue;
    for (const auto& start : inside) {
      for (const auto& next : graph[start]) {
        if (inside.count(next) || parent.count(next)) continue;
        parent[next] = "";
        queue.push_back(next);
      }
    }
    AdjacencyEntry entry{link, true, {}};
    while (!queue.empty()) {
      Id node = queue.front();
      queue.pop_front();
      if (node == link.target) {
        std::vector<Id> path;
        for (Id at = parent[node]; !at.empty(); at = parent[at]) path.push_back(at);
        std::reverse(path.begin(), path.end());
        if (!path.empty()) {
          entry.adjacent = false;
          entry.intermediate = std::move(path);
        }
        break;
      }
      for (const auto& next : graph[node]) {
        if (inside.count(next) || parent.count(next)) continue;
        parent[next] = node;
        queue.push_back(next);
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

} // namespace causa
