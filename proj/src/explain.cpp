#include "causa/explain.hpp"

#include <set>

namespace causa {

namespace {

class Explainer {
 public:
  Explainer(const Model& model, const DerivationOptions& options)
      : model_(model), options_(options), contexts_(analysis_contexts(model)) {}

  ExplanationNode expand(const Id& occurrent, std::string relation, std::optional<Derivation> derivation) {
    ExplanationNode node;
    node.occurrent = occurrent;
    node.relation = std::move(relation);
    node.derivation = std::move(derivation);
    if (const Hints* h = model_.hints_of(occurrent)) node.primitive = h->primitive;
    if (!path_.insert(occurrent).second) {
      node.repeated = true;
      return node;
    }
    if (auto m = model_.maintains.find(occurrent); m != model_.maintains.end() && !m->second.omits.empty()) {
      if (model_.is_occurrent(m->second.omits))
        node.causes.push_back(expand(m->second.omits, "omits", std::nullopt));
    }
    for (const auto& source : model_.occurrents()) {
      if (source == occurrent) continue;
      std::set<Subfunction> seen;
      for (const auto& ctx : contexts_) {
        for (auto& d : classify_link(model_, source, occurrent, ctx, options_)) {
          if (!seen.insert(d.conclusion.subfunction).second) continue;
          std::string rel = to_string(d.conclusion.subfunction);
          node.causes.push_back(expand(source, rel, std::move(d)));
        }
      }
    }
    path_.erase(occurrent);
    return node;
  }

 private:
  const Model& model_;
  DerivationOptions options_;
  std::vector<Id> contexts_;
  std::set<Id> path_;
};

void render(const ExplanationNode& node, int indent, std::string& out) {
  out += std::string(static_cast<std::size_t>(indent) * 2, ' ');
  if (node.relation == "omits") {
    out += "omits " + node.occurrent;
  } else {
    out += node.relation + " <- " + node.occurrent;
    if (node.derivation) {
      out += " [" + node.derivation->rule;
      if (auto z = node.derivation->witnesses.find("Z"); z != node.derivation->witnesses.end())
        out += " via " + z->second;
      if (!node.derivation->conclusion.context.empty()) out += " in " + node.derivation->conclusion.context;
      out += "]";
    }
  }
  if (node.primitive) out += " (primitive)";
  if (node.repeated) out += " (see above)";
  out += "\n";
  for (const auto& c : node.causes) render(c, indent + 1, out);
}

Json node_json(const ExplanationNode& node) {
  Json causes = Json::array();
  for (const auto& c : node.causes) causes.push_back(node_json(c));
  Json j{{"occurrent", node.occurrent}, {"causes", causes}};
  if (!node.relation.empty()) j["relation"] = node.relation;
  if (node.derivation) j["derivation"] = to_json(*node.derivation);
  if (node.primitive) j["primitive"] = true;
  if (node.repeated) j["repeated"] = true;
  return j;
}

void paths(const ExplanationNode& node, std::vector<std::string>& prefix,
           std::vector<std::vector<std::string>>& out) {
  bool pushed = !node.relation.empty() && node.relation != "omits";
  if (pushed) prefix.push_back(node.relation);
  if (node.causes.empty()) out.push_back(prefix);
  for (const auto& c : node.causes) paths(c, prefix, out);
  if (pushed) prefix.pop_back();
}

} // namespace

ExplanationTree explain(const Model& model, const Id& occurrent, const DerivationOptions& options) {
  if (!model.is_occurrent(occurrent)) throw Error("UnknownId", "no occurrent '" + occurrent + "'");
  return {occurrent, Explainer(model, options).expand(occurrent, "", std::nullopt)};
}

std::string render_text(const ExplanationTree& tree) {
  std::string out = "why " + tree.question + "?\n";
  for (const auto& c : tree.root.causes) render(c, 1, out);
  return out;
}

Json to_json(const ExplanationTree& tree) {
  return Json{{"question", tree.question}, {"tree", node_json(tree.root)}};
}

std::vector<std::vector<std::string>> explanation_paths(const ExplanationTree& tree) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> prefix;
  paths(tree.root, prefix, out);
  return out;
}

} // namespace causa
