#include "causa/export.hpp"

#include <boost/rational.hpp>

#include <cstdio>
#include <set>
#include <sstream>

namespace causa {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

const char* node_shape(OccurrentKind k) {
  switch (k) {
    case OccurrentKind::state: return "ellipse";
    case OccurrentKind::process: return "box, style=rounded";
    case OccurrentKind::event: return "box";
    case OccurrentKind::maintain: return "diamond";
  }
  return "plaintext";
}

Json id_list(const std::set<Id>& ids) { return Json(std::vector<Id>(ids.begin(), ids.end())); }

void device_dot(const Device& d, std::ostringstream& out, std::set<Id>& states) {
  out << "  " << quoted(d.id) << " [shape=box, label=" << quoted(d.id + "\n" + d.behavior) << "];\n";
  for (const auto& s : d.input_states) {
    states.insert(s);
    out << "  " << quoted(s) << " -> " << quoted(d.id) << " [label=\"input\"];\n";
  }
  for (const auto& s : d.output_states) {
    states.insert(s);
    out << "  " << quoted(d.id) << " -> " << quoted(s) << " [label=\"output\"];\n";
  }
  for (const auto& sub : d.sub_devices) {
    out << "  " << quoted(d.id) << " -> " << quoted(sub.id) << " [label=\"contains\", style=bold];\n";
    device_dot(sub, out, states);
  }
}

} // namespace

Json to_json(const CausalLink& link) {
  Json j{{"source", link.source},
         {"target", link.target},
         {"subfunction", to_string(link.subfunction)},
         {"directness", to_string(link.directness)},
         {"context", link.context}};
  if (link.pattern) j["pattern"] = to_string(*link.pattern);
  return j;
}

Json to_json(const Derivation& d) {
  Json children = Json::array();
  for (const auto& c : d.children) children.push_back(to_json(c));
  Json j{{"conclusion", to_json(d.conclusion)},
         {"rule", d.rule},
         {"witnesses", d.witnesses},
         {"children", children}};
  if (!d.evidence.empty()) j["evidence"] = d.evidence;
  return j;
}

Json to_json(const Device& d) {
  Json subs = Json::array();
  for (const auto& s : d.sub_devices) subs.push_back(to_json(s));
  return Json{{"id", d.id},
              {"behavior", d.behavior},
              {"roles", d.roles},
              {"participants", id_list(d.participants)},
              {"input_states", id_list(d.input_states)},
              {"output_states", id_list(d.output_states)},
              {"sub_devices", subs}};
}

Json to_json(const DeviceTree& tree) {
  Json leaves = Json::array();
  for (const auto& l : tree.leaves)
    leaves.push_back({{"device", l.device}, {"kind", to_string(l.kind)}, {"depth", l.depth}, {"detail", l.detail}});
  return Json{{"root", to_json(tree.root)}, {"leaves", leaves}, {"depth", tree.depth()}};
}

Json links_json(const Model& model) {
  Json nodes = Json::array();
  for (const auto& id : model.occurrents()) nodes.push_back({{"id", id}, {"kind", to_string(*model.kind_of(id))}});
  Json edges = Json::array();
  for (const auto& link : model.links) {
    Json e{{"source", link.source}, {"target", link.target}, {"directness", to_string(link.directness)}};
    if (link.subfunction) e["subfunction"] = to_string(*link.subfunction);
    if (!link.context.empty()) e["context"] = link.context;
    edges.push_back(e);
  }
  return Json{{"nodes", nodes}, {"edges", edges}};
}

std::string links_dot(const Model& model) {
  std::ostringstream out;
  out << "digraph links {\n";
  for (const auto& id : model.occurrents()) {
    auto kind = *model.kind_of(id);
    out << "  " << quoted(id) << " [shape=" << node_shape(kind) << ", label=" << quoted(id + "\n(" + to_string(kind) + ")")
        << "];\n";
  }
  for (const auto& link : model.links) {
    std::string label = link.subfunction ? to_string(*link.subfunction) : std::string("link");
    if (!link.context.empty()) label += " [" + link.context + "]";
    out << "  " << quoted(link.source) << " -> " << quoted(link.target) << " [label=" << quoted(label);
    if (link.directness == Directness::indirect) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::vector<DeviceTree> model_devices(const Model& model, int max_depth) {
  std::vector<DeviceTree> out;
  for (const auto& root : device_roots(model)) out.push_back(decompose(identify_device(root, model), model, max_depth));
  return out;
}

Json devices_json(const std::vector<DeviceTree>& trees) {
  Json list = Json::array();
  for (const auto& t : trees) list.push_back(to_json(t));
  return Json{{"devices", list}};
}

std::string devices_dot(const std::vector<DeviceTree>& trees) {
  std::ostringstream body;
  std::set<Id> states;
  for (const auto& t : trees) {
    device_dot(t.root, body, states);
    for (const auto& l : t.leaves)
      body << "  // leaf " << l.device << " " << to_string(l.kind) << " depth " << l.depth << ": " << l.detail << "\n";
  }
  std::ostringstream out;
  out << "digraph devices {\n";
  for (const auto& s : states) out << "  " << quoted(s) << " [shape=ellipse];\n";
  out << body.str() << "}\n";
  return out.str();
}

std::string trace_ldjson(const Trace& trace) {
  std::string out;
  for (const auto& snap : trace.snapshots) {
    Json values = Json::object();
    for (const auto& [p, v] : snap.values) values[p] = to_string(v);
    Json updates = Json::array();
    for (const auto& u : trace.updates) {
      if (u.tick != snap.tick) continue;
      updates.push_back({{"parameter", u.parameter},
                         {"from", to_string(u.from)},
                         {"to", to_string(u.to)},
                         {"causal", u.causal},
                         {"source", u.source}});
    }
    Json completions = Json::array();
    for (const auto& c : trace.completions) {
      if (c.tick != snap.tick) continue;
      completions.push_back({{"event", c.event},
                             {"resultant_states", id_list(c.resultant_states)},
                             {"terminated_states", id_list(c.terminated_states)}});
    }
    Json activations = Json::array();
    for (const auto& a : trace.activations) {
      if (a.tick != snap.tick) continue;
      activations.push_back({{"occurrent", a.occurrent}, {"last_flipped", a.last_flipped}, {"flipped_by", a.flipped_by}});
    }
    Json record{{"tick", snap.tick},
                {"values", values},
                {"states", snap.states},
                {"active", id_list(snap.active)},
                {"updates", updates},
                {"completions", completions},
                {"activations", activations}};
    out += record.dump() + "\n";
  }
  return out;
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream out;
  out << "tick";
  std::vector<Id> params;
  if (!trace.snapshots.empty())
    for (const auto& [p, _] : trace.snapshots.front().values) params.push_back(p);
  for (const auto& p : params) out << "," << p;
  out << "\n";
  char buffer[64];
  for (const auto& snap : trace.snapshots) {
    out << snap.tick;
    for (const auto& p : params) {
      std::snprintf(buffer, sizeof buffer, "%.10g", boost::rational_cast<double>(snap.values.at(p)));
      out << "," << buffer;
    }
    out << "\n";
  }
  return out.str();
}

} // namespace causa
