#include "causa/corpus.hpp"

#include "causa/calculus.hpp"
#include "causa/device.hpp"
#include "causa/dsl.hpp"
#include "causa/explain.hpp"
#include "causa/export.hpp"
#include "causa/simulation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace causa {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (const auto& i : items) out += (out.empty() ? "" : sep) + i;
  return out;
}

const std::string* lookup(const Sidecar& sidecar, const std::string& key) {
  for (const auto& [k, v] : sidecar)
    if (k == key) return &v;
  return nullptr;
}

Tick sidecar_horizon(const Sidecar& sidecar) {
  for (const auto& [k, v] : sidecar) {
    auto w = words(k);
    if (w.size() == 2 && w[0] == "simulate") return std::stoll(w[1]);
  }
  return 10;
}

std::string count(const Model& model, const std::string& kind) {
  std::size_t n = 0;
  if (kind == "entities") n = model.entities.size();
  else if (kind == "params") n = model.parameters.size();
  else if (kind == "states") n = model.states.size();
  else if (kind == "processes") n = model.processes.size();
  else if (kind == "events") n = model.events.size();
  else if (kind == "maintains") n = model.maintains.size();
  else if (kind == "preconditions") n = model.preconditions.size();
  else if (kind == "equations") n = model.equations.size();
  else if (kind == "contexts") n = model.contexts.size();
  else if (kind == "links") n = model.links.size();
  else if (kind == "exclusions") {
    for (const auto& [id, c] : model.contexts) n += c.exclusions.size();
  } else {
    return "unknown kind '" + kind + "'";
  }
  return std::to_string(n);
}

std::string classify(const Model& model, const Id& source, const Id& target, const std::vector<Id>& contexts) {
  std::set<Subfunction> found;
  for (const auto& ctx : contexts)
    for (const auto& d : classify_link(model, source, target, ctx)) found.insert(d.conclusion.subfunction);
  std::vector<std::string> names;
  for (auto s : found) names.push_back(to_string(s));
  return names.empty() ? "none" : join(names, ",");
}

// "a Sub b [ctx]; c Sub d" -> links. Without an explicit context, the first
// analysis context in which the link derives is used.
std::vector<CausalLink> parse_chain(const Model& model, const std::string& text) {
  std::vector<CausalLink> chain;
  for (const auto& item : split(text, ';')) {
    auto w = words(item);
    if (w.size() < 3 || w.size() > 4) throw Error("Sidecar", "chain link '" + item + "' is not 'source Sub target'");
    auto sub = parse_subfunction(w[1]);
    if (!sub) throw Error("Sidecar", "unknown subfunction '" + w[1] + "'");
    CausalLink link{w[0], w[2], *sub, is_direct(*sub) ? Directness::direct : Directness::indirect, {}, std::nullopt};
    std::vector<Id> contexts = w.size() == 4 ? std::vector<Id>{w[3]} : analysis_contexts(model);
    link.context = contexts.front();
    bool derived = false;
    for (const auto& ctx : contexts) {
      for (const auto& d : classify_link(model, link.source, link.target, ctx)) {
        if (derived || d.conclusion.subfunction != *sub) continue;
        link.context = ctx;
        link.pattern = d.conclusion.pattern;
        derived = true;
      }
    }
    chain.push_back(link);
  }
  return chain;
}

std::string check_chain(const Model& model, const std::string& text, std::string* published) {
  auto chain = parse_chain(model, text);
  try {
    auto report = validate_chain(model, chain);
    if (!report.valid) {
      std::vector<std::string> issues;
      for (const auto& i : report.issues)
        issues.push_back("link " + std::to_string(i.link + 1) + " " + i.rule + ": " + i.message);
      return "invalid: " + join(issues, "; ");
    }
  } catch (const Error& e) {
    return std::string("broken: ") + e.what();
  }
  if (published) *published = chain.empty() ? "none" : to_string(chain.back().subfunction);
  return text;
}

std::string devices(const Model& model, const std::string& what) {
  auto trees = model_devices(model);
  if (what == "roots") return std::to_string(trees.size());
  if (trees.empty()) return "no devices";
  std::vector<std::string> out;
  if (what == "top") {
    for (const auto& t : trees) out.push_back(t.root.id);
  } else if (what == "subsystems") {
    for (const auto& s : trees.front().root.sub_devices) out.push_back(s.id);
    std::sort(out.begin(), out.end());
  } else if (what == "inputs") {
    out.assign(trees.front().root.input_states.begin(), trees.front().root.input_states.end());
  } else if (what == "outputs") {
    out.assign(trees.front().root.output_states.begin(), trees.front().root.output_states.end());
  } else if (what == "depth") {
    return std::to_string(trees.front().depth());
  } else if (what == "finest") {
    std::set<std::string> kinds;
    int depth = trees.front().depth();
    for (const auto& l : trees.front().leaves)
      if (l.depth == depth) kinds.insert(to_string(l.kind));
    out.assign(kinds.begin(), kinds.end());
  } else if (what == "leaves") {
    for (const auto& l : trees.front().leaves)
      out.push_back(l.device + " " + to_string(l.kind) + " " + std::to_string(l.depth) + " " + l.detail);
    return join(out, "; ");
  } else {
    return "unknown device query '" + what + "'";
  }
  return join(out, ",");
}

std::string simulation_check(const Model& model, Tick horizon) {
  auto report = verify_trace(run(model, horizon), model);
  if (report.ok()) return "clean";
  std::vector<std::string> out;
  for (const auto& v : report.violations) out.push_back(std::to_string(v.tick) + " " + v.check + ": " + v.message);
  return join(out, "; ");
}

const Activation* find_activation(const Trace& trace, const Id& occurrent) {
  for (const auto& a : trace.activations)
    if (a.occurrent == occurrent) return &a;
  return nullptr;
}

std::string reduce(const Model& model, const Id& s1, const Id& s2) {
  try {
    auto r = reduce_state_state({s1, s2, Subfunction::achieves, Directness::direct, {}, PatternKind::state_state}, model);
    std::string out = r.process_link.source + " -> " + r.process_link.target;
    if (r.completion_link) out += "; " + r.completion_link->source + " -> " + r.completion_link->target;
    return out;
  } catch (const Error& e) {
    return e.code();
  }
}

std::string pattern(const Model& model, const Id& source, const Id& target) {
  auto verdict = achieves_pattern(model, source, target);
  if (auto* m = std::get_if<PatternMatch>(&verdict)) return to_string(m->kind);
  return std::get<PatternRejection>(verdict).rule_id;
}

std::string placement(const Model& model, const Id& c, const Id& e) {
  auto v = interaction_placement(model, c, e);
  std::string out = to_string(v.placement) + (v.valid ? " valid" : " invalid");
  if (v.directness) out += " " + to_string(*v.directness);
  if (!v.mediating_state.empty()) out += " via " + v.mediating_state;
  return out;
}

std::string adjacency(const Model& model, const Id& c, const Id& e) {
  std::vector<CausalLink> chain{{c, e, Subfunction::achieves, Directness::direct, {}, std::nullopt}};
  auto report = check_adjacency(chain, model);
  const auto& entry = report.entries.front();
  if (entry.adjacent) return "yes";
  return "no: " + join(entry.intermediate, ",");
}

} // namespace

Sidecar parse_sidecar(std::string_view text) {
  Sidecar out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find(" = ");
    std::size_t width = 3;
    if (eq == std::string::npos) {
      eq = line.find('=');
      width = 1;
    }
    if (eq == std::string::npos) continue;
    auto key = trim(line.substr(0, eq));
    if (key.empty()) continue;
    out.emplace_back(key, trim(line.substr(eq + width)));
  }
  return out;
}

std::string evaluate_expectation(const Model& model, const std::string& key, const std::string& expected,
                                 const Sidecar& sidecar) {
  auto w = words(key);
  if (w.empty()) return "empty key";
  const std::string& kind = w[0];
  try {
    if (kind == "check" && w.size() == 1) {
      return has_errors(check_model(model)) ? "errors" : "ok";
    }
    if (kind == "count" && w.size() == 2) return count(model, w[1]);
    if (kind == "classify" && (w.size() == 3 || w.size() == 4)) {
      for (std::size_t i = 1; i < 3; ++i)
        if (!model.is_occurrent(w[i])) return "unknown id '" + w[i] + "'";
      return classify(model, w[1], w[2], w.size() == 4 ? std::vector<Id>{w[3]} : analysis_contexts(model));
    }
    if (kind == "derivation" && w.size() == 4) {
      auto sub = parse_subfunction(w[3]);
      if (!sub) return "unknown subfunction '" + w[3] + "'";
      for (const auto& ctx : analysis_contexts(model)) {
        for (const auto& d : classify_link(model, w[1], w[2], ctx)) {
          if (d.conclusion.subfunction != *sub) continue;
          auto z = d.witnesses.find("Z");
          return d.rule + (z == d.witnesses.end() ? "" : " via " + z->second);
        }
      }
      return "none";
    }
    if (kind == "chain" && w.size() == 2) return check_chain(model, expected, nullptr);
    if (kind == "published" && w.size() == 2) {
      const std::string* chain = lookup(sidecar, "chain " + w[1]);
      if (!chain) return "no chain '" + w[1] + "'";
      std::string published = "invalid chain";
      check_chain(model, *chain, &published);
      return published;
    }
    if (kind == "explain" && w.size() == 2) {
      auto paths = explanation_paths(explain(model, w[1]));
      auto want = split(expected, ',');
      std::vector<std::string> rendered;
      for (const auto& p : paths) {
        if (p == want) return expected;
        rendered.push_back(p.empty() ? "(none)" : join(p, ","));
      }
      return join(rendered, " | ");
    }
    if (kind == "devices" && w.size() == 2) return devices(model, w[1]);
    if (kind == "simulate" && w.size() == 2) return simulation_check(model, std::stoll(w[1]));
    if ((kind == "activation" || kind == "flipped-by" || kind == "last-flipped") && w.size() == 2) {
      auto trace = run(model, sidecar_horizon(sidecar));
      const Activation* a = find_activation(trace, w[1]);
      if (!a) return "never";
      if (kind == "activation") return std::to_string(a->tick);
      return join(kind == "flipped-by" ? a->flipped_by : a->last_flipped, ",");
    }
    if (kind == "value" && w.size() == 3) {
      Tick t = std::stoll(w[2]);
      auto trace = run(model, std::max(t, sidecar_horizon(sidecar)));
      const auto& values = trace.snapshots.at(static_cast<std::size_t>(t)).values;
      auto it = values.find(w[1]);
      return it == values.end() ? "unknown parameter '" + w[1] + "'" : to_string(it->second);
    }
    if (kind == "holds" && w.size() == 3) {
      Tick t = std::stoll(w[2]);
      auto trace = run(model, std::max(t, sidecar_horizon(sidecar)));
      const auto& states = trace.snapshots.at(static_cast<std::size_t>(t)).states;
      auto it = states.find(w[1]);
      return it == states.end() ? "unknown state '" + w[1] + "'" : (it->second ? "yes" : "no");
    }
    if (kind == "reduce" && w.size() == 3) return reduce(model, w[1], w[2]);
    if (kind == "pattern" && w.size() == 3) return pattern(model, w[1], w[2]);
    if (kind == "placement" && w.size() == 3) return placement(model, w[1], w[2]);
    if (kind == "adjacent" && w.size() == 3) return adjacency(model, w[1], w[2]);
  } catch (const Error& e) {
    return e.code() + ": " + e.what();
  } catch (const std::exception& e) {
    return std::string("error: ") + e.what();
  }
  return "unknown expectation '" + key + "'";
}

std::size_t CorpusReport::passed() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.pass; }));
}

CorpusEntry check_entry(const std::filesystem::path& model_path) {
  CorpusEntry entry;
  entry.name = model_path.stem().string();
  auto sidecar_path = model_path;
  sidecar_path.replace_extension(".expect");
  std::ifstream in(sidecar_path, std::ios::binary);
  if (!in) {
    entry.error = "missing " + sidecar_path.filename().string();
    return entry;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Sidecar sidecar = parse_sidecar(buffer.str());
  if (sidecar.empty()) {
    entry.error = "no expectations";
    return entry;
  }

  ParseResult parsed;
  try {
    parsed = parse_file(model_path);
  } catch (const Error& e) {
    entry.error = e.what();
    return entry;
  }
  if (!parsed.ok()) {
    std::vector<std::string> errors;
    for (const auto& d : parsed.diagnostics)
      if (d.severity == Severity::error) errors.push_back(format(d));
    entry.error = join(errors, "; ");
    return entry;
  }
  entry.pass = true;
  for (const auto& [key, expected] : sidecar) {
    ExpectationResult r{key, expected, evaluate_expectation(*parsed.model, key, expected, sidecar), false};
    r.pass = r.actual == r.expected;
    entry.pass = entry.pass && r.pass;
    entry.results.push_back(std::move(r));
  }
  return entry;
}

CorpusReport run_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error("IO", "not a directory: '" + dir.string() + "'");
  std::vector<std::filesystem::path> models;
  for (const auto& item : std::filesystem::directory_iterator(dir, ec))
    if (item.path().extension() == ".cm") models.push_back(item.path());
  if (ec) throw Error("IO", "cannot list '" + dir.string() + "': " + ec.message());
  std::sort(models.begin(), models.end());
  CorpusReport report;
  for (const auto& m : models) report.entries.push_back(check_entry(m));
  return report;
}

std::string render_table(const CorpusReport& report) {
  std::string out;
  for (const auto& e : report.entries) {
    std::size_t ok = std::count_if(e.results.begin(), e.results.end(), [](const auto& r) { return r.pass; });
    out += (e.pass ? "PASS " : "FAIL ") + e.name;
    if (!e.error.empty()) out += "  " + e.error;
    else out += "  " + std::to_string(ok) + "/" + std::to_string(e.results.size()) + " expectations";
    out += "\n";
    for (const auto& r : e.results) {
      if (r.pass) continue;
      out += "     " + r.key + ": expected '" + r.expected + "', got '" + r.actual + "'\n";
    }
  }
  out += std::to_string(report.passed()) + "/" + std::to_string(report.entries.size()) + " models pass\n";
  return out;
}

} // namespace causa
