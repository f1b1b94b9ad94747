#include "causa/cli.hpp"

#include "causa/calculus.hpp"
#include "causa/corpus.hpp"
#include "causa/device.hpp"
#include "causa/dsl.hpp"
#include "causa/explain.hpp"
#include "causa/export.hpp"
#include "causa/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>

namespace causa {

namespace {

struct Options {
  std::string path;
  std::string source;
  std::string target;
  std::string occurrent;
  std::string context;
  std::string format = "text";
  std::string what;
  std::string out_dir;
  Tick horizon = 10;
  int max_depth = 8;
};

// Parses the model, reporting diagnostics. Returns nullopt with `code` set
// when the command cannot go on.
std::optional<Model> load(const std::string& path, std::ostream& err, int& code) {
  ParseResult parsed;
  try {
    parsed = parse_file(path);
  } catch (const Error& e) {
    err << "causa: " << e.what() << "\n";
    code = kExitUsage;
    return std::nullopt;
  }
  for (const auto& d : parsed.diagnostics) err << format(d) << "\n";
  if (!parsed.ok()) {
    code = kExitAnalysis;
    return std::nullopt;
  }
  return std::move(parsed.model);
}

void require_occurrent(const Model& model, const Id& id) {
  if (!model.is_occurrent(id)) throw Error("UnknownId", "no occurrent '" + id + "'");
}

std::string witness_text(const Derivation& d) {
  std::string out;
  for (const auto& [k, v] : d.witnesses) out += (out.empty() ? "" : " ") + k + "=" + v;
  return out;
}

void print_derivation(const Derivation& d, int indent, std::ostream& out) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << d.conclusion.source << " "
      << to_string(d.conclusion.subfunction) << " " << d.conclusion.target << "  [" << d.rule << "] "
      << witness_text(d);
  if (!d.evidence.empty()) out << "  (" << d.evidence << ")";
  out << "\n";
  for (const auto& c : d.children) print_derivation(c, indent + 1, out);
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto model = load(o.path, err, code);
  if (!model) return code;
  out << o.path << ": ok\n";
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto model = load(o.path, err, code);
  if (!model) return code;
  require_occurrent(*model, o.source);
  require_occurrent(*model, o.target);
  if (!o.context.empty() && !model->context(o.context)) throw Error("UnknownId", "no context '" + o.context + "'");
  auto contexts = o.context.empty() ? analysis_contexts(*model) : std::vector<Id>{o.context};
  Json results = Json::array();
  for (const auto& ctx : contexts) {
    for (const auto& d : classify_link(*model, o.source, o.target, ctx)) {
      if (o.format == "json") {
        results.push_back({{"context", ctx}, {"subfunction", to_string(d.conclusion.subfunction)}, {"derivation", to_json(d)}});
      } else {
        out << (ctx.empty() ? std::string("(no context)") : ctx) << ": " << to_string(d.conclusion.subfunction) << "\n";
        print_derivation(d, 1, out);
      }
    }
  }
  if (o.format == "json")
    out << Json{{"source", o.source}, {"target", o.target}, {"results", results}}.dump(2) << "\n";
  return kExitOk;
}

int cmd_explain(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto model = load(o.path, err, code);
  if (!model) return code;
  require_occurrent(*model, o.occurrent);
  auto tree = explain(*model, o.occurrent, DerivationOptions{o.max_depth});
  if (o.format == "json") out << to_json(tree).dump(2) << "\n";
  else out << render_text(tree);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto model = load(o.path, err, code);
  if (!model) return code;
  if (o.horizon < 0) {
    err << "causa: --horizon must be non-negative\n";
    return kExitUsage;
  }
  Trace trace = run(*model, o.horizon);
  std::string ldjson = trace_ldjson(trace);
  if (o.out_dir.empty()) {
    out << ldjson;
  } else {
    std::filesystem::path dir(o.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::string stem = std::filesystem::path(o.path).stem().string();
    std::ofstream json_file(dir / (stem + ".trace.ldjson"), std::ios::binary);
    std::ofstream csv_file(dir / (stem + ".trace.csv"), std::ios::binary);
    if (ec || !json_file || !csv_file) {
      err << "causa: cannot write traces to '" << o.out_dir << "'\n";
      return kExitUsage;
    }
    json_file << ldjson;
    csv_file << trace_csv(trace);
    out << "wrote " << (dir / (stem + ".trace.ldjson")).string() << " and " << (dir / (stem + ".trace.csv")).string()
        << "\n";
  }
  auto report = verify_trace(trace, *model);
  for (const auto& v : report.violations)
    err << "violation at tick " << v.tick << " [" << v.check << "]: " << v.message << "\n";
  return report.ok() ? kExitOk : kExitAnalysis;
}

int cmd_export(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto model = load(o.path, err, code);
  if (!model) return code;
  if (o.what == "links") {
    out << (o.format == "dot" ? links_dot(*model) : links_json(*model).dump(2) + "\n");
  } else {
    auto trees = model_devices(*model, o.max_depth);
    out << (o.format == "dot" ? devices_dot(trees) : devices_json(trees).dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_corpus(const Options& o, std::ostream& out, std::ostream& err) {
  auto report = run_corpus(o.path);
  if (report.entries.empty()) err << "causa: warning: no .cm models in '" << o.path << "'\n";
  out << render_table(report);
  return report.ok() ? kExitOk : kExitAnalysis;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal model analyzer", "causa"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Parse and validate a model");
  check->add_option("path", o.path, "Model file")->required();

  auto* classify = app.add_subcommand("classify", "Derive every subfunction from source to target");
  classify->add_option("path", o.path, "Model file")->required();
  classify->add_option("source", o.source, "Cause occurrent")->required();
  classify->add_option("target", o.target, "Effect occurrent")->required();
  classify->add_option("--context", o.context, "Analyze in this context only");
  classify->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* explain_cmd = app.add_subcommand("explain", "Backward explanation tree for an occurrent");
  explain_cmd->add_option("path", o.path, "Model file")->required();
  explain_cmd->add_option("occurrent", o.occurrent, "Occurrent to explain")->required();
  explain_cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  explain_cmd->add_option("--max-depth", o.max_depth, "Derivation depth bound")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Run the tick simulator and verify the trace");
  simulate->add_option("path", o.path, "Model file")->required();
  simulate->add_option("--horizon", o.horizon, "Last tick to simulate");
  simulate->add_option("--out", o.out_dir, "Directory for .trace.ldjson and .trace.csv");

  auto* export_cmd = app.add_subcommand("export", "Export the link graph or device trees");
  export_cmd->add_option("path", o.path, "Model file")->required();
  export_cmd->add_option("what", o.what, "links or devices")->required()->check(CLI::IsMember({"links", "devices"}));
  export_cmd->add_option("--format", o.format, "dot or json")->required()->check(CLI::IsMember({"dot", "json"}));
  export_cmd->add_option("--max-depth", o.max_depth, "Decomposition depth bound")->check(CLI::PositiveNumber);

  auto* corpus = app.add_subcommand("corpus", "Check every model in a directory against its .expect file");
  corpus->add_option("dir", o.path, "Corpus directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, out, err);
    if (classify->parsed()) return cmd_classify(o, out, err);
    if (explain_cmd->parsed()) return cmd_explain(o, out, err);
    if (simulate->parsed()) return cmd_simulate(o, out, err);
    if (export_cmd->parsed()) return cmd_export(o, out, err);
    if (corpus->parsed()) return cmd_corpus(o, out, err);
  } catch (const Error& e) {
    err << "causa: " << e.code() << ": " << e.what() << "\n";
    return e.code() == "UnknownId" || e.code() == "IO" ? kExitUsage : kExitAnalysis;
  }
  return kExitUsage;
}

} // namespace causa
