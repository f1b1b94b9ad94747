#include "causa/dsl.hpp"

#include "causa/calculus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace causa {

std::string format(const ParseDiagnostic& d) {
  std::string out = d.span.file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": ";
  out += d.severity == Severity::error ? "error" : "warning";
  if (!d.rule_id.empty()) out += "[" + d.rule_id + "]";
  return out + ": " + d.message;
}

namespace {

struct Token {
  std::string text;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::optional<Tick> parse_tick(std::string_view text) {
  Tick value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0) return std::nullopt;
  return value;
}

struct Declaration {
  int line = 0;
  std::string keyword;
  Token id;
  std::map<std::string, Token> attrs;
  std::vector<Token> flags;
};

class Parser {
 public:
  explicit Parser(std::string file) : file_(std::move(file)) {}

  ParseResult run(std::string_view text) {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++number;
      handle(number, tokenize(line));
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    for (auto& [decl, ctx] : pending_exclusions_) attach_exclusion(decl, ctx);

    if (!has_error()) {
      model_.normalize();
      for (const auto& issue : check_model(model_)) {
        auto it = spans_.find(issue.subject);
        SourceSpan span = it != spans_.end() ? it->second : SourceSpan{file_, 1, 1, 0};
        result_.diagnostics.push_back({issue.severity, span, issue.message, issue.rule});
      }
    }
    if (!has_error()) result_.model = std::move(model_);
    return std::move(result_);
  }

 private:
  bool has_error() const {
    for (const auto& d : result_.diagnostics)
      if (d.severity == Severity::error) return true;
    return false;
  }

  SourceSpan span(int line, const Token& t) const {
    return {file_, line, t.column, static_cast<int>(t.text.size())};
  }

  void error(int line, const Token& at, std::string message, std::string rule = "SYNTAX") {
    result_.diagnostics.push_back({Severity::error, span(line, at), std::move(message), std::move(rule)});
  }

  void handle(int line, std::vector<Token> tokens) {
    if (tokens.empty()) return;
    Declaration d;
    d.line = line;
    d.keyword = tokens.front().text;
    std::size_t rest = 1;
    if (d.keyword == "assert-link") {
      handle_link(line, tokens);
      return;
    }
    if (tokens.size() < 2 || tokens[1].text.find('=') != std::string::npos) {
      error(line, tokens.front(), "'" + d.keyword + "' needs an id");
      return;
    }
    d.id = tokens[1];
    rest = 2;
    for (std::size_t i = rest; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      auto eq = t.text.find('=');
      if (eq == std::string::npos) {
        d.flags.push_back(t);
        continue;
      }
      std::string key = t.text.substr(0, eq);
      Token value{t.text.substr(eq + 1), t.column + static_cast<int>(eq) + 1};
      if (value.text.empty()) {
        error(line, t, "empty value for '" + key + "'");
        continue;
      }
      if (!d.attrs.emplace(key, value).second) error(line, t, "attribute '" + key + "' given twice");
    }

    if (d.keyword == "entity") entity(d);
    else if (d.keyword == "param") param(d);
    else if (d.keyword == "state") state(d);
    else if (d.keyword == "process") process(d);
    else if (d.keyword == "event") event(d);
    else if (d.keyword == "maintain") maintain_decl(d);
    else if (d.keyword == "precondition") precondition(d);
    else if (d.keyword == "equation") equation(d);
    else if (d.keyword == "context") context(d);
    else if (d.keyword == "exclusion") exclusion(d);
    else error(line, tokens.front(), "unknown declaration '" + d.keyword + "'");
  }

  // --- attribute helpers -------------------------------------------------

  bool allow(const Declaration& d, std::initializer_list<const char*> keys,
             std::initializer_list<const char*> flags = {}) {
    bool ok = true;
    for (const auto& [key, value] : d.attrs) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) {
        error(d.line, {key, value.column - static_cast<int>(key.size()) - 1},
              "'" + d.keyword + "' has no attribute '" + key + "'");
        ok = false;
      }
    }
    for (const auto& f : d.flags) {
      bool known = false;
      for (const char* k : flags) known = known || f.text == k;
      if (!known) {
        error(d.line, f, "unexpected '" + f.text + "' in '" + d.keyword + "'");
        ok = false;
      }
    }
    return ok;
  }

  static bool has_flag(const Declaration& d, std::string_view flag) {
    for (const auto& f : d.flags)
      if (f.text == flag) return true;
    return false;
  }

  static std::string get(const Declaration& d, const char* key) {
    auto it = d.attrs.find(key);
    return it == d.attrs.end() ? std::string() : it->second.text;
  }

  std::optional<std::string> require(const Declaration& d, const char* key) {
    auto it = d.attrs.find(key);
    if (it == d.attrs.end()) {
      error(d.line, d.id, "'" + d.keyword + " " + d.id.text + "' needs " + key + "=");
      return std::nullopt;
    }
    return it->second.text;
  }

  std::optional<Rational> rational(const Declaration& d, const char* key) {
    auto it = d.attrs.find(key);
    if (it == d.attrs.end()) return std::nullopt;
    auto value = parse_rational(it->second.text);
    if (!value) error(d.line, it->second, "'" + it->second.text + "' is not a rational number");
    return value;
  }

  // Reads from=/to=; `to=open` leaves the end unset.
  std::optional<Interval> interval(const Declaration& d, bool required) {
    auto from = d.attrs.find("from");
    auto to = d.attrs.find("to");
    if (from == d.attrs.end() && to == d.attrs.end()) {
      if (required) error(d.line, d.id, "'" + d.id.text + "' needs from= and to=");
      return std::nullopt;
    }
    if (from == d.attrs.end() || to == d.attrs.end()) {
      error(d.line, d.id, "'" + d.id.text + "' needs both from= and to=");
      return std::nullopt;
    }
    auto start = parse_tick(from->second.text);
    if (!start) {
      error(d.line, from->second, "'" + from->second.text + "' is not a tick");
      return std::nullopt;
    }
    if (to->second.text == "open") return Interval::open_from(*start);
    auto end = parse_tick(to->second.text);
    if (!end) {
      error(d.line, to->second, "'" + to->second.text + "' is not a tick");
      return std::nullopt;
    }
    return Interval::closed(*start, *end);
  }

  Hints hints(const Declaration& d) {
    Hints h;
    h.refines_into = split_list(get(d, "refines-into"));
    h.operand = get(d, "operand");
    h.medium = get(d, "medium");
    h.conduit_region = get(d, "conduit-region");
    h.device_name = get(d, "device");
    h.direction = get(d, "direction");
    if (!h.direction.empty() && h.direction != "push" && h.direction != "pull")
      error(d.line, d.attrs.at("direction"), "direction must be push or pull");
    h.primitive = has_flag(d, "primitive");
    return h;
  }

  bool declare(const Declaration& d) {
    if (!ids_.insert(d.id.text).second) {
      error(d.line, d.id, "id '" + d.id.text + "' is already declared", "DUPLICATE");
      return false;
    }
    spans_[d.id.text] = span(d.line, d.id);
    return true;
  }

  // --- declarations ------------------------------------------------------

  void entity(const Declaration& d) {
    allow(d, {"kind"});
    Entity e{d.id.text, EntityKind::object};
    std::string kind = get(d, "kind");
    if (kind == "region") e.kind = EntityKind::region;
    else if (!kind.empty() && kind != "object") error(d.line, d.attrs.at("kind"), "entity kind is object or region");
    if (declare(d)) model_.entities[e.id] = e;
  }

  void param(const Declaration& d) {
    allow(d, {"bearer", "kind", "value"});
    Parameter p;
    p.id = d.id.text;
    p.bearer = get(d, "bearer");
    p.quantity_kind = get(d, "kind");
    if (auto v = rational(d, "value")) p.value = *v;
    else if (!d.attrs.count("value")) error(d.line, d.id, "param '" + p.id + "' needs value=");
    if (declare(d)) model_.parameters[p.id] = p;
  }

  void state(const Declaration& d) {
    allow(d, {"bearer", "prop", "param", "cmp", "value", "from", "to", "refines-into", "operand", "medium",
              "conduit-region", "device", "direction"},
          {"primitive"});
    State s;
    s.id = d.id.text;
    s.bearer = get(d, "bearer");
    if (d.attrs.count("param")) {
      if (d.attrs.count("prop")) error(d.line, d.id, "a state is either prop= or param=, not both");
      ParameterPredicate pred;
      pred.parameter = get(d, "param");
      auto cmp = require(d, "cmp");
      if (cmp) {
        auto op = parse_comparison(*cmp);
        if (!op) error(d.line, d.attrs.at("cmp"), "comparison is one of lt le eq ne ge gt");
        else pred.op = *op;
      }
      if (auto v = rational(d, "value")) pred.threshold = *v;
      else if (!d.attrs.count("value")) error(d.line, d.id, "state '" + s.id + "' needs value=");
      s.condition = pred;
    } else {
      if (d.attrs.count("cmp") || d.attrs.count("value"))
        error(d.line, d.id, "cmp= and value= need param=");
      std::string name = get(d, "prop");
      s.condition = Proposition{name.empty() ? s.id : name};
    }
    s.interval = interval(d, false);
    s.hints = hints(d);
    if (declare(d)) model_.states[s.id] = s;
  }

  void process(const Declaration& d) {
    allow(d, {"kind", "participants", "drives", "delta", "from", "to", "duration", "refines-into", "operand",
              "medium", "conduit-region", "device", "direction"},
          {"trigger", "primitive"});
    Process p;
    p.id = d.id.text;
    std::string kind = get(d, "kind");
    if (kind == "intransitive") p.kind = ProcessKind::intransitive;
    else if (!kind.empty() && kind != "operand")
      error(d.line, d.attrs.at("kind"), "process kind is operand or intransitive");
    for (const auto& x : split_list(get(d, "participants"))) p.participants.insert(x);
    for (const auto& x : split_list(get(d, "drives"))) p.driven_states.insert(x);
    for (const auto& item : split_list(get(d, "delta"))) {
      auto colon = item.find(':');
      auto rate = colon == std::string::npos ? std::nullopt : parse_rational(item.substr(colon + 1));
      if (!rate) {
        error(d.line, d.attrs.at("delta"), "delta items look like parameter:rate, got '" + item + "'");
        continue;
      }
      p.deltas.push_back({item.substr(0, colon), *rate});
    }
    if (has_flag(d, "trigger")) {
      if (d.attrs.count("from") || d.attrs.count("to"))
        error(d.line, d.id, "a triggered process has no from=/to=");
      if (auto it = d.attrs.find("duration"); it != d.attrs.end()) {
        auto n = parse_tick(it->second.text);
        if (!n) error(d.line, it->second, "duration must be a tick count");
        else p.duration = *n;
      }
    } else {
      if (d.attrs.count("duration")) error(d.line, d.attrs.at("duration"), "duration= needs trigger");
      p.interval = interval(d, true);
    }
    p.hints = hints(d);
    if (declare(d)) model_.processes[p.id] = p;
  }

  void event(const Declaration& d) {
    allow(d, {"constituted-by", "from", "to", "results-in", "terminates", "refines-into", "operand", "medium",
              "conduit-region", "device", "direction"},
          {"primitive"});
    Event e;
    e.id = d.id.text;
    if (auto c = require(d, "constituted-by")) e.constituted_by = *c;
    if (auto i = interval(d, true)) e.interval = *i;
    for (const auto& x : split_list(get(d, "results-in"))) e.resultant_states.insert(x);
    for (const auto& x : split_list(get(d, "terminates"))) e.terminated_states.insert(x);
    e.hints = hints(d);
    if (declare(d)) model_.events[e.id] = e;
  }

  void maintain_decl(const Declaration& d) {
    allow(d, {"state", "from", "to", "ctx", "omits"});
    Maintain m;
    m.id = d.id.text;
    if (auto s = require(d, "state")) m.state = *s;
    if (auto i = interval(d, true)) m.interval = *i;
    m.context = get(d, "ctx");
    m.omits = get(d, "omits");
    if (declare(d)) model_.maintains[m.id] = m;
  }

  void precondition(const Declaration& d) {
    allow(d, {"for", "state"}, {"facilitative", "preventive"});
    Precondition p;
    p.id = d.id.text;
    if (auto f = require(d, "for")) p.occurrent = *f;
    if (auto s = require(d, "state")) p.state = *s;
    bool fac = has_flag(d, "facilitative");
    bool prev = has_flag(d, "preventive");
    if (fac == prev) error(d.line, d.id, "precondition must be exactly one of facilitative or preventive");
    p.polarity = prev ? Polarity::preventive : Polarity::facilitative;
    if (declare(d)) model_.preconditions[p.id] = p;
  }

  void equation(const Declaration& d) {
    allow(d, {"lhs", "rhs", "solve-for", "provenance"});
    Equation eq;
    eq.id = d.id.text;
    if (auto l = require(d, "lhs")) eq.lhs = *l;
    if (auto r = require(d, "rhs")) {
      for (const auto& item : split_list(*r)) {
        Term t;
        auto star = item.find('*');
        if (star != std::string::npos) {
          auto c = parse_rational(item.substr(0, star));
          if (!c) {
            error(d.line, d.attrs.at("rhs"), "bad coefficient in '" + item + "'");
            continue;
          }
          t.coefficient = *c;
          t.parameter = item.substr(star + 1);
        } else {
          t.parameter = item;
        }
        eq.rhs.push_back(t);
      }
      if (eq.rhs.empty()) error(d.line, d.attrs.at("rhs"), "rhs needs at least one term");
    }
    eq.dependent = d.attrs.count("solve-for") ? get(d, "solve-for") : eq.lhs;
    std::string prov = get(d, "provenance");
    if (prov == "shared-individual") eq.provenance = EquationProvenance::shared_individual;
    else if (!prov.empty() && prov != "declared-identity")
      error(d.line, d.attrs.at("provenance"), "provenance is shared-individual or declared-identity");
    if (declare(d)) model_.equations[eq.id] = eq;
  }

  void context(const Declaration& d) {
    allow(d, {"assumes"});
    Context c;
    c.id = d.id.text;
    for (const auto& x : split_list(get(d, "assumes"))) c.assumptions.insert(x);
    if (declare(d)) model_.contexts[c.id] = c;
  }

  void exclusion(const Declaration& d) {
    allow(d, {"ctx", "members"});
    auto ctx = require(d, "ctx");
    require(d, "members");
    if (ctx && declare(d)) pending_exclusions_.emplace_back(d, *ctx);
  }

  void attach_exclusion(const Declaration& d, const std::string& ctx) {
    auto it = model_.contexts.find(ctx);
    if (it == model_.contexts.end()) {
      error(d.line, d.attrs.at("ctx"), "no context '" + ctx + "'", "REF");
      return;
    }
    auto& members = it->second.exclusions[d.id.text];
    for (const auto& x : split_list(get(d, "members"))) members.insert(x);
  }

  void handle_link(int line, const std::vector<Token>& tokens) {
    // assert-link direct|indirect <src> -> <tgt> [sub=...] [ctx=...]
    if (tokens.size() < 5 || tokens[3].text != "->") {
      error(line, tokens.front(), "expected: assert-link direct|indirect <source> -> <target>");
      return;
    }
    AssertedLink link;
    if (tokens[1].text == "direct") link.directness = Directness::direct;
    else if (tokens[1].text == "indirect") link.directness = Directness::indirect;
    else {
      error(line, tokens[1], "link must be direct or indirect");
      return;
    }
    link.source = tokens[2].text;
    link.target = tokens[4].text;
    for (std::size_t i = 5; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      if (t.text.rfind("sub=", 0) == 0) {
        auto s = parse_subfunction(t.text.substr(4));
        if (!s) error(line, t, "unknown subfunction '" + t.text.substr(4) + "'");
        else link.subfunction = *s;
      } else if (t.text.rfind("ctx=", 0) == 0) {
        link.context = t.text.substr(4);
      } else {
        error(line, t, "unexpected '" + t.text + "' in assert-link");
      }
    }
    SourceSpan s{file_, line, tokens[2].column,
                 tokens[4].column + static_cast<int>(tokens[4].text.size()) - tokens[2].column};
    if (!spans_.emplace(link.key(), s).second) {
      error(line, tokens[2], "link " + link.source + " -> " + link.target + " is asserted twice", "DUPLICATE");
      return;
    }
    model_.links.push_back(link);
  }

  std::string file_;
  ParseResult result_;
  Model model_;
  std::map<std::string, SourceSpan> spans_;
  std::set<Id> ids_;
  std::vector<std::pair<Declaration, std::string>> pending_exclusions_;
};

// --- serialization -------------------------------------------------------

template <typename Range>
std::string join(const Range& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ",";
    out += item;
  }
  return out;
}

class Writer {
 public:
  void begin(const std::string& keyword, const Id& id) { line_ = keyword + " " + id; }
  void raw(const std::string& text) { line_ += " " + text; }
  void attr(const char* key, const std::string& value) {
    if (!value.empty()) line_ += std::string(" ") + key + "=" + value;
  }
  void end() { out_ += line_ + "\n"; }
  void group_break() {
    if (!out_.empty() && out_.back() == '\n' && out_.size() >= 2 && out_[out_.size() - 2] != '\n') out_ += "\n";
  }

  void interval(const Interval& i) {
    attr("from", std::to_string(i.start));
    attr("to", i.end ? std::to_string(*i.end) : "open");
  }

  void hints(const Hints& h) {
    attr("refines-into", join(h.refines_into));
    attr("operand", h.operand);
    attr("medium", h.medium);
    attr("conduit-region", h.conduit_region);
    attr("device", h.device_name);
    attr("direction", h.direction);
    if (h.primitive) raw("primitive");
  }

  std::string out_;

 private:
  std::string line_;
};

} // namespace

ParseResult parse(std::string_view text, const std::string& file) { return Parser(file).run(text); }

ParseResult parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO", "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::string serialize(const Model& model) {
  Writer w;
  w.out_ = "# causal model (canonical form)\n";

  w.group_break();
  for (const auto& [id, e] : model.entities) {
    w.begin("entity", id);
    if (e.kind == EntityKind::region) w.attr("kind", "region");
    w.end();
  }
  w.group_break();
  for (const auto& [id, p] : model.parameters) {
    w.begin("param", id);
    w.attr("bearer", p.bearer);
    w.attr("kind", p.quantity_kind);
    w.attr("value", to_string(p.value));
    w.end();
  }
  w.group_break();
  for (const auto& [id, s] : model.states) {
    w.begin("state", id);
    w.attr("bearer", s.bearer);
    if (const auto* pred = s.predicate()) {
      w.attr("param", pred->parameter);
      w.attr("cmp", to_string(pred->op));
      w.attr("value", to_string(pred->threshold));
    } else {
      w.attr("prop", std::get<Proposition>(s.condition).name);
    }
    if (s.interval) w.interval(*s.interval);
    w.hints(s.hints);
    w.end();
  }
  w.group_break();
  for (const auto& [id, p] : model.processes) {
    w.begin("process", id);
    w.attr("kind", p.kind == ProcessKind::intransitive ? "intransitive" : "operand");
    w.attr("participants", join(p.participants));
    w.attr("drives", join(p.driven_states));
    std::vector<std::string> deltas;
    for (const auto& d : p.deltas) deltas.push_back(d.parameter + ":" + to_string(d.per_tick));
    w.attr("delta", join(deltas));
    if (p.interval) {
      w.interval(*p.interval);
    } else {
      w.raw("trigger");
      if (p.duration) w.attr("duration", std::to_string(*p.duration));
    }
    w.hints(p.hints);
    w.end();
  }
  w.group_break();
  for (const auto& [id, e] : model.events) {
    w.begin("event", id);
    w.attr("constituted-by", e.constituted_by);
    w.interval(e.interval);
    w.attr("results-in", join(e.resultant_states));
    w.attr("terminates", join(e.terminated_states));
    w.hints(e.hints);
    w.end();
  }
  w.group_break();
  for (const auto& [id, m] : model.maintains) {
    w.begin("maintain", id);
    w.attr("state", m.state);
    w.interval(m.interval);
    w.attr("ctx", m.context);
    w.attr("omits", m.omits);
    w.end();
  }
  w.group_break();
  for (const auto& [id, p] : model.preconditions) {
    w.begin("precondition", id);
    w.attr("for", p.occurrent);
    w.raw(to_string(p.polarity));
    w.attr("state", p.state);
    w.end();
  }
  w.group_break();
  for (const auto& [id, eq] : model.equations) {
    w.begin("equation", id);
    w.attr("lhs", eq.lhs);
    std::vector<std::string> terms;
    for (const auto& t : eq.rhs)
      terms.push_back(t.coefficient == Rational{1} ? t.parameter : to_string(t.coefficient) + "*" + t.parameter);
    w.attr("rhs", join(terms));
    w.attr("solve-for", eq.dependent);
    w.attr("provenance",
           eq.provenance == EquationProvenance::shared_individual ? "shared-individual" : "declared-identity");
    w.end();
  }
  w.group_break();
  for (const auto& [id, c] : model.contexts) {
    w.begin("context", id);
    w.attr("assumes", join(c.assumptions));
    w.end();
  }
  w.group_break();
  std::map<Id, std::pair<Id, const std::set<Id>*>> groups;
  for (const auto& [cid, c] : model.contexts)
    for (const auto& [gid, members] : c.exclusions) groups[gid] = {cid, &members};
  for (const auto& [gid, entry] : groups) {
    w.begin("exclusion", gid);
    w.attr("ctx", entry.first);
    w.attr("members", join(*entry.second));
    w.end();
  }
  w.group_break();
  auto links = model.links;
  std::sort(links.begin(), links.end());
  for (const auto& link : links) {
    w.begin("assert-link", to_string(link.directness));
    w.raw(link.source + " -> " + link.target);
    if (link.subfunction) w.attr("sub", to_string(*link.subfunction));
    w.attr("ctx", link.context);
    w.end();
  }
  while (w.out_.size() >= 2 && w.out_.back() == '\n' && w.out_[w.out_.size() - 2] == '\n') w.out_.pop_back();
  return w.out_;
}

} // namespace causa
