#include "causa/dsl.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace causa {
namespace {

std::vector<std::filesystem::path> all_models() {
  std::vector<std::filesystem::path> out;
  for (const auto& dir : {testing::corpus_dir(), testing::data_dir()})
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.path().extension() == ".cm") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

const ParseDiagnostic* first_error(const ParseResult& r) {
  for (const auto& d : r.diagnostics)
    if (d.severity == Severity::error) return &d;
  return nullptr;
}

TEST(Parse, ReadsDeclarations) {
  Model m = testing::parse_model(R"(
# comment
entity rope
entity knife   # trailing comment
param len bearer=rope kind=length value=3/2
state long bearer=rope param=len cmp=ge value=1
state separated bearer=rope from=4 to=open
process cutting participants=knife,rope drives=long,separated delta=len:-1/4 from=0 to=4 direction=push
event cut constituted-by=cutting from=0 to=4 results-in=separated
)");
  EXPECT_EQ(m.entities.size(), 2u);
  EXPECT_EQ(m.parameters.at("len").value, Rational(3, 2));
  const auto* pred = m.states.at("long").predicate();
  ASSERT_NE(pred, nullptr);
  EXPECT_EQ(pred->op, Comparison::ge);
  EXPECT_EQ(m.states.at("separated").interval, Interval::open_from(4));
  const auto& p = m.processes.at("cutting");
  ASSERT_EQ(p.deltas.size(), 1u);
  EXPECT_EQ(p.deltas[0].per_tick, Rational(-1, 4));
  EXPECT_EQ(p.hints.direction, "push");
  EXPECT_EQ(m.events.at("cut").resultant_states, std::set<Id>{"separated"});
}

TEST(Parse, HintsAndLinks) {
  Model m = testing::corpus_model("window");
  const auto& wb = m.events.at("window-breaking");
  EXPECT_EQ(wb.hints.refines_into, (std::vector<Id>{"stone-travel", "stone-hit"}));
  EXPECT_EQ(wb.hints.operand, "window");
  EXPECT_EQ(wb.hints.conduit_region, "trajectory");
  EXPECT_EQ(wb.hints.device_name, "window-breaking-system");
  EXPECT_EQ(m.entities.at("trajectory").kind, EntityKind::region);
  ASSERT_EQ(m.links.size(), 2u);
}

TEST(Parse, ContextsAndExclusions) {
  Model m = testing::data_model("traffic");
  EXPECT_EQ(m.contexts.at("city").assumptions, std::set<Id>{"red"});
  EXPECT_EQ(m.contexts.at("city").exclusions.at("lamp"), (std::set<Id>{"green", "red"}));
  EXPECT_TRUE(m.contexts.at("rural").exclusions.count("motion"));
}

TEST(Parse, SyntaxErrorsCarryPositions) {
  auto r = parse("entity a\nwidget b\n", "t.cm");
  ASSERT_FALSE(r.ok());
  const auto* d = first_error(r);
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->rule_id, "SYNTAX");
  EXPECT_EQ(d->span.line, 2);
  EXPECT_EQ(d->span.column, 1);
  EXPECT_EQ(format(*d).rfind("t.cm:2:1: error[SYNTAX]: ", 0), 0u) << format(*d);
}

TEST(Parse, DuplicateIds) {
  auto r = parse("entity a\nentity b\nstate a bearer=b\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(first_error(r)->rule_id, "DUPLICATE");
  EXPECT_EQ(first_error(r)->span.line, 3);
}

TEST(Parse, MalformedAttributes) {
  for (const char* text : {"entity a\nparam p bearer=a kind=k value=x\n",
                           "entity a\nstate s bearer=a from=zero to=2\n",
                           "entity a\nstate s bearer=a param=p cmp=approx value=1\n",
                           "entity a\nprocess p participants=a\n",
                           "entity a\nassert-link direct a b\n"}) {
    auto r = parse(text);
    EXPECT_FALSE(r.ok()) << text;
  }
}

TEST(Parse, UnknownReferences) {
  auto r = parse("entity a\nstate s bearer=ghost\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(first_error(r)->rule_id, "REF");
  EXPECT_EQ(first_error(r)->span.line, 2);
}

TEST(Parse, IllegalDirectLinksPointAtTheLink) {
  auto r = parse_file(testing::data_dir() / "eventevent.cm");
  ASSERT_FALSE(r.ok());
  const auto* d = first_error(r);
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->rule_id, "CLAIM3");
  EXPECT_EQ(d->span.line, 14);

  auto p = parse_file(testing::data_dir() / "eventprocess.cm");
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(first_error(p)->rule_id, "EVENT-PROCESS");
}

TEST(Parse, WarningsDoNotRejectTheModel) {
  auto r = parse("entity a\nstate s bearer=a\ncontext k\nexclusion g ctx=k members=s\n");
  ASSERT_TRUE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].severity, Severity::warning);
}

TEST(Parse, MissingFileIsAnIoError) {
  try {
    parse_file("/nonexistent/model.cm");
    FAIL() << "expected IO error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "IO");
  }
}

TEST(Serialize, RoundTripsEveryModel) {
  for (const auto& path : all_models()) {
    auto r = parse_file(path);
    if (!r.ok()) continue;  // fixtures that exist to be rejected
    std::string text = serialize(*r.model);
    auto again = parse(text);
    ASSERT_TRUE(again.ok()) << path << "\n" << text;
    EXPECT_EQ(*again.model, *r.model) << path;
    EXPECT_EQ(serialize(*again.model), text) << path;
  }
}

TEST(Serialize, CanonicalFormIgnoresDeclarationOrder) {
  Model a = testing::parse_model("entity b\nentity a\nstate t bearer=a\nstate s bearer=b\n");
  Model b = testing::parse_model("state s bearer=b\nentity a\nstate t bearer=a\nentity b\n");
  EXPECT_EQ(serialize(a), serialize(b));
}

TEST(Serialize, StartsWithTheHeaderAndEndsWithOneNewline) {
  std::string text = serialize(testing::corpus_model("cut"));
  EXPECT_EQ(text.rfind("# causal model (canonical form)\n", 0), 0u);
  ASSERT_GE(text.size(), 2u);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_NE(text[text.size() - 2], '\n');
}

}  // namespace
}  // namespace causa
