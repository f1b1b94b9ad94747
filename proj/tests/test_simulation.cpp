#include "causa/simulation.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace causa {
namespace {

using testing::corpus_model;

const Activation* activation_of(const Trace& t, const Id& occ) {
  for (const auto& a : t.activations)
    if (a.occurrent == occ) return &a;
  return nullptr;
}

bool has_check(const VerificationReport& r, const std::string& check) {
  for (const auto& v : r.violations)
    if (v.check == check) return true;
  return false;
}

TEST(Simulation, BloodClotFollowsTheConservationLaw) {
  Model m = corpus_model("bloodclot");
  Trace t = run(m, 10);
  ASSERT_EQ(t.snapshots.size(), 11u);
  for (Tick k = 0; k <= 10; ++k) {
    const auto& v = t.snapshots[static_cast<std::size_t>(k)].values;
    // Closed form: the clot gains half a unit per tick.
    Rational y = Rational(1) + Rational(k, 2);
    EXPECT_EQ(v.at("x"), Rational(10)) << k;
    EXPECT_EQ(v.at("y"), y) << k;
    EXPECT_EQ(v.at("z"), Rational(10) - y) << k;
    EXPECT_EQ(v.at("q"), Rational(3) * (Rational(10) - y)) << k;
  }
}

TEST(Simulation, UpdatesAreLabeled) {
  Trace t = run(corpus_model("bloodclot"), 3);
  ASSERT_FALSE(t.updates.empty());
  for (const auto& u : t.updates) {
    if (u.parameter == "y") {
      EXPECT_TRUE(u.causal);
      EXPECT_EQ(u.source, "growing");
    } else {
      EXPECT_FALSE(u.causal);
      EXPECT_EQ(u.source, u.parameter == "z" ? "cross-section" : "flow-law");
    }
  }
}

TEST(Simulation, IschemiaStartsWhenTheChannelNarrows) {
  Trace t = run(corpus_model("bloodclot"), 10);
  const Activation* a = activation_of(t, "ischemia");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->tick, 7);
  EXPECT_EQ(a->last_flipped, std::vector<Id>{"starved"});
  EXPECT_EQ(a->flipped_by, std::vector<Id>{"cross-section"});
  EXPECT_FALSE(t.snapshots[6].active.count("ischemia"));
  EXPECT_TRUE(t.snapshots[7].active.count("ischemia"));
  EXPECT_TRUE(t.snapshots[10].active.count("ischemia"));
}

TEST(Simulation, PistonAndCrankMoveTogether) {
  Trace t = run(corpus_model("piston"), 10);
  for (const auto& s : t.snapshots) {
    EXPECT_EQ(s.values.at("x"), s.values.at("y")) << s.tick;
    EXPECT_EQ(s.active.count("push"), s.active.count("rotation")) << s.tick;
  }
  EXPECT_EQ(t.snapshots[10].values.at("x"), Rational(13));
}

TEST(Simulation, WallRemovalReleasesTheBox) {
  Model m = corpus_model("trigger");
  Trace t = run(m, 8);
  const Activation* move = activation_of(t, "move");
  ASSERT_NE(move, nullptr);
  EXPECT_EQ(move->tick, 4);
  EXPECT_EQ(move->last_flipped, std::vector<Id>{"blocked"});
  EXPECT_EQ(move->flipped_by, std::vector<Id>{"wall-removal"});
  const Activation* machine = activation_of(t, "machine-working");
  ASSERT_NE(machine, nullptr);
  EXPECT_EQ(machine->tick, 5);
  EXPECT_EQ(machine->last_flipped, std::vector<Id>{"switched"});

  m.events.erase("wall-removal");
  m.processes.erase("removing");
  m.states.at("wall-gone").interval.reset();
  EXPECT_EQ(activation_of(run(m, 8), "move"), nullptr);
}

TEST(Simulation, ResultantStatesAppearAtCompletion) {
  Trace t = run(corpus_model("valve"), 10);
  EXPECT_FALSE(t.snapshots[4].states.at("flow-halved"));
  EXPECT_TRUE(t.snapshots[5].states.at("flow-halved"));
  ASSERT_EQ(t.completions.size(), 1u);
  EXPECT_EQ(t.completions[0].event, "valve-closed");
  EXPECT_EQ(t.completions[0].tick, 5);
}

TEST(Simulation, TerminatedStatesStopAtCompletion) {
  Trace t = run(corpus_model("robbery"), 6);
  EXPECT_TRUE(t.snapshots[2].states.at("unlocked"));
  EXPECT_FALSE(t.snapshots[3].states.at("unlocked"));
  EXPECT_TRUE(t.snapshots[3].states.at("locked"));
}

TEST(Simulation, CorpusTracesVerify) {
  for (const auto& entry : std::filesystem::directory_iterator(testing::corpus_dir())) {
    if (entry.path().extension() != ".cm") continue;
    Model m = testing::load_model(entry.path());
    auto report = verify_trace(run(m, 12), m);
    EXPECT_TRUE(report.ok()) << entry.path() << ": " << report.violations.front().message;
  }
}

TEST(Simulation, StepExtendsARun) {
  Model m = corpus_model("bloodclot");
  Trace five = run(m, 5);
  Trace six = step(m, 6, five);
  Trace direct = run(m, 6);
  EXPECT_EQ(six.snapshots, direct.snapshots);
  EXPECT_EQ(six.updates, direct.updates);
  EXPECT_EQ(six.activations, direct.activations);
}

TEST(Simulation, EmptyModelAndBadHorizon) {
  EXPECT_TRUE(run(Model{}, 5).snapshots.empty());
  EXPECT_THROW(run(corpus_model("cut"), -1), Error);
}

TEST(Propagate, RecomputesDependents) {
  Model m = corpus_model("bloodclot");
  std::map<Id, Rational> values;
  for (const auto& [id, p] : m.parameters) values[id] = p.value;
  auto updates = propagate(m, values, "y", Rational(2));
  std::map<Id, Rational> after;
  for (const auto& u : updates) {
    EXPECT_FALSE(u.causal);
    after[u.parameter] = u.to;
  }
  EXPECT_EQ(after.at("z"), Rational(8));
  EXPECT_EQ(after.at("q"), Rational(24));
  EXPECT_TRUE(propagate(m, values, "unrelated", Rational(1)).empty());
}

TEST(Propagate, PinnedDependentIsOverconstrained) {
  Model m = corpus_model("bloodclot");
  std::map<Id, Rational> values;
  for (const auto& [id, p] : m.parameters) values[id] = p.value;
  try {
    propagate(m, values, "z", Rational(3));
    FAIL() << "expected OverconstrainedSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "OverconstrainedSystem");
  }
}

TEST(Propagate, CircularDependentsAreUnderdetermined) {
  Model m = corpus_model("piston");
  m.equations["back"] = Equation{"back", "y", {{Rational(1), "x"}}, "x", EquationProvenance::declared_identity};
  try {
    run(m, 2);
    FAIL() << "expected UnderdeterminedSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnderdeterminedSystem");
  }
}

TEST(TriggerCheck, FiresOnlyWhenEveryPreconditionAgrees) {
  Model m = corpus_model("trigger");
  auto spec = activation_spec(m, "move");
  EXPECT_EQ(spec.facilitative.size(), 1u);
  EXPECT_EQ(spec.preventive.size(), 1u);
  Snapshot s;
  s.states = {{"force-applied", true}, {"wall-present", true}};
  EXPECT_FALSE(trigger_check(spec, s).fire);
  s.states["wall-present"] = false;
  EXPECT_TRUE(trigger_check(spec, s).fire);
  s.states["force-applied"] = false;
  EXPECT_FALSE(trigger_check(spec, s).fire);
  Snapshot missing;
  EXPECT_THROW(trigger_check(spec, missing), Error);
}

TEST(TriggerCheck, SimultaneousFlipsAreRecordedTogether) {
  Model m = corpus_model("trigger");
  auto spec = activation_spec(m, "move");
  Trace history;
  Snapshot before;
  before.tick = 0;
  before.states = {{"force-applied", false}, {"wall-present", true}};
  history.snapshots.push_back(before);
  Snapshot now;
  now.tick = 1;
  now.states = {{"force-applied", true}, {"wall-present", false}};
  auto d = trigger_check(spec, now, history);
  EXPECT_TRUE(d.fire);
  EXPECT_EQ(d.flip_tick, 1);
  EXPECT_EQ(d.last_flipped, (std::vector<Id>{"blocked", "pushed"}));
}

TEST(Verify, DetectsTamperedTraces) {
  Model m = corpus_model("bloodclot");
  Trace good = run(m, 10);
  ASSERT_TRUE(verify_trace(good, m).ok());

  Trace bad = good;
  bad.snapshots[4].values["z"] += Rational(1, 1000);
  EXPECT_TRUE(has_check(verify_trace(bad, m), "equation"));

  bad = good;
  for (auto& u : bad.updates)
    if (u.source == "cross-section") u.causal = true;
  EXPECT_TRUE(has_check(verify_trace(bad, m), "labeling"));

  bad = good;
  bad.activations.clear();
  EXPECT_TRUE(has_check(verify_trace(bad, m), "activation"));

  Model piston = corpus_model("piston");
  Trace p = run(piston, 10);
  p.snapshots[3].active.erase("rotation");
  EXPECT_TRUE(has_check(verify_trace(p, piston), "simultaneity"));

  Model valve = corpus_model("valve");
  Trace v = run(valve, 10);
  v.snapshots[3].states["flow-halved"] = true;
  EXPECT_TRUE(has_check(verify_trace(v, valve), "event-state"));
}

TEST(Simulation, RunsAreDeterministic) {
  for (const char* stem : {"bloodclot", "trigger", "piston", "valve", "robbery"}) {
    Model m = corpus_model(stem);
    EXPECT_EQ(run(m, 10), run(m, 10)) << stem;
  }
}

}  // namespace
}  // namespace causa
