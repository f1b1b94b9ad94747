#include "causa/calculus.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace causa {
namespace {

using testing::corpus_model;
using testing::data_model;

std::vector<Subfunction> kinds(const std::vector<Derivation>& ds) {
  std::vector<Subfunction> out;
  for (const auto& d : ds) out.push_back(d.conclusion.subfunction);
  return out;
}

std::string rejection_id(const PatternVerdict& v) {
  auto* r = std::get_if<PatternRejection>(&v);
  return r ? r->rule_id : "";
}

TEST(Achieves, ResultantStateOfAnEvent) {
  Model m = corpus_model("cut");
  auto d = achieves(m, "cut", "separated");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->rule, rules::achieves_event_state);
  EXPECT_EQ(d->conclusion.pattern, PatternKind::event_state);
  EXPECT_EQ(d->conclusion.directness, Directness::direct);
  EXPECT_FALSE(achieves(m, "cutting", "separated"));
}

TEST(Achieves, ProcessesCoupledByAnEquation) {
  Model m = corpus_model("bloodclot");
  auto d = achieves(m, "growing", "narrowing");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->rule, rules::achieves_process_process);
  EXPECT_NE(d->evidence.find("cross-section"), std::string::npos);
  EXPECT_FALSE(achieves(m, "narrowing", "growing"));
}

TEST(Achieves, AssertedProcessLinkNeedsOverlap) {
  Model m = corpus_model("window");
  EXPECT_TRUE(achieves(m, "arm-swinging", "stone-flying"));
  m.processes.at("stone-flying").interval = Interval::closed(3, 6);
  EXPECT_FALSE(achieves(m, "arm-swinging", "stone-flying"));
}

TEST(Achieves, NothingAchievesItself) {
  Model m = corpus_model("cut");
  EXPECT_FALSE(achieves(m, "separated", "separated"));
}

TEST(AchievesPattern, ClassifiesLegalAndIllegalRelata) {
  Model m = data_model("billiard");
  auto es = achieves_pattern(m, "stroke", "ball-moving");
  ASSERT_TRUE(std::holds_alternative<PatternMatch>(es));
  EXPECT_EQ(std::get<PatternMatch>(es).kind, PatternKind::event_state);
  EXPECT_EQ(rejection_id(achieves_pattern(m, "stroke", "ball-rolling")), rule_ids::event_process);
  EXPECT_EQ(rejection_id(achieves_pattern(m, "cue-pushing", "ball-moving")), rule_ids::achieves_pattern);
  EXPECT_EQ(rejection_id(achieves_pattern(m, "cue-pushing", "ball-rolling")), rule_ids::no_evidence);
}

TEST(AchievesPattern, EventToEventIsClaim3) {
  auto r = parse_file(testing::data_dir() / "eventevent.cm");
  ASSERT_FALSE(r.ok());
  Model m = corpus_model("robbery");
  m.events["second"] = Event{"second", "locking", Interval::closed(2, 3), {}, {}, {}};
  auto v = achieves_pattern(m, "lock-door", "second");
  EXPECT_EQ(rejection_id(v), rule_ids::event_event);
  EXPECT_FALSE(std::get<PatternRejection>(v).rewrite_hint.empty());
}

TEST(Prevents, AchievingAnIncompatibleState) {
  Model m = corpus_model("robbery");
  auto r = derive_prevents(m, "lock-door", "unlocked", "household");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.derivation->rule, rules::prevents);
  EXPECT_EQ(r.derivation->witnesses.at("Z"), "locked");
  EXPECT_EQ(r.derivation->conclusion.directness, Directness::direct);
  ASSERT_EQ(r.derivation->children.size(), 1u);
  EXPECT_EQ(r.derivation->children[0].conclusion.subfunction, Subfunction::achieves);
}

TEST(Prevents, NeedsTheContextThatDeclaresIncompatibility) {
  Model m = corpus_model("robbery");
  auto r = derive_prevents(m, "lock-door", "unlocked", "");
  EXPECT_FALSE(r);
  ASSERT_FALSE(r.failure.examined.empty());
  EXPECT_EQ(r.failure.examined[0].witness, "locked");
  EXPECT_NE(r.failure.message().find("locked"), std::string::npos);
}

TEST(Prevents, BannedBetweenEventsAndFromEventsToProcesses) {
  Model m = corpus_model("robbery");
  auto r = derive_prevents(m, "lock-door", "robbery", "household");
  EXPECT_FALSE(r);
  EXPECT_NE(r.failure.note.find(rule_ids::event_process), std::string::npos);
}

TEST(Prevents, UnknownContextIsReported) {
  Model m = corpus_model("robbery");
  auto r = derive_prevents(m, "lock-door", "unlocked", "nowhere");
  EXPECT_FALSE(r);
  EXPECT_NE(r.failure.note.find("nowhere"), std::string::npos);
}

TEST(Disallows, AchievingAPreventivePrecondition) {
  Model m = corpus_model("robbery");
  auto r = derive_disallows(m, "lock-door", "robbery", "household");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.derivation->rule, rules::disallows_achieve);
  EXPECT_EQ(r.derivation->witnesses.at("Z"), "locked");
  EXPECT_EQ(r.derivation->witnesses.at("precondition"), "door-in-the-way");
  EXPECT_EQ(r.derivation->conclusion.directness, Directness::indirect);
}

TEST(Disallows, PreventingAFacilitativePrecondition) {
  Model m = corpus_model("delivery");
  auto r = derive_disallows(m, "unknown-event", "part-available", "plant");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.derivation->rule, rules::disallows_prevent);
  EXPECT_EQ(r.derivation->witnesses.at("Z"), "delivered-on-time");
  const auto& prevent = r.derivation->children.at(0);
  EXPECT_EQ(prevent.conclusion.subfunction, Subfunction::prevents);
  EXPECT_EQ(prevent.witnesses.at("Z"), "delivery-failed");
  EXPECT_FALSE(derive_disallows(m, "unknown-event", "part-available", ""));
}

TEST(Disallows, MaintainingAPreventivePrecondition) {
  Model m = corpus_model("dog");
  auto r = derive_disallows(m, "dog-kept-home", "cure", "");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.derivation->rule, rules::disallows_maintain);
}

TEST(Allows, MaintainingAFacilitativePrecondition) {
  Model m = corpus_model("robbery");
  auto r = derive_allows(m, "not-locking", "break-in", "household");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.derivation->rule, rules::allows_maintain);
  EXPECT_EQ(r.derivation->witnesses.at("Z"), "unlocked");
}

TEST(Allows, AchievingAFacilitativePrecondition) {
  Model m = corpus_model("trigger");
  auto r = derive_allows(m, "switch-turning", "machine-working", "");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.derivation->rule, rules::allows_achieve);
}

TEST(Allows, PreventingAPreventivePrecondition) {
  Model m = corpus_model("doubleprevention");
  auto r = derive_allows(m, "billy-shoots", "suzy-bombs", "mission");
  ASSERT_TRUE(r);
  EXPECT_EQ(r.derivation->rule, rules::allows_prevent);
  EXPECT_EQ(r.derivation->witnesses.at("Z"), "suzy-shot-down");
}

TEST(Allows, ReportsWhenThereAreNoPreconditions) {
  Model m = corpus_model("cut");
  auto r = derive_allows(m, "cut", "separated", "");
  EXPECT_FALSE(r);
  EXPECT_NE(r.failure.note.find("no declared preconditions"), std::string::npos);
}

TEST(Derivation, DepthBoundStopsNestedRules) {
  Model m = corpus_model("delivery");
  auto shallow = derive_disallows(m, "unknown-event", "part-available", "plant", DerivationOptions{2});
  EXPECT_FALSE(shallow);
  EXPECT_TRUE(shallow.failure.depth_limited);
  EXPECT_TRUE(derive_disallows(m, "unknown-event", "part-available", "plant", DerivationOptions{3}));
  EXPECT_FALSE(derive_prevents(m, "unknown-event", "delivered-on-time", "plant", DerivationOptions{1}).derivation);
}

TEST(Derivation, RecheckAcceptsDerivationsAndRejectsTampering) {
  Model m = corpus_model("delivery");
  auto d = *derive_disallows(m, "unknown-event", "part-available", "plant").derivation;
  EXPECT_TRUE(recheck(m, d));
  auto tampered = d;
  tampered.witnesses["Z"] = "part-missing";
  EXPECT_FALSE(recheck(m, tampered));
  tampered = d;
  tampered.rule = rules::allows_prevent;
  EXPECT_FALSE(recheck(m, tampered));
  tampered = d;
  tampered.conclusion.context = "";
  EXPECT_FALSE(recheck(m, tampered));
}

TEST(Maintain, BuildsFromAHoldingState) {
  Model m = corpus_model("robbery");
  Maintain mt = maintain(m, "unlocked", Interval::closed(0, 3));
  EXPECT_EQ(mt.id, "maintain:unlocked");
  EXPECT_EQ(mt.state, "unlocked");
  EXPECT_EQ(mt.interval, Interval::closed(0, 3));
}

TEST(Maintain, RefusesAStateThatDoesNotHold) {
  Model m = corpus_model("robbery");
  try {
    maintain(m, "locked", Interval::closed(0, 3));
    FAIL() << "expected StateNotHolding";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "StateNotHolding");
  }
  EXPECT_THROW(maintain(m, "nothing", Interval::closed(0, 1)), Error);
}

TEST(Maintain, MaintainsRelation) {
  Model m = corpus_model("robbery");
  auto d = maintains(m, "not-locking", "unlocked");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->conclusion.subfunction, Subfunction::maintain);
  EXPECT_FALSE(maintains(m, "not-locking", "locked"));
  m.maintains.at("not-locking").interval = Interval::closed(1, 1);
  EXPECT_FALSE(maintains(m, "not-locking", "unlocked"));
}

TEST(Classify, SquareOrderAndContextDependence) {
  Model m = data_model("traffic");
  EXPECT_EQ(kinds(classify_link(m, "turn-red", "green", "city")), std::vector{Subfunction::prevents});
  EXPECT_TRUE(classify_link(m, "turn-red", "green", "rural").empty());
  EXPECT_EQ(kinds(classify_link(m, "turn-red", "crossing", "city")), std::vector{Subfunction::disallows});
  EXPECT_EQ(kinds(classify_link(m, "turn-red", "red", "city")), std::vector{Subfunction::achieves});
}

TEST(Classify, AnalysisContexts) {
  EXPECT_EQ(analysis_contexts(corpus_model("cut")), std::vector<Id>{""});
  EXPECT_EQ(analysis_contexts(data_model("traffic")), (std::vector<Id>{"city", "rural"}));
}

TEST(Placement, OverlapIsDirect) {
  Model m = data_model("billiard");
  auto v = interaction_placement(m, "cue-pushing", "ball-rolling");
  EXPECT_EQ(v.placement, PlacementCase::d);
  EXPECT_TRUE(v.valid);
  EXPECT_EQ(v.directness, Directness::direct);
}

TEST(Placement, MeetingProcessIsCaseB) {
  auto v = interaction_placement(data_model("billiard"), "cue-pushing", "ball-dropping");
  EXPECT_EQ(v.placement, PlacementCase::b);
  EXPECT_FALSE(v.valid);
}

TEST(Placement, MeetingEventIsCaseC) {
  auto v = interaction_placement(data_model("billiard"), "stroke", "ball-dropping");
  EXPECT_EQ(v.placement, PlacementCase::c);
  EXPECT_FALSE(v.valid);
}

TEST(Placement, GapBridgedByAState) {
  auto v = interaction_placement(data_model("billiard"), "stroke", "sinking");
  EXPECT_EQ(v.placement, PlacementCase::a);
  EXPECT_TRUE(v.valid);
  EXPECT_EQ(v.directness, Directness::indirect);
  EXPECT_EQ(v.mediating_state, "ball-moving");
}

TEST(Placement, UnbridgedGapAndReversedTime) {
  Model m = data_model("billiard");
  auto gap = interaction_placement(m, "cue-pushing", "drifting");
  EXPECT_EQ(gap.placement, PlacementCase::a);
  EXPECT_FALSE(gap.valid);
  auto back = interaction_placement(m, "drifting", "cue-pushing");
  EXPECT_FALSE(back.valid);
  EXPECT_NE(back.diagnostic.find("precedes"), std::string::npos);
}

CausalLink link(const Id& s, Subfunction sub, const Id& t, const Id& ctx = {},
                std::optional<PatternKind> pattern = std::nullopt) {
  return {s, t, sub, is_direct(sub) ? Directness::direct : Directness::indirect, ctx, pattern};
}

TEST(Chain, PublishedExampleValidates) {
  Model m = corpus_model("delivery");
  std::vector<CausalLink> chain{link("unknown-event", Subfunction::disallows, "part-available", "plant"),
                                link("no-part", Subfunction::disallows, "repair", "plant"),
                                link("no-repair", Subfunction::allows, "breakdown", "plant")};
  auto r = validate_chain(m, chain);
  EXPECT_TRUE(r.valid) << (r.issues.empty() ? "" : r.issues[0].message);
  EXPECT_FALSE(r.necessary);
  EXPECT_EQ(r.derivations.size(), 3u);
}

TEST(Chain, AchievesOnlyChainIsNecessary) {
  Model m = corpus_model("robbery");
  std::vector<CausalLink> chain{
      link("lock-door", Subfunction::achieves, "locked", "household", PatternKind::event_state)};
  auto r = validate_chain(m, chain);
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.necessary);
}

TEST(Chain, BrokenChainThrows) {
  Model m = corpus_model("robbery");
  std::vector<CausalLink> chain{link("lock-door", Subfunction::disallows, "robbery", "household"),
                                link("not-locking", Subfunction::allows, "break-in", "household")};
  try {
    validate_chain(m, chain);
    FAIL() << "expected BrokenChain";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "BrokenChain");
  }
}

bool has_issue(const ChainReport& r, const std::string& rule) {
  for (const auto& i : r.issues)
    if (i.rule == rule) return true;
  return false;
}

TEST(Chain, FlagsIllegalLinks) {
  Model m = corpus_model("robbery");
  std::vector<CausalLink> direct_allows{
      {"not-locking", "break-in", Subfunction::allows, Directness::direct, "household", std::nullopt}};
  EXPECT_TRUE(has_issue(validate_chain(m, direct_allows), rule_ids::directness));

  std::vector<CausalLink> event_process{
      link("lock-door", Subfunction::achieves, "robbery", "household", PatternKind::event_state)};
  EXPECT_TRUE(has_issue(validate_chain(m, event_process), rule_ids::event_process));

  std::vector<CausalLink> maintain_link{link("not-locking", Subfunction::maintain, "unlocked")};
  EXPECT_TRUE(has_issue(validate_chain(m, maintain_link), "SUBFUNCTION"));

  std::vector<CausalLink> not_derivable{link("not-locking", Subfunction::allows, "robbery", "household")};
  EXPECT_TRUE(has_issue(validate_chain(m, not_derivable), "NOT-DERIVABLE"));

  std::vector<CausalLink> no_pattern{link("lock-door", Subfunction::achieves, "locked", "household")};
  EXPECT_TRUE(has_issue(validate_chain(m, no_pattern), rule_ids::achieves_pattern));
}

TEST(Chain, ContinuesThroughAnOmission) {
  Model m = corpus_model("dog");
  EXPECT_TRUE(chain_continues(m, link("dog-kept-home", Subfunction::disallows, "cure"),
                              link("no-cure", Subfunction::allows, "lose-sight")));
  EXPECT_FALSE(chain_continues(m, link("dog-kept-home", Subfunction::disallows, "cure"),
                               link("dog-kept-home", Subfunction::allows, "lose-sight")));
}

TEST(Reduction, ValveLinkReducesToProcesses) {
  Model m = corpus_model("valve");
  auto r = reduce_state_state(link("half-closed", Subfunction::achieves, "flow-halved", {}, PatternKind::state_state), m);
  EXPECT_EQ(r.process_link.source, "valve-closing");
  EXPECT_EQ(r.process_link.target, "flow-decreasing");
  EXPECT_EQ(r.process_link.pattern, PatternKind::process_process);
  EXPECT_EQ(r.completion_event, "valve-closed");
  ASSERT_TRUE(r.completion_link);
  EXPECT_EQ(r.completion_link->source, "valve-closed");
  EXPECT_EQ(r.completion_link->target, "flow-halved");
  EXPECT_TRUE(constitutes(m, "valve-closing", "valve-closed"));
}

TEST(Reduction, PrimitiveAndMalformedLinks) {
  Model m = corpus_model("valve");
  m.states.at("half-closed").hints.primitive = true;
  auto code = [&](const CausalLink& l) {
    try {
      reduce_state_state(l, m);
    } catch (const Error& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code(link("half-closed", Subfunction::achieves, "flow-halved")), "NoUnderlyingProcess");
  EXPECT_EQ(code(link("valve-closed", Subfunction::achieves, "flow-halved")), "NotStateState");
  Model plain = corpus_model("robbery");
  m = plain;
  EXPECT_EQ(code(link("locked", Subfunction::achieves, "unlocked")), "NoUnderlyingProcess");
}

TEST(LinkChecks, RejectionsAndWarnings) {
  Model m = corpus_model("robbery");
  m.links.push_back({"lock-door", "robbery", Directness::direct, std::nullopt, ""});
  m.links.push_back({"not-locking", "robbery", Directness::indirect, Subfunction::allows, ""});
  m.links.push_back({"locked", "unlocked", Directness::direct, Subfunction::allows, ""});
  auto issues = check_links(m);
  auto find = [&](const std::string& key) -> const Issue* {
    for (const auto& i : issues)
      if (i.subject == key) return &i;
    return nullptr;
  };
  ASSERT_TRUE(find("link:lock-door->robbery"));
  EXPECT_EQ(find("link:lock-door->robbery")->rule, rule_ids::event_process);
  ASSERT_TRUE(find("link:not-locking->robbery"));
  EXPECT_EQ(find("link:not-locking->robbery")->severity, Severity::warning);
  ASSERT_TRUE(find("link:locked->unlocked"));
  EXPECT_EQ(find("link:locked->unlocked")->rule, rule_ids::directness);
}

}  // namespace
}  // namespace causa
