#include <gtest/gtest.h>

#include "rrgqa/semantics.hpp"

using namespace rrgqa;

namespace {

const Lexicon& lex() {
  static const Lexicon l = load_lexicon_dir(std::string(RRGQA_DATA_DIR) + "/lexicon");
  return l;
}

Referent person(const std::string& name, AttrSet extra = {}) {
  extra.insert("proper");
  extra.insert("person");
  return Referent::entity("r:" + name, extra, name);
}

Referent thing(const std::string& name) { return Referent::entity("r:" + name, {"definite"}, name); }

Referent room(const std::string& name) { return Referent::entity("r:" + name, {"definite", "enclosure", "location"}, name); }

}  // namespace

TEST(Referent, Rendering) {
  EXPECT_EQ(person("mary").render(), "mary");
  EXPECT_EQ(thing("milk").render(), "the milk");
  EXPECT_EQ(Referent::bundle({person("mary"), person("jeff")}).render(), "mary and jeff");
  EXPECT_EQ(Referent::query(Focus::who).render(), "who");
  EXPECT_EQ(Referent::unspecified().render(), "0");
}

TEST(Referent, BundleKeyIgnoresOrder) {
  auto a = Referent::bundle({person("mary"), person("jeff")});
  auto b = Referent::bundle({person("jeff"), person("mary")});
  EXPECT_EQ(a.key(), b.key());
  EXPECT_TRUE(a.contains_entity("r:jeff"));
  EXPECT_FALSE(a.contains_entity("r:bill"));
}

TEST(Referent, BundleNeedsTwoEntities) {
  EXPECT_THROW(Referent::bundle({person("mary")}), SemanticsError);
  EXPECT_THROW(Referent::bundle({person("mary"), Referent::query(Focus::who)}), SemanticsError);
}

TEST(Builders, ActiveAchievement) {
  auto ls = build_active_achievement(person("mary"), Pred("p:go"), room("kitchen"), &lex());
  EXPECT_EQ(render(ls), "do'(mary,[go'(mary)]) & INGR be-in'(the kitchen,mary)");
  auto beach = Referent::entity("r:beach", {"definite", "locale", "location"}, "beach");
  EXPECT_EQ(render(build_active_achievement(person("bill"), Pred("p:travel"), beach, &lex())),
            "do'(bill,[travel'(bill)]) & INGR be-at'(the beach,bill)");
}

TEST(Builders, ActiveAchievementRejects) {
  EXPECT_THROW(build_active_achievement(person("mary"), Pred("p:give"), room("kitchen"), &lex()), SemanticsError);
  auto flat = Referent::entity("r:thing", {"definite"}, "thing");
  try {
    build_active_achievement(person("mary"), Pred("p:go"), flat);
    FAIL();
  } catch (const SemanticsError& e) {
    EXPECT_EQ(e.kind(), "dimensionality");
  }
}

TEST(Builders, TransferShapes) {
  auto give = build_transfer(person("bill"), thing("milk"), person("mary"), true, Direction::to);
  EXPECT_EQ(render(give),
            "[do'(bill,0)] CAUSE [BECOME NOT have'(bill,the milk) ∧ BECOME have'(mary,the milk)]");
  auto drop = build_transfer(person("bill"), thing("milk"), std::nullopt, true, Direction::to);
  EXPECT_EQ(render(drop), "[do'(bill,0)] CAUSE [BECOME NOT have'(bill,the milk)]");
  auto receive = build_transfer(person("mary"), thing("milk"), person("bill"), false, Direction::from);
  EXPECT_EQ(render(receive), "BECOME have'(mary,the milk) ∧ BECOME NOT have'(bill,the milk)");
  EXPECT_THROW(build_transfer(Referent::unspecified(), thing("milk"), std::nullopt, true, Direction::to),
               SemanticsError);
}

TEST(Operators, ParseAndRender) {
  auto ops = parse_operators("future, negative,passive perfect progressive");
  EXPECT_EQ(ops.tense, Tense::future);
  EXPECT_TRUE(ops.perfect && ops.progressive && ops.negative());
  EXPECT_EQ(ops.voice, Voice::passive);
  EXPECT_EQ(ops.render(), "future,perfect,progressive,passive,negative");
  EXPECT_EQ(parse_operators("1pl").person, 1);
  EXPECT_EQ(parse_operators("1pl").number, Number::plural);
  EXPECT_EQ(parse_operators("").render(), "present");
  EXPECT_THROW(parse_operators("pluperfect"), Error);
}

TEST(Traversal, VisitStatesTracksNegationAndChange) {
  auto give = build_transfer(person("bill"), thing("milk"), person("mary"), true, Direction::to);
  std::vector<std::tuple<std::string, bool, bool>> seen;
  visit_states(*give, [&](const State& s, bool neg, bool changed) {
    seen.emplace_back(std::get<Referent>(s.first).head, neg, changed);
  });
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], std::make_tuple(std::string("bill"), true, true));
  EXPECT_EQ(seen[1], std::make_tuple(std::string("mary"), false, true));
}

TEST(Traversal, MapReferentsRewritesEverySlot) {
  auto ls = build_active_achievement(person("mary"), Pred("p:go"), room("kitchen"), &lex());
  auto out = map_referents(ls, [](const Referent& r) {
    return r.sense == "r:mary" ? Referent::entity("r:sandra", r.attrs, "sandra") : r;
  });
  EXPECT_EQ(render(out), "do'(sandra,[go'(sandra)]) & INGR be-in'(the kitchen,sandra)");
  EXPECT_EQ(render(ls), "do'(mary,[go'(mary)]) & INGR be-in'(the kitchen,mary)");
  std::vector<std::string> refs;
  visit_referents(*out, [&](const Referent& r) { refs.push_back(r.head); });
  EXPECT_EQ(refs, (std::vector<std::string>{"sandra", "kitchen", "sandra"}));
}

TEST(Unify, WhereQueryBindsLocation) {
  auto item = build_active_achievement(person("mary"), Pred("p:go"), room("kitchen"), &lex());
  auto q = build_state(Pred("p:be-LOC"), Referent::query(Focus::where), person("mary"));
  auto m = unify(q, item, &lex());
  ASSERT_TRUE(m);
  EXPECT_EQ(m->bindings.at(Focus::where).head, "kitchen");
  auto other = build_state(Pred("p:be-LOC"), Referent::query(Focus::where), person("john"));
  EXPECT_FALSE(unify(other, item, &lex()));
}

TEST(Unify, BundleSatisfiesMember) {
  auto item = build_active_achievement(Referent::bundle({person("mary"), person("jeff")}), Pred("p:go"),
                                       room("garden"), &lex());
  auto q = build_state(Pred("p:be-LOC"), Referent::query(Focus::where), person("jeff"));
  ASSERT_TRUE(unify(q, item, &lex()));
}

TEST(Unify, NegatedStateIsNotAPositiveMatch) {
  auto item = wrap(WrapOp::negation, build_state(Pred("p:be-in"), room("kitchen"), person("mary")));
  auto q = build_state(Pred("p:be-LOC"), Referent::query(Focus::where), person("mary"));
  EXPECT_FALSE(unify(q, item, &lex()));
  EXPECT_TRUE(unify(item, item, &lex()));
}

TEST(Unify, EntailedPredicateMatches) {
  auto item = build_transfer(person("bill"), thing("milk"), person("mary"), true, Direction::to);
  // hand'/pass' share the have' structure, so the question about giving
  // matches any transfer; the who slot binds to the causer.
  auto q = build_transfer(Referent::query(Focus::who), thing("milk"), person("mary"), true, Direction::to);
  auto m = unify(q, item, &lex());
  ASSERT_TRUE(m);
  EXPECT_EQ(m->bindings.at(Focus::who).head, "bill");
}

TEST(Unify, CauseSideMatchesSubsetOfEffects) {
  auto item = build_transfer(person("bill"), thing("milk"), person("mary"), true, Direction::to);
  auto q = build_transfer(Referent::query(Focus::who), thing("milk"), std::nullopt, true, Direction::to);
  auto m = unify(q, item, &lex());
  ASSERT_TRUE(m);
  EXPECT_EQ(m->bindings.at(Focus::who).head, "bill");
}

TEST(Unify, RepeatedSlotsBindConsistently) {
  // who gave the milk to who: both slots are the same query, so they must
  // bind to the same referent; bill and mary differ.
  auto item = build_transfer(person("bill"), thing("milk"), person("mary"), true, Direction::to);
  auto q = build_transfer(Referent::query(Focus::who), thing("milk"), Referent::query(Focus::who), true,
                          Direction::to);
  EXPECT_FALSE(unify(q, item, &lex()));
}

TEST(Unify, BecomeAndIngrAreInterchangeable) {
  auto item = wrap(WrapOp::ingr, build_state(Pred("p:be-in"), room("kitchen"), person("mary")));
  auto q = wrap(WrapOp::become, build_state(Pred("p:be-LOC"), Referent::query(Focus::where), person("mary")));
  EXPECT_TRUE(unify(q, item, &lex()));
}
