#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "semitop/checker.hpp"

namespace semitop {
namespace {

Model voting_model(TV vote, std::vector<TV> observe) {
  Model m({"u"}, {"p0", "p1", "p2", "p3"}, Semitopology::from_threshold(4, 3));
  m.declare("vote");
  m.declare("observe");
  for (std::size_t p = 0; p < 4; ++p) {
    m.set("vote", p, 0, vote);
    m.set("observe", p, 0, observe[p]);
  }
  return m;
}

const Verdict &verdict_named(const std::vector<Verdict> &vs, const std::string &name) {
  for (const Verdict &v : vs)
    if (v.name == name) return v;
  throw std::logic_error("no verdict named " + name);
}

TEST(CheckTheory, UnanimousVotingModelPassesEverything) {
  Model m = voting_model(TV::T, {TV::T, TV::T, TV::T, TV::T});
  Report r = check_theory(m, theory("ThyVote"));
  EXPECT_TRUE(r.overall);
  EXPECT_EQ(r.model_digest, model_digest(m));
  ASSERT_EQ(r.axioms.size(), 5u);
  for (const Verdict &v : r.axioms) EXPECT_TRUE(v.valid) << v.name;
  ASSERT_EQ(r.structural.size(), 1u);
  EXPECT_TRUE(r.structural[0].holds);
  EXPECT_EQ(r.structural[0].twined, 3u);
}

TEST(CheckTheory, DissentingObserverFailsTheReverseObservationRules) {
  // vote stays unanimously T, so no quorum of !vote exists and the lone
  // observe=F point falsifies both ObserveNot? and Observe!.
  Model m = voting_model(TV::T, {TV::T, TV::T, TV::T, TV::F});
  Report r = check_theory(m, theory("ThyVote"));
  EXPECT_FALSE(r.overall);
  EXPECT_TRUE(verdict_named(r.axioms, "Observe?").valid);
  EXPECT_FALSE(verdict_named(r.axioms, "ObserveNot?").valid);
  EXPECT_FALSE(verdict_named(r.axioms, "Observe!").valid);
  EXPECT_TRUE(verdict_named(r.axioms, "ObserveNot!").valid);
  EXPECT_TRUE(verdict_named(r.axioms, "Correct").valid);
  const Verdict &bad = verdict_named(r.axioms, "ObserveNot?");
  ASSERT_EQ(bad.instances.size(), 1u);
  EXPECT_EQ(bad.instances[0].per_point[3], TV::F);
}

TEST(CheckTheory, PairThresholdFailsStructuralRule) {
  Model m({"u"}, {"p0", "p1", "p2", "p3"}, Semitopology::from_threshold(4, 2));
  m.declare("vote", TV::T);
  m.declare("observe", TV::T);
  Report r = check_theory(m, theory("ThyVote"));
  EXPECT_FALSE(r.overall);
  ASSERT_EQ(r.structural.size(), 1u);
  EXPECT_FALSE(r.structural[0].holds);
}

TEST(CheckTheory, RejectsMismatchedModels) {
  Model wrong_values({"x"}, {"p0"}, Semitopology(1, {{0}}));
  wrong_values.declare("vote");
  wrong_values.declare("observe");
  EXPECT_THROW(check_theory(wrong_values, theory("ThyVote")), std::invalid_argument);

  Model missing_pred({"u"}, {"p0"}, Semitopology(1, {{0}}));
  missing_pred.declare("vote");
  try {
    check_theory(missing_pred, theory("ThyVote"));
    FAIL() << "expected a missing-predicate error";
  } catch (const std::invalid_argument &e) {
    EXPECT_NE(std::string(e.what()).find("observe"), std::string::npos);
  }
}

TEST(Properties, AgreementMustBeInvalidPassesOnUnanimousModel) {
  Model m = voting_model(TV::T, {TV::T, TV::T, TV::T, TV::T});
  Report r = check_properties(m, properties("ThyVote"));
  EXPECT_TRUE(r.overall);
  ASSERT_EQ(r.properties.size(), 1u);
  const Verdict &agreement = r.properties[0];
  EXPECT_EQ(agreement.name, "Agreement");
  EXPECT_EQ(agreement.polarity, Polarity::MustBeInvalid);
  EXPECT_TRUE(agreement.valid);
  ASSERT_EQ(agreement.instances.size(), 1u);
  EXPECT_FALSE(agreement.instances[0].valid);
  for (TV tv : agreement.instances[0].per_point) EXPECT_EQ(tv, TV::F);
}

TEST(Enumerate, CountsCellsAndStreamsLexicographically) {
  Semitopology space = Semitopology::from_threshold(4, 3);
  std::uint64_t n =
      enumerate_models(space, {"u"}, {"vote", "observe"}, nullptr, 10'000,
                       [](const Model &) { return true; });
  EXPECT_EQ(n, 6561u);

  std::vector<Model> first;
  enumerate_models(space, {"u"}, {"vote", "observe"}, nullptr, 10'000, [&](const Model &m) {
    first.push_back(m);
    return first.size() < 2;
  });
  ASSERT_EQ(first.size(), 2u);
  for (std::size_t p = 0; p < 4; ++p) {
    EXPECT_EQ(first[0].at("vote", p, 0), TV::F);
    EXPECT_EQ(first[0].at("observe", p, 0), TV::F);
  }
  // Predicates stream in sorted order, so the final base-3 digit is vote@p3.
  EXPECT_EQ(first[1].at("vote", 3, 0), TV::B);
  EXPECT_EQ(first[1].at("vote", 2, 0), TV::F);
  EXPECT_EQ(first[1].at("observe", 3, 0), TV::F);

  std::vector<std::string> digests_a, digests_b;
  auto take5 = [](std::vector<std::string> &out) {
    return [&out](const Model &m) {
      out.push_back(model_digest(m));
      return out.size() < 5;
    };
  };
  enumerate_models(space, {"u"}, {"vote", "observe"}, nullptr, 10'000, take5(digests_a));
  enumerate_models(space, {"u"}, {"vote", "observe"}, nullptr, 10'000, take5(digests_b));
  EXPECT_EQ(digests_a, digests_b);
}

TEST(Enumerate, FilterAdmitsTheUnanimousModel) {
  Theory vote = theory("ThyVote");
  const std::string unanimous =
      model_digest(voting_model(TV::T, {TV::T, TV::T, TV::T, TV::T}));
  bool seen = false;
  std::uint64_t of_theory = enumerate_models(
      Semitopology::from_threshold(4, 3), {"u"}, vote.predicates, &vote, 10'000,
      [&](const Model &m) {
        if (model_digest(m) == unanimous) seen = true;
        EXPECT_TRUE(is_model_of(m, vote));
        return true;
      });
  EXPECT_TRUE(seen);
  EXPECT_GT(of_theory, 0u);
  EXPECT_LT(of_theory, 6561u);
}

TEST(Enumerate, CapExceededNamesRequiredAndAllowedSizes) {
  try {
    enumerate_models(Semitopology::from_threshold(4, 3), {"u"}, {"vote", "observe"},
                     nullptr, 100, [](const Model &) { return true; });
    FAIL() << "expected a cap error";
  } catch (const std::invalid_argument &e) {
    std::string what = e.what();
    EXPECT_NE(what.find("6561"), std::string::npos) << what;
    EXPECT_NE(what.find("100"), std::string::npos) << what;
  }
  EXPECT_THROW(enumerate_models(Semitopology(1, {{0}}), {}, {"p"}, nullptr, 100,
                                [](const Model &) { return true; }),
               std::invalid_argument);
  EXPECT_THROW(enumerate_models(Semitopology(1, {{0}}), {"u"}, {}, nullptr, 100,
                                [](const Model &) { return true; }),
               std::invalid_argument);
}

TEST(Entailment, VotingTheoryEntailsAgreementAndItsLemmas) {
  Semitopology space = Semitopology::from_threshold(4, 3);
  EntailmentVerdict agreement =
      verify_entailment(space, {"u"}, theory("ThyVote"), properties("ThyVote"), 10'000);
  EXPECT_TRUE(agreement.passes);
  EXPECT_FALSE(agreement.vacuous);
  EXPECT_GT(agreement.models_of_theory, 0u);

  EntailmentVerdict lemmas =
      verify_entailment(space, {"u"}, theory("ThyVote"), derived_lemmas("ThyVote"), 10'000);
  EXPECT_TRUE(lemmas.passes);
  EXPECT_EQ(lemmas.models_of_theory, agreement.models_of_theory);
}

TEST(Entailment, DroppingCorrectAdmitsAnAgreementCountermodel) {
  Theory reduced = theory("ThyVote");
  reduced.axioms.erase(std::remove_if(reduced.axioms.begin(), reduced.axioms.end(),
                                      [](const AxiomSchema &a) { return a.name == "Correct"; }),
                       reduced.axioms.end());
  ASSERT_EQ(reduced.axioms.size(), 5u);

  Semitopology space = Semitopology::from_threshold(4, 3);
  EntailmentVerdict v =
      verify_entailment(space, {"u"}, reduced, properties("ThyVote"), 10'000);
  EXPECT_FALSE(v.passes);
  EXPECT_FALSE(v.vacuous);
  EXPECT_EQ(v.violated, "Agreement");
  ASSERT_TRUE(v.countermodel.has_value());
  EXPECT_TRUE(is_model_of(*v.countermodel, reduced));
  EXPECT_TRUE(violates_properties(*v.countermodel, properties("ThyVote")));

  // All-B voters let two points observe opposite outcomes outright.
  Model m = voting_model(TV::B, {TV::T, TV::F, TV::F, TV::F});
  EXPECT_TRUE(is_model_of(m, reduced));
  EXPECT_FALSE(is_model_of(m, theory("ThyVote")));
  EXPECT_FALSE(check_properties(m, properties("ThyVote")).overall);

  // Removing an axiom never shrinks the set of models of the theory.
  Theory full = theory("ThyVote");
  auto count = [&](const Theory &t) {
    return enumerate_models(space, {"u"}, t.predicates, &t, 10'000,
                            [](const Model &) { return true; });
  };
  EXPECT_GE(count(reduced), count(full));
}

TEST(Search, WeakenedReadyRuleAdmitsTheReviewedCountermodel) {
  // Honest everyone, one broadcaster of u, yet every point claims ready and
  // deliver for both values: the quorum-or-contraquorum ready rule accepts
  // the self-supporting w column that the original rule rejects.
  Model m = load_model_file(std::string(SEMITOP_FIXTURES) + "/bracha_weak_ready_counter.json");
  Theory weak = load_theory_file(std::string(SEMITOP_FIXTURES) + "/bracha_weak_ready.theory");
  EXPECT_TRUE(check_theory(m, weak).overall);
  EXPECT_FALSE(check_theory(m, theory("ThyBB")).overall);
  Report props = check_properties(m, properties("ThyBB"));
  EXPECT_FALSE(props.overall);
  EXPECT_TRUE(verdict_named(props.properties, "BrValidity").valid);
  EXPECT_FALSE(verdict_named(props.properties, "BrNoDup").valid);
  EXPECT_FALSE(verdict_named(props.properties, "BrIntegrity").valid);
  EXPECT_FALSE(verdict_named(props.properties, "BrConsistency").valid);
  EXPECT_TRUE(verdict_named(props.properties, "BrTotality").valid);
}

TEST(Search, ExhaustiveSweepsOfTinySpacesFindNoBrachaCounterexample) {
  Theory bb = theory("ThyBB");
  SearchConfig cfg;
  cfg.mode = SearchMode::Exhaustive;
  cfg.cap = 10'000;
  cfg.space = Semitopology::from_threshold(1, 1);
  cfg.values = {"u", "w"};
  EXPECT_FALSE(search_counterexample(bb, properties("ThyBB"), cfg).has_value());
  cfg.space = Semitopology::from_threshold(2, 2);
  cfg.values = {"u"};
  EXPECT_FALSE(search_counterexample(bb, properties("ThyBB"), cfg).has_value());
}

TEST(Search, GuidedDrawsAreReproducibleFromTheSeed) {
  Theory reduced = theory("ThyVote");
  reduced.axioms.erase(std::remove_if(reduced.axioms.begin(), reduced.axioms.end(),
                                      [](const AxiomSchema &a) { return a.name == "Correct"; }),
                       reduced.axioms.end());
  // All-B voters with arbitrary two-valued observations satisfy the reduced
  // theory, so the generator only has to vary the observation column.
  ModelGenerator gen = [](std::mt19937_64 &rng) {
    Model m({"u"}, {"p0", "p1", "p2", "p3"}, Semitopology::from_threshold(4, 3));
    m.declare("vote", TV::B);
    m.declare("observe");
    for (std::size_t p = 0; p < 4; ++p)
      m.set("observe", p, 0, rng() % 2 ? TV::T : TV::F);
    return m;
  };
  SearchConfig cfg;
  cfg.mode = SearchMode::Guided;
  cfg.seed = 5;
  cfg.budget = 100;
  std::optional<Model> a = search_counterexample(reduced, properties("ThyVote"), cfg, {gen});
  std::optional<Model> b = search_counterexample(reduced, properties("ThyVote"), cfg, {gen});
  ASSERT_TRUE(a.has_value());
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(model_to_text(*a), model_to_text(*b));
  EXPECT_TRUE(is_model_of(*a, reduced));
  EXPECT_TRUE(violates_properties(*a, properties("ThyVote")));

  EXPECT_THROW(search_counterexample(reduced, properties("ThyVote"), cfg, {}),
               std::invalid_argument);
  cfg.mode = SearchMode::Exhaustive;
  cfg.space.reset();
  EXPECT_THROW(search_counterexample(reduced, properties("ThyVote"), cfg),
               std::invalid_argument);
}

TEST(Report, SerializationIsDeterministicAcrossModelRoundTrips) {
  Model m = voting_model(TV::T, {TV::T, TV::T, TV::T, TV::F});
  Model again = model_from_text(model_to_text(m));
  Report r1 = check_theory(m, theory("ThyVote"));
  Report r2 = check_theory(again, theory("ThyVote"));
  EXPECT_EQ(report_to_text(r1), report_to_text(r2));

  nlohmann::ordered_json j = report_to_json(r1);
  auto it = j.begin();
  EXPECT_EQ(it.key(), "model");
  EXPECT_EQ((++it).key(), "axioms");
  EXPECT_EQ(j["summary"]["axioms_total"], 5);
  EXPECT_EQ(j["summary"]["overall"], false);
  EXPECT_EQ(j["axioms"][0]["instances"][0]["per_point"][0], "T");
}

TEST(Report, VerdictsSurviveIndependentReEvaluation) {
  std::vector<Report> reports;
  Model dissent = voting_model(TV::T, {TV::T, TV::T, TV::T, TV::F});
  Model mixed = voting_model(TV::B, {TV::T, TV::F, TV::B, TV::T});
  for (const Model *m : {&dissent, &mixed}) {
    reports.push_back(check_theory(*m, theory("ThyVote")));
    reports.push_back(check_properties(*m, properties("ThyVote")));
    const Report &theory_report = reports[reports.size() - 2];
    const Report &props_report = reports.back();
    auto recheck = [&](const Verdict &v) {
      bool all_pass = true;
      for (const InstanceVerdict &iv : v.instances) {
        Formula f = parse(iv.formula);
        bool inst_valid = true;
        for (std::size_t p = 0; p < m->points().size(); ++p) {
          TV tv = denote(*m, f, p);
          EXPECT_EQ(tv, iv.per_point[p]) << v.name << " at point " << p;
          if (!is_valid(tv)) inst_valid = false;
        }
        EXPECT_EQ(inst_valid, iv.valid) << v.name;
        if ((v.polarity == Polarity::MustBeValid) != inst_valid) all_pass = false;
      }
      EXPECT_EQ(all_pass, v.valid) << v.name;
    };
    for (const Verdict &v : theory_report.axioms) recheck(v);
    for (const Verdict &v : props_report.properties) recheck(v);
  }
}

} // namespace
} // namespace semitop
