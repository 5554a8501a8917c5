#include "saturation/planner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"

namespace saturation {
namespace {

InterviewSequence seq(std::vector<std::size_t> v) { return InterviewSequence(std::move(v)); }

const std::vector<std::size_t> kEarly{1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
const std::vector<std::size_t> kLate{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
const std::vector<std::size_t> kUniform{1, 0, 1, 0, 0, 1, 1, 0, 1, 0};

TEST(StoppingRule, ParseAndName) {
  EXPECT_EQ(StoppingRule::parse("first_zero"), StoppingRule::first_zero());
  EXPECT_EQ(StoppingRule::parse("consecutive_zero:3"), StoppingRule::consecutive_zero(3));
  EXPECT_EQ(StoppingRule::parse("ten_plus_three"), StoppingRule::ten_plus_three());
  EXPECT_FALSE(StoppingRule::parse("consecutive_zero:0"));
  EXPECT_FALSE(StoppingRule::parse("sometimes"));
  EXPECT_EQ(StoppingRule::consecutive_zero(4).name(), "consecutive_zero:4");
  EXPECT_THROW(StoppingRule::consecutive_zero(0), std::invalid_argument);
}

TEST(ApplyRule, Examples) {
  EXPECT_EQ(apply_rule(seq(kUniform), StoppingRule::first_zero()).stop_seq, 2u);
  EXPECT_EQ(apply_rule(seq(kEarly), StoppingRule::consecutive_zero(3)).stop_seq, 8u);
  for (const auto& rule : {StoppingRule::first_zero(), StoppingRule::consecutive_zero(3), StoppingRule::ten_plus_three()})
    EXPECT_FALSE(apply_rule(seq({1, 1, 1}), rule).stopped());
}

TEST(ApplyRule, TenPlusThreeWaitsForTenInterviews) {
  // Three zeros at 4..6 are too early; the run 9..11 fires at 11.
  std::vector<std::size_t> s{1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1};
  EXPECT_EQ(apply_rule(seq(s), StoppingRule::ten_plus_three()).stop_seq, 11u);
  EXPECT_EQ(apply_rule(seq(s), StoppingRule::consecutive_zero(3)).stop_seq, 6u);
  // A zero run already underway at 10 counts: zeros 8..10 fire at 10.
  std::vector<std::size_t> t{1, 1, 1, 1, 1, 1, 1, 0, 0, 0};
  EXPECT_EQ(apply_rule(seq(t), StoppingRule::ten_plus_three()).stop_seq, 10u);
}

TEST(Type1Assess, UniformScenarioFirstZeroIsTypeOne) {
  auto r = type1_assess(seq(kUniform), StoppingRule::first_zero());
  EXPECT_EQ(r.decision.stop_seq, 2u);
  EXPECT_TRUE(r.is_type1);
  EXPECT_EQ(r.missed_codes, 4u);  // seqs 3, 6, 7, 9
  EXPECT_EQ(r.extra_interviews_needed, 8u);
}

TEST(Type1Assess, NothingAfterStop) {
  auto r = type1_assess(seq({1, 1, 0}), StoppingRule::first_zero());
  EXPECT_EQ(r.decision.stop_seq, 3u);
  EXPECT_FALSE(r.is_type1);
  EXPECT_EQ(r.missed_codes, 0u);
}

TEST(Type1Assess, NotStopped) {
  auto r = type1_assess(seq({1, 1}), StoppingRule::first_zero());
  EXPECT_FALSE(r.decision.stopped());
  EXPECT_FALSE(r.is_type1);
  EXPECT_EQ(r.extra_interviews_needed, 0u);
}

TEST(Type1Assess, GroupedFixtureAcrossSeeds) {
  GroupedCounts groups({{1, 6, 14}, {7, 12, 8}, {13, 18, 5}, {19, 63, 45}});
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto sequence = impute_grouped(groups, Seed{s});
    auto r = type1_assess(sequence, StoppingRule::first_zero());
    ASSERT_TRUE(r.decision.stopped());
    EXPECT_GE(*r.decision.stop_seq, 13u);
    EXPECT_LE(*r.decision.stop_seq, 18u);
    EXPECT_TRUE(r.is_type1);
    EXPECT_GE(r.extra_interviews_needed, 45u);
  }
}

TEST(RuleProperties, OrderingAndMonotoneTypeOne) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    auto bits = oracle::random_pattern(rng, 40, 0.55);
    auto s = seq(std::vector<std::size_t>(bits.begin(), bits.end()));
    EXPECT_EQ(apply_rule(s, StoppingRule::first_zero()).stop_seq,
              apply_rule(s, StoppingRule::consecutive_zero(1)).stop_seq);
    for (std::size_t k = 2; k <= 5; ++k) {
      auto tighter = apply_rule(s, StoppingRule::consecutive_zero(k));
      auto looser = apply_rule(s, StoppingRule::consecutive_zero(k - 1));
      if (tighter.stopped()) {
        ASSERT_TRUE(looser.stopped());
        EXPECT_GE(*tighter.stop_seq, *looser.stop_seq);
      }
      if (type1_assess(s, StoppingRule::consecutive_zero(k)).is_type1) {
        EXPECT_TRUE(type1_assess(s, StoppingRule::first_zero()).is_type1);
      }
    }
    for (const auto& rule : {StoppingRule::first_zero(), StoppingRule::ten_plus_three()}) {
      auto r = type1_assess(s, rule);
      if (r.is_type1) { EXPECT_GE(r.missed_codes, 1u); }
      if (r.decision.stopped()) { EXPECT_LE(*r.decision.stop_seq, s.size()); }
    }
  }
}

TEST(ImputeGrouped, PartialGroupHasOneZero) {
  auto s = impute_grouped(GroupedCounts({{1, 6, 5}}), Seed{1});
  EXPECT_EQ(std::count(s.new_codes().begin(), s.new_codes().end(), 0u), 1);
}

TEST(ImputeGrouped, SurplusGoesToFirstInterview) {
  auto s = impute_grouped(GroupedCounts({{1, 6, 14}}), Seed{1});
  EXPECT_EQ(s.new_codes(), (std::vector<std::size_t>{9, 1, 1, 1, 1, 1}));
}

TEST(ImputeGrouped, EmptyGroupIsAllZeroForAnySeed) {
  for (std::uint64_t s : {0ull, 1ull, 12345ull, ~0ull}) {
    auto out = impute_grouped(GroupedCounts({{1, 6, 0}}), Seed{s});
    EXPECT_EQ(out.new_codes(), std::vector<std::size_t>(6, 0));
  }
}

TEST(ImputeGrouped, Properties) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> width(1, 9), count(0, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Group> groups;
    std::size_t next = 1, total = 0;
    for (int g = 0; g < 1 + trial % 6; ++g) {
      std::size_t w = width(rng), c = count(rng);
      groups.push_back({next, next + w - 1, c});
      next += w;
      total += c;
    }
    GroupedCounts gc(groups);
    const Seed seed{rng()};
    auto a = impute_grouped(gc, seed);
    EXPECT_EQ(a, impute_grouped(gc, seed));
    EXPECT_EQ(a.total_new_codes(), total);
    for (const auto& g : groups) {
      std::size_t zeros = 0;
      for (std::size_t j = g.start_seq; j <= g.end_seq; ++j) zeros += a[j - 1] == 0;
      EXPECT_EQ(zeros, g.codes_count >= g.width() ? 0 : g.width() - g.codes_count);
    }
  }
}

TEST(ImputeGrouped, SeedsProduceDifferentPlacements) {
  GroupedCounts gc({{1, 6, 3}, {7, 12, 2}, {13, 18, 4}});
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t s = 0; s < 40; ++s) seen.insert(impute_grouped(gc, Seed{s}).new_codes());
  EXPECT_GT(seen.size(), 10u);
}

TEST(ScenarioEval, LateScenarioNeedsNothing) {
  std::vector<ProjectionMethod> methods{ProjectionMethod::extrapolation(), ProjectionMethod::rule_completion(3)};
  auto row = scenario_eval(kLate, {}, methods);
  EXPECT_EQ(row.km_final, 0.0);
  EXPECT_FALSE(row.ci_low);
  for (const auto& p : row.projections) EXPECT_EQ(p.additional_interviews, 0u);
}

TEST(ScenarioEval, EarlyScenario) {
  std::vector<ProjectionMethod> methods{ProjectionMethod::extrapolation(), ProjectionMethod::rule_completion(3)};
  auto row = scenario_eval(kEarly, {}, methods);
  EXPECT_NEAR(row.km_final, 0.5, 1e-15);
  // ceil(70.36...) - 10
  EXPECT_EQ(row.projections[0].additional_interviews, 61u);
  // Already ends with five zeros.
  EXPECT_EQ(row.projections[1].additional_interviews, 0u);
}

TEST(ScenarioEval, UniformScenarioHasNoExtrapolation) {
  std::vector<ProjectionMethod> methods{ProjectionMethod::extrapolation(), ProjectionMethod::rule_completion(3)};
  auto row = scenario_eval(kUniform, {}, methods);
  EXPECT_NEAR(row.km_final, 0.23625, 1e-15);
  EXPECT_FALSE(row.projections[0].additional_interviews);
  EXPECT_EQ(row.projections[1].additional_interviews, 2u);
}

TEST(ScenarioEval, RuleCompletionCountsMissingZeros) {
  std::vector<ProjectionMethod> methods{ProjectionMethod::rule_completion(3)};
  // (1,1,1) ends in an event, so S(J) = 0 and nothing more is needed.
  EXPECT_EQ(scenario_eval(std::vector<std::size_t>{1, 1, 1}, {}, methods).projections[0].additional_interviews, 0u);
  // With S(J) > 0 and no trailing zeros the full run is still required.
  EXPECT_EQ(scenario_eval(std::vector<std::size_t>{0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0}, {}, methods)
                .projections[0]
                .additional_interviews,
            1u);
}

TEST(ScenarioEval, RejectsNonBinary) {
  std::vector<ProjectionMethod> methods{ProjectionMethod::extrapolation()};
  EXPECT_THROW(scenario_eval(std::vector<std::size_t>{1, 2}, {}, methods), std::invalid_argument);
}

TEST(ScenarioEval, KmFinalIsTheSurvivalModuleValue) {
  std::mt19937_64 rng(8);
  std::vector<ProjectionMethod> methods{ProjectionMethod::extrapolation(), ProjectionMethod::rule_completion(2)};
  for (int trial = 0; trial < 300; ++trial) {
    auto bits = oracle::random_pattern(rng, 30);
    std::vector<std::size_t> p(bits.begin(), bits.end());
    auto row = scenario_eval(p, {}, methods);
    auto curve = km_estimate(InterviewSequence(p));
    EXPECT_EQ(row.km_final, curve.final_point().survival);
    EXPECT_EQ(row.ci_low, curve.final_point().ci_low);
    EXPECT_EQ(row.ci_high, curve.final_point().ci_high);
  }
}

TEST(ProjectionMethod, Parse) {
  EXPECT_EQ(ProjectionMethod::parse("extrapolation"), ProjectionMethod::extrapolation());
  EXPECT_EQ(ProjectionMethod::parse("rule_completion:3"), ProjectionMethod::rule_completion(3));
  EXPECT_FALSE(ProjectionMethod::parse("rule_completion:"));
  EXPECT_EQ(ProjectionMethod::rule_completion(5).name(), "rule_completion:5");
}

TEST(Presets, PublishedRanges) {
  auto p = presets();
  auto find = [&](const std::string& name) {
    return *std::find_if(p.begin(), p.end(), [&](const Preset& x) { return x.methodology == name; });
  };
  EXPECT_EQ(find("grounded_theory").min_interviews, 30u);
  EXPECT_EQ(find("grounded_theory").max_interviews, 50u);
  EXPECT_EQ(find("phenomenology").min_interviews, 5u);
  EXPECT_EQ(find("phenomenology").max_interviews, 25u);
  EXPECT_EQ(find("all_qualitative").min_interviews, 15u);
  EXPECT_FALSE(find("all_qualitative").max_interviews);
  EXPECT_EQ(find("ethnography").max_interviews, 60u);
  EXPECT_EQ(find("funded_research").max_interviews, 95u);
}

}  // namespace
}  // namespace saturation
