// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "lfp/audit.hpp"
#include "lfp/counterexamples.hpp"
#include "lfp/oracles.hpp"

namespace lfp {
namespace {

bool has_mismatch(const ScenarioOutcome& o) {
  for (const auto& f : o.findings) {
    if (f.rfind("MISMATCH", 0) == 0) return true;
  }
  return false;
}

TEST(Counterexample, NaiveParallelStuckAtZeroZero) {
  const auto o = run_counterexample(Scenario::kNaiveParallel);
  EXPECT_EQ(o.verdict, Verdict::kMatchesPaper);
  EXPECT_EQ(o.trace.terminal(), StateVector::scalars({0, 0}));
  EXPECT_FALSE(is_common_fixed_point(o.trace.terminal(), two_bit_family()));
}

TEST(Counterexample, UnboundedStalenessStuckAtOneZeroZero) {
  const auto o = run_counterexample(Scenario::kUnboundedStaleness);
  EXPECT_EQ(o.verdict, Verdict::kMatchesPaper);
  EXPECT_EQ(o.trace.terminal(), StateVector::scalars({1, 0, 0}));
  const auto fam = three_bit_chain_family();
  EXPECT_EQ(apply_function(fam.functions[1], o.trace.terminal()).state, StateVector::scalars({1, 1, 0}));
}

TEST(Counterexample, NonmonotoneOvershoots) {
  const auto o = run_counterexample(Scenario::kNonmonotone);
  EXPECT_EQ(o.verdict, Verdict::kMatchesPaper);
  EXPECT_EQ(o.trace.terminal(), StateVector::scalars({2}));
  EXPECT_EQ(minimal_fixed_points_scan(nonmonotone_family()), std::vector{StateVector::scalars({1})});
}

TEST(Counterexample, UnfairStopsShort) {
  const auto o = run_counterexample(Scenario::kUnfair);
  EXPECT_EQ(o.verdict, Verdict::kMatchesPaper);
  EXPECT_EQ(o.trace.status, TerminalStatus::kStuckNonFixpoint);
  EXPECT_EQ(o.trace.terminal(), StateVector::scalars({1, 0}));
}

TEST(Counterexample, NonbottomStartMissesTheLeastFixedPoint) {
  const auto o = run_counterexample(Scenario::kNonbottomStart);
  EXPECT_EQ(o.verdict, Verdict::kMatchesPaper);
  EXPECT_EQ(o.trace.terminal(), StateVector::scalars({2}));
}

TEST(Counterexample, NoninflationaryOscillates) {
  const auto o = run_counterexample(Scenario::kNoninflationary);
  EXPECT_EQ(o.verdict, Verdict::kMatchesPaper);
  EXPECT_EQ(o.trace.status, TerminalStatus::kStepLimit);
  EXPECT_GT(o.trace.states.size(), 2u);
  EXPECT_FALSE(check_ascent(o.trace, noninflationary_family().bounds).passed);
}

TEST(Counterexample, InfiniteLatticeHitsTheCutoff) {
  const auto o = run_counterexample(Scenario::kInfiniteLattice);
  EXPECT_EQ(o.verdict, Verdict::kMatchesPaper);
  EXPECT_EQ(o.trace.status, TerminalStatus::kStepLimit);
}

TEST(Counterexample, EveryScenarioMatchesAndItsTwinConverges) {
  const auto all = all_scenarios();
  EXPECT_EQ(all.size(), 7u);
  for (auto s : all) {
    const auto o = run_counterexample(s);
    EXPECT_EQ(o.scenario, s);
    EXPECT_EQ(o.verdict, Verdict::kMatchesPaper) << to_string(s);
    EXPECT_FALSE(o.findings.empty());
    EXPECT_FALSE(has_mismatch(o)) << to_string(s);
    const auto twin = run_repaired_twin(s);
    EXPECT_TRUE(twin.converged_to_oracle) << to_string(s);
    EXPECT_EQ(twin.trace.status, TerminalStatus::kConverged) << to_string(s);
    EXPECT_EQ(twin.trace.terminal(), twin.oracle) << to_string(s);
    EXPECT_FALSE(twin.description.empty());
  }
}

TEST(Counterexample, NamesRoundTrip) {
  for (auto s : all_scenarios()) EXPECT_EQ(scenario_from_name(to_string(s)), s);
  EXPECT_THROW(scenario_from_name("bogus"), std::invalid_argument);
  EXPECT_STREQ(to_string(Verdict::kMatchesPaper), "MATCHES_PAPER");
}

TEST(Counterexample, BrokenFamiliesFailTheirAudit) {
  EXPECT_FALSE(audit_family(nonmonotone_family(), 100, 1).clean());
  EXPECT_FALSE(audit_family(noninflationary_family(), 100, 1).clean());
  EXPECT_TRUE(audit_family(two_bit_family(), 100, 1).clean());
  EXPECT_TRUE(audit_family(three_bit_chain_family(), 100, 1).clean());
  EXPECT_TRUE(audit_family(floor_one_family(0), 100, 1).clean());
}

}  // namespace
}  // namespace lfp
