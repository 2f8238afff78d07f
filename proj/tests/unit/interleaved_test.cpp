// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "generators.hpp"
#include "lfp/counterexamples.hpp"
#include "lfp/interleaved.hpp"
#include "lfp/oracles.hpp"
#include "lfp/problems.hpp"

namespace lfp {
namespace {

TEST(Interleaved, TwoBitRoundRobinReachesTop) {
  const auto t = run_interleaved(two_bit_family(), FairSchedule::round_robin());
  EXPECT_EQ(t.status, TerminalStatus::kConverged);
  EXPECT_EQ(t.terminal(), StateVector::scalars({1, 1}));
  EXPECT_EQ(minimal_fixed_points_scan(two_bit_family()), std::vector{StateVector::scalars({1, 1})});
}

TEST(Interleaved, ClosureOfTwoEdgePath) {
  const Digraph g{3, {{0, 1, 1}, {1, 2, 1}}};
  const auto t = run_interleaved(transitive_closure_family(g), FairSchedule::round_robin());
  ASSERT_EQ(t.status, TerminalStatus::kConverged);
  const auto r = decode_closure(t.terminal(), 3);
  EXPECT_TRUE(r[0][2]);
  EXPECT_EQ(r, warshall_closure(g));
}

TEST(Interleaved, ZeroFunctionsConvergeImmediately) {
  FunctionFamily fam;
  fam.bounds = Bounds::uniform(2, {{"b", 1, Orientation::kAscending}});
  fam.initial = StateVector::scalars({0, 1});
  const auto t = run_interleaved(fam, FairSchedule::round_robin());
  EXPECT_EQ(t.status, TerminalStatus::kConverged);
  EXPECT_EQ(t.terminal(), fam.initial);
  EXPECT_EQ(t.time_units, 0u);
}

TEST(Interleaved, RecordsReadsAndWrites) {
  const auto t = run_interleaved(two_bit_family(), FairSchedule::round_robin());
  std::size_t reads = 0, writes = 0;
  for (const auto& e : t.events) {
    reads += e.kind == EventKind::kRead;
    writes += e.kind == EventKind::kWrite;
  }
  // Quiet steps still write back their unchanged value.
  EXPECT_EQ(writes, t.time_units);
  EXPECT_EQ(t.states.size(), 3u);
  EXPECT_GT(reads, 0u);
  const auto quiet = run_interleaved(two_bit_family(), FairSchedule::round_robin(), {false, false});
  for (const auto& e : quiet.events) EXPECT_NE(e.kind, EventKind::kRead);
}

TEST(UnfairSchedule, FirstFunctionOnlyStuckAtOneZero) {
  const auto t = run_with_unfair_schedule(two_bit_family(), 0, 50);
  EXPECT_EQ(t.status, TerminalStatus::kStuckNonFixpoint);
  EXPECT_EQ(t.terminal(), StateVector::scalars({1, 0}));
}

TEST(UnfairSchedule, SecondFunctionOnlyStuckAtZeroOne) {
  const auto t = run_with_unfair_schedule(two_bit_family(), 1, 50);
  EXPECT_EQ(t.status, TerminalStatus::kStuckNonFixpoint);
  EXPECT_EQ(t.terminal(), StateVector::scalars({0, 1}));
}

TEST(UnfairSchedule, SingleFunctionFamilyConverges) {
  const auto t = run_with_unfair_schedule(counter_family(5), 0, 50);
  EXPECT_EQ(t.status, TerminalStatus::kConverged);
  EXPECT_EQ(t.terminal(), StateVector::scalars({5}));
}

TEST(UnfairSchedule, StepLimitWhenNeverQuiet) {
  const auto t = run_with_unfair_schedule(counter_family(100), 0, 10);
  EXPECT_EQ(t.status, TerminalStatus::kStepLimit);
  EXPECT_EQ(t.terminal(), StateVector::scalars({10}));
}

TEST(Interleaved, DefaultStepLimit) {
  EXPECT_EQ(default_step_limit(two_bit_family()), 4u * 2 * 2);
}

TEST(Interleaved, SeededWindowForcesEveryIndex) {
  const auto fam = transitive_closure_family(lfp::testing::path_graph(4));
  const std::size_t m = fam.function_count();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    FairSchedule s = FairSchedule::seeded_random(seed, m);
    const auto t = run_interleaved(fam, s);
    ASSERT_EQ(t.status, TerminalStatus::kConverged);
    std::vector<std::size_t> last(m, 0);
    for (std::size_t step = 0; step < t.selected.size(); ++step) {
      for (auto i : t.selected[step]) last[i] = step + 1;
      for (std::size_t i = 0; i < m; ++i) EXPECT_LE(step + 1 - last[i], m);
    }
  }
}

struct Maker {
  const char* name;
  std::function<FunctionFamily(lfp::testing::Rng&)> make;
};

const std::vector<Maker>& well_formed() {
  static const std::vector<Maker> makers{
      {"closure", [](auto& rng) { return transitive_closure_family(lfp::testing::random_digraph(rng, 6, 0.3)); }},
      {"marriage", [](auto& rng) { return stable_marriage_family(lfp::testing::random_profile(rng, 5)); }},
      {"relaxation",
       [](auto& rng) { return edge_relaxation_family(lfp::testing::random_digraph(rng, 6, 0.4, 0, 9)); }},
      {"bellman-ford",
       [](auto& rng) { return bellman_ford_family(lfp::testing::random_digraph(rng, 6, 0.4, 0, 9)); }},
      {"floyd-warshall",
       [](auto& rng) { return floyd_warshall_family(lfp::testing::random_digraph(rng, 5, 0.4, 0, 9)); }},
      {"johnson", [](auto& rng) { return johnson_family(lfp::testing::random_negative_graph(rng, 6)); }},
      {"count",
       [](auto& rng) {
         CountInstance c;
         for (std::size_t k = lfp::testing::uniform_size(rng, 0, 7); k > 0; --k) {
           c.a.push_back(lfp::testing::uniform_value(rng, 0, 9));
         }
         c.c = 4;
         return count_greater_family(c);
       }},
      {"subsidy", [](auto& rng) { return subsidy_family(lfp::testing::random_subsidy(rng, 3, 5)); }},
  };
  return makers;
}

TEST(InterleavedProperties, AscentLeastnessScheduleIndependence) {
  lfp::testing::Rng rng(404);
  for (const auto& maker : well_formed()) {
    for (int inst = 0; inst < 4; ++inst) {
      const auto fam = maker.make(rng);
      const auto lcfp = lcfp_roundrobin(fam);
      const auto rr = run_interleaved(fam, FairSchedule::round_robin(), {false, false});
      ASSERT_EQ(rr.status, TerminalStatus::kConverged) << maker.name;
      EXPECT_EQ(rr.terminal(), lcfp) << maker.name;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto t = run_interleaved(fam, FairSchedule::seeded_random(seed), {false, false});
        ASSERT_EQ(t.status, TerminalStatus::kConverged) << maker.name << " seed " << seed;
        EXPECT_EQ(t.terminal(), rr.terminal()) << maker.name << " seed " << seed;
        EXPECT_TRUE(check_ascent(t, fam.bounds).passed) << maker.name;
        EXPECT_TRUE(check_dominated_by(t, fam.bounds, lcfp).passed) << maker.name;
      }
    }
  }
}

}  // namespace
}  // namespace lfp
