// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "generators.hpp"
#include "lfp/errors.hpp"
#include "lfp/interleaved.hpp"
#include "lfp/oracles.hpp"
#include "lfp/parallel.hpp"
#include "lfp/problems.hpp"

namespace lfp {
namespace {

using Dist = std::vector<std::optional<Value>>;

StateVector solve(const FunctionFamily& fam) {
  const auto t = run_interleaved(fam, FairSchedule::round_robin(), {false, false});
  EXPECT_EQ(t.status, TerminalStatus::kConverged) << fam.name;
  return t.terminal();
}

const Digraph kTriangle{3, {{0, 1, 5}, {1, 2, 2}, {0, 2, 9}}};

TEST(TransitiveClosure, Examples) {
  const auto r = decode_closure(solve(transitive_closure_family({3, {{0, 1, 1}, {1, 2, 1}}})), 3);
  EXPECT_TRUE(r[0][2]);
  EXPECT_FALSE(r[2][0]);

  const auto id = decode_closure(solve(transitive_closure_family({4, {}})), 4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(id[a][b], a == b);
  }

  Digraph complete{4, {}};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      if (a != b) complete.edges.push_back({a, b, 1});
    }
  }
  for (const auto& row : decode_closure(solve(transitive_closure_family(complete)), 4)) {
    for (bool x : row) EXPECT_TRUE(x);
  }
}

TEST(TransitiveClosure, Shape) {
  const auto fam = transitive_closure_family({3, {{0, 1, 1}}});
  EXPECT_EQ(fam.bounds.size(), 9u);
  EXPECT_EQ(fam.function_count(), 9u);
  EXPECT_TRUE(fam.bounds.all_ascending());
  for (const auto& f : fam.functions) {
    EXPECT_EQ(f.write_set, std::vector<std::size_t>{f.id});
  }
  EXPECT_EQ(fam.initial[0 * 3 + 1], Tuple{1});
  EXPECT_EQ(fam.initial[1 * 3 + 1], Tuple{1});
  EXPECT_EQ(fam.initial[1 * 3 + 0], Tuple{0});
}

TEST(StableMarriage, Examples) {
  const auto p = PreferenceProfile::from_lists({{0, 1}, {0, 1}}, {{1, 0}, {0, 1}});
  const auto fam = stable_marriage_family(p);
  EXPECT_EQ(decode_matching(solve(fam), p), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(fam.decode(solve(fam))["status"], "STABLE");

  const auto q = PreferenceProfile::from_lists({{2, 0, 1}, {0, 1, 2}, {1, 2, 0}},
                                               {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  const auto g = solve(stable_marriage_family(q));
  EXPECT_EQ(g, StateVector::scalars({1, 1, 1}));
  EXPECT_EQ(decode_matching(g, q), (std::vector<std::size_t>{2, 0, 1}));
}

TEST(StableMarriage, ForcedPairWithNoStableMatchingIsInfeasible) {
  // Every man ranks w1 first and w1 ranks m1 last, so any matching wedding
  // m1 to w1 is blocked by w1's favourite.
  const auto p = PreferenceProfile::from_lists({{0, 1, 2}, {0, 2, 1}, {0, 1, 2}},
                                               {{1, 2, 0}, {0, 1, 2}, {2, 0, 1}});
  ASSERT_FALSE(constrained_stable_bruteforce(p, 0, 0).has_value());
  const auto fam = stable_marriage_family(p, std::pair{std::size_t{0}, std::size_t{0}});
  const auto g = solve(fam);
  EXPECT_EQ(g[0], Tuple{4});
  EXPECT_FALSE(decode_matching(g, p).has_value());
  EXPECT_EQ(fam.decode(g)["status"], "INFEASIBLE");
}

TEST(StableMarriage, ForcedPairAlreadyManOptimal) {
  const auto p = PreferenceProfile::from_lists({{0, 1}, {0, 1}}, {{1, 0}, {0, 1}});
  const auto g = solve(stable_marriage_family(p, std::pair{std::size_t{1}, std::size_t{0}}));
  EXPECT_EQ(decode_matching(g, p), (std::vector<std::size_t>{1, 0}));
}

// The constrained variant is not exact in general (it can stop at an unstable
// matching); these are the implications that do hold.
TEST(StableMarriage, ConstrainedVariantSoundImplications) {
  lfp::testing::Rng rng(1234);
  std::size_t infeasible = 0;
  for (int k = 0; k < 400; ++k) {
    const auto p = lfp::testing::random_profile(rng, 4);
    const std::size_t w = lfp::testing::uniform_size(rng, 0, p.n - 1);
    const auto truth = constrained_stable_bruteforce(p, 0, w);
    const auto got = decode_matching(solve(stable_marriage_family(p, std::pair{std::size_t{0}, w})), p);
    if (!got) {
      ++infeasible;
      EXPECT_FALSE(truth.has_value()) << "instance " << k;
      continue;
    }
    EXPECT_EQ((*got)[0], w);
    if (is_stable_matching(p, *got)) EXPECT_EQ(got, truth) << "instance " << k;
  }
  EXPECT_GT(infeasible, 0u);
}

TEST(EdgeRelaxation, Examples) {
  EXPECT_EQ(decode_distances(solve(edge_relaxation_family(kTriangle)), kTriangle), (Dist{0, 5, 7}));
  const Digraph single{1, {}};
  EXPECT_EQ(decode_distances(solve(edge_relaxation_family(single)), single), (Dist{0}));

  const Digraph split{3, {{0, 1, 4}}};
  const auto fam = edge_relaxation_family(split);
  const auto g = solve(fam);
  EXPECT_EQ(g[2], Tuple{distance_bound(split)});
  EXPECT_EQ(decode_distances(g, split), (Dist{0, 4, std::nullopt}));
  EXPECT_EQ(fam.bounds.fields(0).front().orientation, Orientation::kDescending);
  EXPECT_EQ(distance_bound(kTriangle), 27);
}

TEST(EdgeRelaxation, OtherSource) {
  EXPECT_EQ(decode_distances(solve(edge_relaxation_family(kTriangle, 1)), kTriangle),
            (Dist{std::nullopt, 0, 2}));
}

TEST(BellmanFord, Examples) {
  EXPECT_EQ(decode_distances(solve(bellman_ford_family(kTriangle)), kTriangle), (Dist{0, 5, 7}));

  const Digraph edgeless{3, {}};
  const auto fam = bellman_ford_family(edgeless);
  const auto g = solve(fam);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(g[i][0], fam.initial[i][0]);
    EXPECT_EQ(g[i][1], 4);
  }
}

TEST(FloydWarshall, Examples) {
  const auto all = decode_all_pairs(solve(floyd_warshall_family(kTriangle)), kTriangle);
  EXPECT_EQ(all[0], (Dist{0, 5, 7}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(all[i][i], 0);

  Digraph complete{4, {}};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      if (a != b) complete.edges.push_back({a, b, 1});
    }
  }
  const auto d = decode_all_pairs(solve(floyd_warshall_family(complete)), complete);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(d[a][b], a == b ? 0 : 1);
  }
}

TEST(Johnson, SingleNegativeEdge) {
  const Digraph g{2, {{0, 1, -3}}};
  const auto r = decode_johnson(solve(johnson_family(g)), g);
  ASSERT_EQ(r.edges.size(), 1u);
  EXPECT_GE(r.edges[0].weight, 0);
  EXPECT_EQ(r.potentials, (std::vector<Value>{0, 3}));
}

TEST(Johnson, NonNegativeWeightsNeedNoPotentials) {
  const auto fam = johnson_family(kTriangle);
  EXPECT_TRUE(is_common_fixed_point(fam.initial, fam));
  EXPECT_EQ(decode_johnson(solve(fam), kTriangle).potentials, (std::vector<Value>{0, 0, 0}));
}

TEST(Johnson, NegativeTwoCycleDetected) {
  const Digraph g{2, {{0, 1, 2}, {1, 0, -3}}};
  const auto fam = johnson_family(g);
  const auto s = solve(fam);
  EXPECT_THROW(decode_johnson(s, g), NegativeCycle);
  EXPECT_EQ(fam.decode(s)["status"], "NEGATIVE_CYCLE");
}

TEST(Johnson, ReweightingMatchesReferencePotentials) {
  lfp::testing::Rng rng(88);
  for (int k = 0; k < 30; ++k) {
    const auto g = lfp::testing::random_negative_graph(rng, 7);
    const auto r = decode_johnson(solve(johnson_family(g)), g);
    EXPECT_EQ(r.potentials, johnson_potentials_reference(g));
    for (const auto& e : r.edges) EXPECT_GE(e.weight, 0);
  }
}

TEST(CountGreater, Examples) {
  EXPECT_EQ(decode_count(solve(count_greater_family({{5, 1, 7}, 4}))), 2);
  EXPECT_EQ(decode_count(solve(count_greater_family({{}, 4}))), 0);
  const auto fam = count_greater_family({{1, 2, 3}, 4});
  const auto t = run_interleaved(fam, FairSchedule::round_robin());
  EXPECT_EQ(decode_count(t.terminal()), 0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t.terminal()[i], Tuple{1});
  for (const auto& e : t.events) EXPECT_FALSE(e.is_cas);
}

TEST(CountGreater, NotLocalAndDomain) {
  const auto fam = count_greater_family({{5, 1}, 4});
  for (const auto& f : fam.functions) EXPECT_FALSE(f.declared.i_local);
  EXPECT_TRUE(fam.domain(StateVector::scalars({1, 0, 1})));
  EXPECT_FALSE(fam.domain(StateVector::scalars({1, 0, 0})));
  EXPECT_FALSE(fam.domain(StateVector::scalars({0, 1, 1})));
}

TEST(Subsidy, Examples) {
  const SubsidyInstance inst{{{1, 3}, {0, 2}}};
  EXPECT_EQ(inst.cap(), 6);
  EXPECT_EQ(decode_payments(solve(subsidy_family(inst))), (std::vector<Value>{2, 0}));
  EXPECT_EQ(decode_payments(solve(subsidy_family({{{4, 0, 0}, {0, 4, 0}, {0, 0, 4}}}))),
            (std::vector<Value>{0, 0, 0}));
  EXPECT_EQ(decode_payments(solve(subsidy_family({{{5, 2, 1}, {2, 5, 3}, {1, 3, 5}}}))),
            (std::vector<Value>{0, 0, 0}));
}

TEST(Subsidy, RejectsNonEnvyFreeable) {
  // Each agent prefers the other's bundle: a positive envy cycle.
  EXPECT_THROW(subsidy_family({{{0, 3}, {3, 0}}}), InvalidInstance);
  EXPECT_THROW(subsidy_family({{{1, 2}}}), InvalidInstance);
}

TEST(Subsidy, PaymentsEliminateEnvy) {
  lfp::testing::Rng rng(3);
  for (int k = 0; k < 40; ++k) {
    const auto inst = lfp::testing::random_subsidy(rng, 4, 6);
    const auto p = decode_payments(solve(subsidy_family(inst)));
    EXPECT_TRUE(is_envy_eliminating(inst, p));
    if (inst.agents() <= 3) EXPECT_EQ(p, min_subsidy_bruteforce(inst, inst.cap()));
  }
}

TEST(Digraph, ValidateRejectsBadEdges) {
  EXPECT_THROW((Digraph{2, {{0, 2, 1}}}.validate()), InvalidInstance);
  EXPECT_THROW((Digraph{2, {{0, 1, 1}, {0, 1, 4}}}.validate()), InvalidInstance);
}

}  // namespace
}  // namespace lfp
