// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "generators.hpp"
#include "lfp/counterexamples.hpp"
#include "lfp/errors.hpp"
#include "lfp/instance_io.hpp"
#include "lfp/oracles.hpp"

namespace lfp {
namespace {

using Dist = std::vector<std::optional<Value>>;

TEST(LcfpRoundRobin, Examples) {
  EXPECT_EQ(lcfp_roundrobin(two_bit_family()), StateVector::scalars({1, 1}));
  const Digraph g{3, {{0, 1, 1}, {1, 2, 1}}};
  const auto s = lcfp_roundrobin(transitive_closure_family(g));
  EXPECT_EQ(decode_closure(s, 3), warshall_closure(g));
  FunctionFamily empty;
  empty.bounds = Bounds::uniform(2, {{"b", 1, Orientation::kAscending}});
  empty.initial = StateVector::scalars({1, 0});
  EXPECT_EQ(lcfp_roundrobin(empty), empty.initial);
}

TEST(LcfpRoundRobin, BrokenFamilyHitsThePassBound) {
  EXPECT_THROW(lcfp_roundrobin(noninflationary_family()), ContractViolation);
}

TEST(LcfpRoundRobin, BelowEveryScannedFixedPoint) {
  lfp::testing::Rng rng(41);
  std::vector<FunctionFamily> fams{two_bit_family(), three_bit_chain_family()};
  for (int k = 0; k < 6; ++k) {
    fams.push_back(transitive_closure_family(lfp::testing::random_digraph(rng, 3, 0.4)));
    fams.push_back(stable_marriage_family(lfp::testing::random_profile(rng, 3)));
    fams.push_back(edge_relaxation_family(lfp::testing::random_digraph(rng, 3, 0.5, 0, 3)));
    fams.push_back(subsidy_family(lfp::testing::random_subsidy(rng, 2, 4)));
  }
  for (const auto& fam : fams) {
    const auto lcfp = lcfp_roundrobin(fam);
    ASSERT_TRUE(is_common_fixed_point(lcfp, fam)) << fam.name;
    const auto minimal = minimal_fixed_points_scan(fam);
    ASSERT_EQ(minimal.size(), 1u) << fam.name;
    EXPECT_EQ(minimal.front(), lcfp) << fam.name;
  }
}

TEST(MinimalFixedPointsScan, GuardAndStart) {
  EXPECT_THROW(minimal_fixed_points_scan(transitive_closure_family(lfp::testing::path_graph(5))),
               SearchSpaceTooLarge);
  EXPECT_EQ(minimal_fixed_points_scan(floor_one_family(0)), std::vector{StateVector::scalars({1})});
  EXPECT_EQ(minimal_fixed_points_scan(floor_one_family(2)), std::vector{StateVector::scalars({2})});
}

TEST(Warshall, Examples) {
  const auto r = warshall_closure({3, {{0, 1, 1}, {1, 2, 1}}});
  EXPECT_TRUE(r[0][2]);
  // Chain of three vertices inside n = 5: 3 * 4 / 2 pairs plus 2 isolated
  // reflexive entries.
  const auto c = warshall_closure({5, {{0, 1, 1}, {1, 2, 1}}});
  std::size_t ones = 0;
  for (const auto& row : c) ones += std::count(row.begin(), row.end(), true);
  EXPECT_EQ(ones, 6u + 2u);
  const auto id = warshall_closure({3, {}});
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(id[a][b], a == b);
  }
}

TEST(GaleShapley, Examples) {
  const auto p = PreferenceProfile::from_lists({{0, 1}, {0, 1}}, {{1, 0}, {0, 1}});
  EXPECT_EQ(gale_shapley_sequential(p), (std::vector<std::size_t>{1, 0}));
  const auto id = PreferenceProfile::from_lists({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}},
                                                {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  EXPECT_EQ(gale_shapley_sequential(id), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(GaleShapley, StableAndManOptimal) {
  lfp::testing::Rng rng(43);
  for (int k = 0; k < 100; ++k) {
    const auto p = lfp::testing::random_profile(rng, 5);
    const auto gs = gale_shapley_sequential(p);
    EXPECT_TRUE(is_stable_matching(p, gs));
    const auto all = stable_matchings_bruteforce(p);
    EXPECT_NE(std::find(all.begin(), all.end(), gs), all.end());
    for (const auto& m : all) {
      for (std::size_t i = 0; i < p.n; ++i) {
        const auto& pref = p.mpref[i];
        const auto pos = [&](std::size_t w) { return std::find(pref.begin(), pref.end(), w) - pref.begin(); };
        EXPECT_LE(pos(gs[i]), pos(m[i]));
      }
    }
  }
}

TEST(ConstrainedBruteforce, PicksTheManOptimalAmongAdmissible) {
  const auto p = PreferenceProfile::from_lists({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}});
  // Both matchings are stable here; forcing m1-w2 selects the other one.
  EXPECT_EQ(stable_matchings_bruteforce(p).size(), 2u);
  EXPECT_EQ(constrained_stable_bruteforce(p, 0, 1), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(constrained_stable_bruteforce(p, 0, 0), (std::vector<std::size_t>{0, 1}));
}

TEST(ShortestPaths, Examples) {
  const Digraph tri{3, {{0, 1, 5}, {1, 2, 2}, {0, 2, 9}}};
  EXPECT_EQ(shortest_paths_reference(tri, 0), (Dist{0, 5, 7}));
  EXPECT_EQ(shortest_paths_reference({3, {{0, 1, 4}}}, 0), (Dist{0, 4, std::nullopt}));
  EXPECT_EQ(shortest_paths_reference({3, {{0, 1, 0}, {1, 2, 0}}}, 0), (Dist{0, 0, 0}));
  EXPECT_EQ(all_pairs_reference(tri)[1], (Dist{std::nullopt, 0, 2}));
  EXPECT_THROW(shortest_paths_reference({2, {{0, 1, 1}, {1, 0, -2}}}, 0), NegativeCycle);
}

TEST(Subsidy, BruteforceExamples) {
  const SubsidyInstance inst{{{1, 3}, {0, 2}}};
  EXPECT_EQ(min_subsidy_bruteforce(inst, 6), (std::vector<Value>{2, 0}));
  EXPECT_EQ(min_subsidy_bruteforce({{{3, 0}, {0, 3}}}, 6), (std::vector<Value>{0, 0}));
  EXPECT_THROW(min_subsidy_bruteforce({{{1, 3}, {0, 2}}}, 1), InvalidInstance);
}

TEST(Subsidy, EnvyEliminatingVectorsClosedUnderMeet) {
  lfp::testing::Rng rng(47);
  for (int k = 0; k < 10; ++k) {
    const auto inst = lfp::testing::random_subsidy(rng, 3, 4);
    const auto all = envy_eliminating_vectors(inst, inst.cap());
    ASSERT_FALSE(all.empty());
    for (std::size_t a = 0; a < all.size(); a += 7) {
      for (std::size_t b = 0; b < all.size(); b += 5) {
        std::vector<Value> meet(all[a].size());
        for (std::size_t i = 0; i < meet.size(); ++i) meet[i] = std::min(all[a][i], all[b][i]);
        EXPECT_TRUE(is_envy_eliminating(inst, meet));
      }
    }
  }
}

TEST(RunOracle, AgreesWithLcfpDecode) {
  lfp::testing::Rng rng(53);
  std::vector<Instance> corpus;
  for (int k = 0; k < 8; ++k) {
    const auto g = lfp::testing::random_digraph(rng, 6, 0.35, 0, 9);
    corpus.push_back({ProblemKind::kTransitiveClosure, GraphPayload{g, 0}});
    corpus.push_back({ProblemKind::kEdgeRelaxation, GraphPayload{g, g.n - 1}});
    corpus.push_back({ProblemKind::kBellmanFord, GraphPayload{g, g.n / 2}});
    corpus.push_back({ProblemKind::kFloydWarshall, GraphPayload{g, 0}});
    corpus.push_back({ProblemKind::kJohnson, GraphPayload{lfp::testing::random_negative_graph(rng, 6), 0}});
    corpus.push_back({ProblemKind::kStableMarriage, MarriagePayload{lfp::testing::random_profile(rng, 5), {}}});
    corpus.push_back({ProblemKind::kSubsidy, lfp::testing::random_subsidy(rng, 3, 5)});
    corpus.push_back({ProblemKind::kCountGreater, CountInstance{{1, 9, 4, 6, 5}, 4}});
  }
  for (const auto& inst : corpus) {
    const auto fam = build_family(inst);
    const auto r = run_oracle(inst);
    EXPECT_EQ(fam.decode(lcfp_roundrobin(fam)), r.answer) << to_string(inst.kind);
    EXPECT_FALSE(r.method.empty());
    EXPECT_EQ(r.fingerprint, fingerprint(inst));
    EXPECT_EQ(run_oracle(inst).answer, r.answer);
  }
}

}  // namespace
}  // namespace lfp
