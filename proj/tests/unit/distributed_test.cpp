// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "generators.hpp"
#include "lfp/counterexamples.hpp"
#include "lfp/distributed.hpp"
#include "lfp/errors.hpp"
#include "lfp/oracles.hpp"
#include "lfp/problems.hpp"

namespace lfp {
namespace {

Bounds bits(std::size_t n) { return Bounds::uniform(n, {{"b", 1, Orientation::kAscending}}); }

TEST(Distributed, ThreeBitChainWithStalenessTwo) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = run_distributed(three_bit_chain_family(), StalenessParams::uniform(2, seed));
    EXPECT_EQ(r.trace.status, TerminalStatus::kConverged);
    EXPECT_EQ(r.trace.terminal(), StateVector::scalars({1, 1, 1}));
    EXPECT_LE(r.report.max_lag, 2u);
  }
}

TEST(Distributed, WithheldUpdateStallsTheChain) {
  const auto r = run_distributed(three_bit_chain_family(), StalenessParams::withhold(0, {1, 2}), 60);
  EXPECT_EQ(r.trace.status, TerminalStatus::kStepLimit);
  EXPECT_EQ(r.trace.time_units, 60u);
  EXPECT_EQ(r.trace.terminal(), StateVector::scalars({1, 0, 0}));
}

TEST(Distributed, ClosureMatchesWarshallForEveryStaleness) {
  lfp::testing::Rng rng(61);
  for (int k = 0; k < 5; ++k) {
    const auto g = lfp::testing::random_digraph(rng, 5, 0.3);
    const auto fam = transitive_closure_family(g);
    for (std::size_t T : {0, 1, 2, 4, 8}) {
      for (const auto& p : {StalenessParams::uniform(T, 9 * k + T), StalenessParams::max_delay(T)}) {
        const auto r = run_distributed(fam, p);
        ASSERT_EQ(r.trace.status, TerminalStatus::kConverged);
        EXPECT_EQ(decode_closure(r.trace.terminal(), g.n), warshall_closure(g));
      }
    }
  }
}

TEST(Distributed, NonLocalFamilyRejected) {
  EXPECT_THROW(run_distributed(count_greater_family({{5, 1}, 4}), StalenessParams::uniform(1, 0)),
               ContractViolation);
  auto fam = two_bit_family();
  fam.functions.pop_back();
  EXPECT_THROW(run_distributed(fam, StalenessParams::uniform(1, 0)), ContractViolation);
}

TEST(DeliverMessages, ZeroDelayIsVisibleInTheSendRound) {
  std::vector<ProcessState> procs{{0, StateVector::scalars({0, 0}), {}}, {1, StateVector::scalars({0, 0}), {}}};
  procs[1].inbox.push_back({0, {1}, 4, 4});
  deliver_messages(procs, 3, bits(2));
  EXPECT_EQ(procs[1].view, StateVector::scalars({0, 0}));
  deliver_messages(procs, 4, bits(2));
  EXPECT_EQ(procs[1].view, StateVector::scalars({1, 0}));
  EXPECT_TRUE(procs[1].inbox.empty());
}

TEST(DeliverMessages, OutOfOrderArrivalKeepsTheJoin) {
  const auto b = Bounds::uniform(2, {{"x", 9, Orientation::kAscending}});
  std::vector<ProcessState> procs{{0, StateVector::scalars({0, 0}), {}}, {1, StateVector::scalars({0, 0}), {}}};
  procs[1].inbox.push_back({0, {3}, 1, 5});
  procs[1].inbox.push_back({0, {7}, 2, 3});
  std::vector<std::vector<Message>> delivered;
  deliver_messages(procs, 3, b, &delivered);
  EXPECT_EQ(procs[1].view[0], Tuple{7});
  ASSERT_EQ(delivered[1].size(), 1u);
  deliver_messages(procs, 5, b, &delivered);
  EXPECT_EQ(procs[1].view[0], Tuple{7});
  EXPECT_EQ(delivered[1].front().value, Tuple{3});
}

TEST(Distributed, MaxDelayDeliversExactlyTRoundsLater) {
  const std::size_t T = 3;
  const auto r = run_distributed(two_bit_family(), StalenessParams::max_delay(T), 0, {false, true});
  ASSERT_EQ(r.trace.status, TerminalStatus::kConverged);
  std::vector<std::size_t> written(2, 0);
  for (const auto& e : r.trace.events) {
    if (e.kind == EventKind::kWrite) written[e.coordinate] = e.time + 1;
  }
  std::size_t deliveries = 0;
  for (const auto& e : r.trace.events) {
    if (e.kind != EventKind::kDeliver) continue;
    ++deliveries;
    EXPECT_NE(e.actor, e.coordinate);
    EXPECT_EQ(e.time, written[e.coordinate] + T);
  }
  EXPECT_EQ(deliveries, 2u);
}

TEST(Distributed, ReportOnRandomFamilies) {
  lfp::testing::Rng rng(73);
  std::vector<FunctionFamily> fams;
  for (int k = 0; k < 4; ++k) {
    fams.push_back(transitive_closure_family(lfp::testing::random_digraph(rng, 5, 0.3)));
    fams.push_back(stable_marriage_family(lfp::testing::random_profile(rng, 5)));
    fams.push_back(edge_relaxation_family(lfp::testing::random_digraph(rng, 6, 0.4, 0, 9)));
    fams.push_back(johnson_family(lfp::testing::random_negative_graph(rng, 5)));
    fams.push_back(subsidy_family(lfp::testing::random_subsidy(rng, 3, 5)));
  }
  for (const auto& fam : fams) {
    const auto lcfp = lcfp_roundrobin(fam);
    for (std::size_t T : {0, 1, 3, 6}) {
      for (const auto& p : {StalenessParams::uniform(T, 17 + T), StalenessParams::max_delay(T)}) {
        const auto r = run_distributed(fam, p, 0, {false, false});
        ASSERT_EQ(r.trace.status, TerminalStatus::kConverged) << fam.name;
        EXPECT_EQ(r.trace.terminal(), lcfp) << fam.name << " T=" << T;
        EXPECT_EQ(r.report.terminal, lcfp);
        EXPECT_LE(r.report.max_lag, T) << fam.name;
        EXPECT_TRUE(r.report.views_dominated) << fam.name;
        EXPECT_EQ(r.report.tau, fam.bounds.size());
        EXPECT_EQ(r.report.late_exact, r.report.late_evaluations) << fam.name;
        EXPECT_TRUE(check_ascent(r.trace, fam.bounds).passed);
        EXPECT_TRUE(check_dominated_by(r.trace, fam.bounds, lcfp).passed);
        std::size_t observed = 0;
        for (const auto& [lag, count] : r.report.lag_histogram) {
          EXPECT_LE(lag, T);
          observed += count;
        }
        EXPECT_EQ(observed, r.trace.selected.size() * (fam.bounds.size() - 1));
      }
    }
  }
}

TEST(Distributed, EveryProcessRunsOncePerTau) {
  const auto fam = transitive_closure_family(lfp::testing::path_graph(3));
  const auto r = run_distributed(fam, StalenessParams::uniform(2, 4));
  const std::size_t tau = r.report.tau;
  for (std::size_t start = 0; start + tau <= r.trace.selected.size(); ++start) {
    std::vector<bool> seen(tau, false);
    for (std::size_t k = start; k < start + tau; ++k) seen[r.trace.selected[k].front()] = true;
    EXPECT_EQ(std::count(seen.begin(), seen.end(), true), static_cast<long>(tau));
  }
}

}  // namespace
}  // namespace lfp
