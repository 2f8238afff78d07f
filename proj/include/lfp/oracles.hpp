// SPDX-License-Identifier: Apache-2.0
//
// Sequential reference solutions and brute-force searches. Nothing here calls
// into the engines.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfp/family.hpp"
#include "lfp/problems.hpp"

namespace lfp {

struct OracleResult {
  Answer answer;
  std::string method;
  std::uint64_t fingerprint = 0;
};

/// Applies f_0, f_1, ... in order, applying each batch itself, until a full
/// pass changes nothing. Throws ContractViolation if the pass count exceeds
/// height + 2 (only possible for broken families).
StateVector lcfp_roundrobin(const FunctionFamily& family);

/// Minimal common fixed points among the states >= family.initial, by
/// exhaustive scan. A well-formed family has exactly one. Throws
/// SearchSpaceTooLarge above 2^16 states.
std::vector<StateVector> minimal_fixed_points_scan(const FunctionFamily& family);
std::vector<StateVector> minimal_fixed_points_scan(const FunctionFamily& family,
                                                   const StateVector& above);

std::vector<std::vector<bool>> warshall_closure(const Digraph& g);

/// Man-proposing deferred acceptance; wife[i] per man.
std::vector<std::size_t> gale_shapley_sequential(const PreferenceProfile& p);

bool is_stable_matching(const PreferenceProfile& p, const std::vector<std::size_t>& wife);

/// Every stable matching, by enumerating all n! matchings.
std::vector<std::vector<std::size_t>> stable_matchings_bruteforce(const PreferenceProfile& p);

/// The man-optimal stable matching that weds `man` to `woman`, if any.
std::optional<std::vector<std::size_t>> constrained_stable_bruteforce(const PreferenceProfile& p,
                                                                      std::size_t man,
                                                                      std::size_t woman);

/// Relaxes every edge until nothing changes; nullopt means unreachable.
/// Throws NegativeCycle if relaxation still improves after n passes.
std::vector<std::optional<Value>> shortest_paths_reference(const Digraph& g, std::size_t source);
std::vector<std::vector<std::optional<Value>>> all_pairs_reference(const Digraph& g);

/// Least non-negative potentials p with w[i,j] + p[j] - p[i] >= 0, from
/// shortest distances out of a virtual source. Throws NegativeCycle.
std::vector<Value> johnson_potentials_reference(const Digraph& g);

Value count_greater_sequential(const CountInstance& inst);

/// Least envy-eliminating payment vector in {0..cap}^n by enumeration.
/// Throws SearchSpaceTooLarge above 10^6 vectors and InvalidInstance when
/// no vector under the cap eliminates envy.
std::vector<Value> min_subsidy_bruteforce(const SubsidyInstance& inst, Value cap);

/// All envy-eliminating vectors in {0..cap}^n (same guard).
std::vector<std::vector<Value>> envy_eliminating_vectors(const SubsidyInstance& inst, Value cap);
bool is_envy_eliminating(const SubsidyInstance& inst, const std::vector<Value>& p);

}  // namespace lfp
