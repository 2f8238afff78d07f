// SPDX-License-Identifier: Apache-2.0
//
// Problem families. Vertices, men, women and agents are 0-based here; the
// instance files and decoded answers are 1-based.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lfp/family.hpp"

namespace lfp {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  Value weight = 1;

  bool operator==(const Edge&) const = default;
};

struct Digraph {
  std::size_t n = 0;
  std::vector<Edge> edges;

  bool operator==(const Digraph&) const = default;

  /// Throws InvalidInstance on out-of-range endpoints or duplicate edges.
  void validate() const;
  Value max_weight() const;
  Value min_weight() const;
};

struct PreferenceProfile {
  std::size_t n = 0;
  /// mpref[i][k]: woman ranked k-th (0-based) by man i.
  std::vector<std::vector<std::size_t>> mpref;
  /// rank[w][i]: rank of man i in woman w's list; lower is better.
  std::vector<std::vector<std::size_t>> rank;

  bool operator==(const PreferenceProfile&) const = default;

  /// Builds rank from women's ordered preference lists.
  static PreferenceProfile from_lists(std::vector<std::vector<std::size_t>> men,
                                      const std::vector<std::vector<std::size_t>>& women);
  /// The women's ordered lists recovered from rank.
  std::vector<std::vector<std::size_t>> women_lists() const;
  void validate() const;
};

struct SubsidyInstance {
  /// values[i][j] = v_i(X_j).
  std::vector<std::vector<Value>> values;

  bool operator==(const SubsidyInstance&) const = default;

  std::size_t agents() const noexcept { return values.size(); }
  Value delta() const;
  /// Payment bound n * delta.
  Value cap() const;
  /// Throws InvalidInstance unless the matrix is square, non-negative and
  /// envy-freeable (the envy graph has no positive-weight cycle).
  void validate() const;
};

struct CountInstance {
  std::vector<Value> a;
  Value c = 0;

  bool operator==(const CountInstance&) const = default;
};

/// Raised when potentials or distances prove a negative-weight cycle.
class NegativeCycle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FunctionFamily transitive_closure_family(const Digraph& g);
std::vector<std::vector<bool>> decode_closure(const StateVector& s, std::size_t n);

FunctionFamily stable_marriage_family(const PreferenceProfile& p,
                                      std::optional<std::pair<std::size_t, std::size_t>> forced = {});
/// wife[i] for each man, or nullopt when some man ran past his list.
std::optional<std::vector<std::size_t>> decode_matching(const StateVector& s,
                                                        const PreferenceProfile& p);

/// Distance bound nT with T = max(max weight, 1); a distance equal to it
/// means unreachable.
Value distance_bound(const Digraph& g);

FunctionFamily edge_relaxation_family(const Digraph& g, std::size_t source = 0);
FunctionFamily bellman_ford_family(const Digraph& g, std::size_t source = 0);
/// Distances from the source; nullopt for unreachable vertices.
std::vector<std::optional<Value>> decode_distances(const StateVector& s, const Digraph& g);

FunctionFamily floyd_warshall_family(const Digraph& g);
std::vector<std::vector<std::optional<Value>>> decode_all_pairs(const StateVector& s,
                                                                const Digraph& g);

/// Potential bound n * |most negative weight|.
Value potential_bound(const Digraph& g);

FunctionFamily johnson_family(const Digraph& g);

struct Reweighting {
  std::vector<Value> potentials;
  std::vector<Edge> edges;  // weight w[i,j] + p[j] - p[i]
};

/// Throws NegativeCycle if any potential exceeds the bound.
Reweighting decode_johnson(const StateVector& s, const Digraph& g);

FunctionFamily count_greater_family(const CountInstance& inst);
Value decode_count(const StateVector& s);

FunctionFamily subsidy_family(const SubsidyInstance& inst);
std::vector<Value> decode_payments(const StateVector& s);

}  // namespace lfp
