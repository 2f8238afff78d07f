// SPDX-License-Identifier: Apache-2.0
#include "lfp/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lfp/errors.hpp"

namespace lfp {

namespace {

// Applies one batch with CAS semantics; returns true if the state changed.
bool apply_batch(const WriteList& writes, StateVector& s) {
  bool changed = false;
  for (const auto& w : writes) {
    if (w.is_cas() && s[w.coordinate][w.cas_field] != w.cas_expected) break;
    if (s[w.coordinate] != w.value) {
      s[w.coordinate] = w.value;
      changed = true;
    }
  }
  return changed;
}

bool fixed_by_all(const FunctionFamily& family, const StateVector& s) {
  WriteList writes;
  for (const auto& f : family.functions) {
    writes.clear();
    f.evaluate(s, writes);
    StateVector copy = s;
    if (apply_batch(writes, copy) && copy != s) return false;
  }
  return true;
}

}  // namespace

StateVector lcfp_roundrobin(const FunctionFamily& family) {
  StateVector s = family.initial;
  const auto max_passes = static_cast<std::size_t>(family.bounds.height()) + 2;
  WriteList writes;
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (const auto& f : family.functions) {
      writes.clear();
      f.evaluate(s, writes);
      changed = apply_batch(writes, s) || changed;
    }
    if (!changed) return s;
  }
  throw ContractViolation(family.name + ": round-robin passes did not settle; family is not inflationary");
}

std::vector<StateVector> minimal_fixed_points_scan(const FunctionFamily& family) {
  return minimal_fixed_points_scan(family, family.initial);
}

std::vector<StateVector> minimal_fixed_points_scan(const FunctionFamily& family,
                                                   const StateVector& above) {
  const auto& b = family.bounds;
  if (b.cardinality() > (std::uint64_t{1} << 16)) {
    throw SearchSpaceTooLarge("lattice too large for an exhaustive scan",
                              static_cast<long double>(b.cardinality()));
  }
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t f = 0; f < b.arity(i); ++f) slots.emplace_back(i, f);
  }
  std::vector<StateVector> fixed;
  StateVector s = extremes(b).bottom;
  for (auto [i, f] : slots) s[i][f] = 0;
  for (;;) {
    if (progress_leq(above, s, b) && fixed_by_all(family, s)) fixed.push_back(s);
    std::size_t k = 0;
    for (; k < slots.size(); ++k) {
      auto [i, f] = slots[k];
      if (s[i][f] < b.fields(i)[f].max) {
        ++s[i][f];
        break;
      }
      s[i][f] = 0;
    }
    if (k == slots.size()) break;
  }
  std::vector<StateVector> minimal;
  for (const auto& x : fixed) {
    const bool dominated = std::any_of(fixed.begin(), fixed.end(), [&](const StateVector& y) {
      return order_compare(y, x, b) == OrderRelation::kLess;
    });
    if (!dominated) minimal.push_back(x);
  }
  return minimal;
}

std::vector<std::vector<bool>> warshall_closure(const Digraph& g) {
  std::vector<std::vector<bool>> r(g.n, std::vector<bool>(g.n, false));
  for (std::size_t a = 0; a < g.n; ++a) r[a][a] = true;
  for (const auto& e : g.edges) r[e.from][e.to] = true;
  for (std::size_t k = 0; k < g.n; ++k) {
    for (std::size_t a = 0; a < g.n; ++a) {
      if (!r[a][k]) continue;
      for (std::size_t b = 0; b < g.n; ++b) {
        if (r[k][b]) r[a][b] = true;
      }
    }
  }
  return r;
}

std::vector<std::size_t> gale_shapley_sequential(const PreferenceProfile& p) {
  const std::size_t n = p.n;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> next(n, 0);
  std::vector<std::size_t> husband(n, kNone);
  std::vector<std::size_t> free_men(n);
  std::iota(free_men.rbegin(), free_men.rend(), 0);
  while (!free_men.empty()) {
    const std::size_t m = free_men.back();
    free_men.pop_back();
    const std::size_t w = p.mpref[m][next[m]++];
    if (husband[w] == kNone) {
      husband[w] = m;
    } else if (p.rank[w][m] < p.rank[w][husband[w]]) {
      free_men.push_back(husband[w]);
      husband[w] = m;
    } else {
      free_men.push_back(m);
    }
  }
  std::vector<std::size_t> wife(n);
  for (std::size_t w = 0; w < n; ++w) wife[husband[w]] = w;
  return wife;
}

bool is_stable_matching(const PreferenceProfile& p, const std::vector<std::size_t>& wife) {
  const std::size_t n = p.n;
  std::vector<std::size_t> husband(n);
  for (std::size_t m = 0; m < n; ++m) husband[wife[m]] = m;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t w = p.mpref[m][k];
      if (w == wife[m]) break;  // every later woman is worse for m
      if (p.rank[w][m] < p.rank[w][husband[w]]) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::size_t>> stable_matchings_bruteforce(const PreferenceProfile& p) {
  std::vector<std::size_t> wife(p.n);
  std::iota(wife.begin(), wife.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    if (is_stable_matching(p, wife)) out.push_back(wife);
  } while (std::next_permutation(wife.begin(), wife.end()));
  return out;
}

std::optional<std::vector<std::size_t>> constrained_stable_bruteforce(const PreferenceProfile& p,
                                                                      std::size_t man,
                                                                      std::size_t woman) {
  std::vector<std::vector<std::size_t>> with_pair;
  for (auto& m : stable_matchings_bruteforce(p)) {
    if (m[man] == woman) with_pair.push_back(std::move(m));
  }
  if (with_pair.empty()) return std::nullopt;
  // Matchings containing a fixed pair form a sublattice; its man-optimal
  // element gives every man his best partner among them.
  std::vector<std::size_t> best = with_pair.front();
  auto pos = [&](std::size_t m, std::size_t w) {
    return std::find(p.mpref[m].begin(), p.mpref[m].end(), w) - p.mpref[m].begin();
  };
  for (const auto& m : with_pair) {
    for (std::size_t i = 0; i < p.n; ++i) {
      if (pos(i, m[i]) < pos(i, best[i])) best[i] = m[i];
    }
  }
  if (std::find(with_pair.begin(), with_pair.end(), best) == with_pair.end()) {
    throw std::logic_error("stable matchings with the forced pair have no man-optimal element");
  }
  return best;
}

std::vector<std::optional<Value>> shortest_paths_reference(const Digraph& g, std::size_t source) {
  std::vector<std::optional<Value>> d(g.n);
  d[source] = 0;
  for (std::size_t pass = 0; pass <= g.n; ++pass) {
    bool changed = false;
    for (const auto& e : g.edges) {
      if (!d[e.from]) continue;
      const Value via = *d[e.from] + e.weight;
      if (!d[e.to] || via < *d[e.to]) {
        d[e.to] = via;
        changed = true;
      }
    }
    if (!changed) return d;
  }
  throw NegativeCycle("relaxation did not settle: negative cycle reachable from the source");
}

std::vector<std::vector<std::optional<Value>>> all_pairs_reference(const Digraph& g) {
  std::vector<std::vector<std::optional<Value>>> out;
  for (std::size_t s = 0; s < g.n; ++s) out.push_back(shortest_paths_reference(g, s));
  return out;
}

std::vector<Value> johnson_potentials_reference(const Digraph& g) {
  // The virtual source reaches every vertex with a zero-weight edge.
  std::vector<Value> h(g.n, 0);
  for (std::size_t pass = 0; pass <= g.n; ++pass) {
    bool changed = false;
    for (const auto& e : g.edges) {
      if (h[e.from] + e.weight < h[e.to]) {
        h[e.to] = h[e.from] + e.weight;
        changed = true;
      }
    }
    if (!changed) {
      for (auto& v : h) v = -v;
      return h;
    }
  }
  throw NegativeCycle("graph has a negative-weight cycle");
}

Value count_greater_sequential(const CountInstance& inst) {
  return static_cast<Value>(
      std::count_if(inst.a.begin(), inst.a.end(), [&](Value x) { return x > inst.c; }));
}

bool is_envy_eliminating(const SubsidyInstance& inst, const std::vector<Value>& p) {
  const auto& v = inst.values;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[i][i] + p[i] < v[i][j] + p[j]) return false;
    }
  }
  return true;
}

std::vector<std::vector<Value>> envy_eliminating_vectors(const SubsidyInstance& inst, Value cap) {
  const std::size_t n = inst.agents();
  long double space = 1;
  for (std::size_t i = 0; i < n; ++i) space *= static_cast<long double>(cap + 1);
  if (space > 1e6L) throw SearchSpaceTooLarge("payment search space exceeds 10^6 vectors", space);
  std::vector<std::vector<Value>> out;
  std::vector<Value> p(n, 0);
  for (;;) {
    if (is_envy_eliminating(inst, p)) out.push_back(p);
    std::size_t k = 0;
    for (; k < n; ++k) {
      if (p[k] < cap) {
        ++p[k];
        break;
      }
      p[k] = 0;
    }
    if (k == n) break;
  }
  return out;
}

std::vector<Value> min_subsidy_bruteforce(const SubsidyInstance& inst, Value cap) {
  const auto all = envy_eliminating_vectors(inst, cap);
  if (all.empty()) throw InvalidInstance("INFEASIBLE: no envy-eliminating vector within the cap");
  std::vector<Value> meet = all.front();
  for (const auto& p : all) {
    for (std::size_t i = 0; i < meet.size(); ++i) meet[i] = std::min(meet[i], p[i]);
  }
  if (!is_envy_eliminating(inst, meet)) {
    throw std::logic_error("componentwise minimum of envy-eliminating vectors is not envy-eliminating");
  }
  return meet;
}

}  // namespace lfp
