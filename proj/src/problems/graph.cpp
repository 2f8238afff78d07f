// SPDX-License-Identifier: Apache-2.0
//
// Digraph families: reachability and the four shortest-path formulations.
#include <algorithm>
#include <memory>
#include <set>
#include <string>

#include "lfp/errors.hpp"
#include "lfp/problems.hpp"

namespace lfp {

void Digraph::validate() const {
  if (n == 0) throw InvalidInstance("graph needs at least one vertex");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n) {
      throw InvalidInstance("edge " + std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1) +
                            " names a vertex outside 1.." + std::to_string(n));
    }
    if (!seen.emplace(e.from, e.to).second) {
      throw InvalidInstance("duplicate edge " + std::to_string(e.from + 1) + "->" +
                            std::to_string(e.to + 1));
    }
  }
}

Value Digraph::max_weight() const {
  Value m = 0;
  for (const auto& e : edges) m = std::max(m, e.weight);
  return m;
}

Value Digraph::min_weight() const {
  Value m = 0;
  for (const auto& e : edges) m = std::min(m, e.weight);
  return m;
}

namespace {

void require_non_negative(const Digraph& g, const char* what) {
  for (const auto& e : g.edges) {
    if (e.weight < 0) {
      throw InvalidInstance(std::string(what) + " needs non-negative weights; edge " +
                            std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1) +
                            " has " + std::to_string(e.weight));
    }
  }
}

// In-edges per vertex as (source, weight).
std::vector<std::vector<std::pair<std::size_t, Value>>> in_edges(const Digraph& g) {
  std::vector<std::vector<std::pair<std::size_t, Value>>> pre(g.n);
  for (const auto& e : g.edges) pre[e.to].emplace_back(e.from, e.weight);
  return pre;
}

UpdateFunction local_function(std::size_t i, std::vector<std::size_t> reads, EvaluateFn fn) {
  UpdateFunction f;
  f.id = i;
  f.read_set = std::move(reads);
  std::sort(f.read_set.begin(), f.read_set.end());
  f.read_set.erase(std::unique(f.read_set.begin(), f.read_set.end()), f.read_set.end());
  f.write_set = {i};
  f.evaluate = std::move(fn);
  return f;
}

StateVector initial_distances(const Digraph& g, std::size_t source, Value bound) {
  std::vector<Value> d(g.n, bound);
  for (const auto& e : g.edges) {
    if (e.from == source) d[e.to] = std::min(d[e.to], e.weight);
  }
  d[source] = 0;
  return StateVector::scalars(d);
}

}  // namespace

FunctionFamily transitive_closure_family(const Digraph& g) {
  g.validate();
  const std::size_t n = g.n;
  FunctionFamily fam;
  fam.name = "transitive_closure";
  fam.bounds = Bounds::uniform(n * n, {{"reach", 1, Orientation::kAscending}});
  std::vector<Value> r(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) r[a * n + a] = 1;
  for (const auto& e : g.edges) r[e.from * n + e.to] = 1;
  fam.initial = StateVector::scalars(r);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = a * n + b;
      std::vector<std::size_t> reads{ab};
      for (std::size_t k = 0; k < n; ++k) {
        reads.push_back(a * n + k);
        reads.push_back(k * n + b);
      }
      fam.functions.push_back(local_function(ab, std::move(reads),
                                             [n, a, b, ab](const StateVector& s, WriteList& out) {
        if (s[ab][0] == 1) return;
        for (std::size_t k = 0; k < n; ++k) {
          if (s[a * n + k][0] == 1 && s[k * n + b][0] == 1) {
            out.push_back(IntendedWrite::plain(ab, Tuple{1}));
            return;
          }
        }
      }));
    }
  }
  fam.decode = [n](const StateVector& s) {
    Answer rows = Answer::array();
    for (const auto& row : decode_closure(s, n)) {
      Answer r = Answer::array();
      for (bool bit : row) r.push_back(bit ? 1 : 0);
      rows.push_back(std::move(r));
    }
    return Answer{{"closure", std::move(rows)}};
  };
  return fam;
}

std::vector<std::vector<bool>> decode_closure(const StateVector& s, std::size_t n) {
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) m[a][b] = s[a * n + b][0] == 1;
  }
  return m;
}

Value distance_bound(const Digraph& g) {
  return static_cast<Value>(g.n) * std::max<Value>(g.max_weight(), 1);
}

namespace {

Answer distances_answer(const std::vector<std::optional<Value>>& d) {
  Answer out = Answer::array();
  for (const auto& v : d) {
    if (v) {
      out.push_back(*v);
    } else {
      out.push_back("UNREACHABLE");
    }
  }
  return out;
}

void require_source(const Digraph& g, std::size_t source) {
  if (source >= g.n) throw InvalidInstance("source vertex outside the graph");
}

}  // namespace

FunctionFamily edge_relaxation_family(const Digraph& g, std::size_t source) {
  g.validate();
  require_source(g, source);
  require_non_negative(g, "edge relaxation");
  const Value bound = distance_bound(g);
  auto pre = std::make_shared<const std::vector<std::vector<std::pair<std::size_t, Value>>>>(in_edges(g));

  FunctionFamily fam;
  fam.name = "edge_relaxation";
  fam.bounds = Bounds::uniform(g.n, {{"dist", bound, Orientation::kDescending}});
  fam.initial = initial_distances(g, source, bound);
  for (std::size_t i = 0; i < g.n; ++i) {
    std::vector<std::size_t> reads{i};
    for (const auto& [k, w] : (*pre)[i]) reads.push_back(k);
    fam.functions.push_back(local_function(i, std::move(reads),
                                           [pre, i, bound](const StateVector& s, WriteList& out) {
      Value best = s[i][0];
      for (const auto& [k, w] : (*pre)[i]) best = std::min(best, std::min(s[k][0] + w, bound));
      if (best < s[i][0]) out.push_back(IntendedWrite::plain(i, Tuple{best}));
    }));
  }
  fam.decode = [g](const StateVector& s) {
    return Answer{{"distances", distances_answer(decode_distances(s, g))}};
  };
  return fam;
}

FunctionFamily bellman_ford_family(const Digraph& g, std::size_t source) {
  g.validate();
  require_source(g, source);
  require_non_negative(g, "Bellman-Ford");
  const Value bound = distance_bound(g);
  const auto top_level = static_cast<Value>(g.n) + 1;
  auto pre = std::make_shared<const std::vector<std::vector<std::pair<std::size_t, Value>>>>(in_edges(g));

  FunctionFamily fam;
  fam.name = "bellman_ford";
  fam.bounds = Bounds::uniform(g.n, {{"dist", bound, Orientation::kDescending},
                                     {"level", top_level, Orientation::kAscending}});
  const StateVector d0 = initial_distances(g, source, bound);
  std::vector<Tuple> init;
  for (std::size_t i = 0; i < g.n; ++i) init.push_back(Tuple{d0[i][0], 1});
  fam.initial = StateVector(std::move(init));

  std::vector<std::size_t> everyone(g.n);
  for (std::size_t i = 0; i < g.n; ++i) everyone[i] = i;
  for (std::size_t i = 0; i < g.n; ++i) {
    fam.functions.push_back(local_function(
        i, everyone, [pre, i, bound, top_level, n = g.n](const StateVector& s, WriteList& out) {
          Value dist = s[i][0];
          for (const auto& [k, w] : (*pre)[i]) dist = std::min(dist, std::min(s[k][0] + w, bound));
          bool lagging = false;
          for (std::size_t k = 0; k < n; ++k) lagging = lagging || s[k][1] < s[i][1];
          const Value level = (!lagging && s[i][1] < top_level) ? s[i][1] + 1 : s[i][1];
          if (dist != s[i][0] || level != s[i][1]) out.push_back(IntendedWrite::plain(i, Tuple{dist, level}));
        }));
  }
  fam.decode = [g](const StateVector& s) {
    return Answer{{"distances", distances_answer(decode_distances(s, g))}};
  };
  return fam;
}

std::vector<std::optional<Value>> decode_distances(const StateVector& s, const Digraph& g) {
  const Value bound = distance_bound(g);
  std::vector<std::optional<Value>> d(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    if (s[i][0] < bound) d[i] = s[i][0];
  }
  return d;
}

FunctionFamily floyd_warshall_family(const Digraph& g) {
  g.validate();
  require_non_negative(g, "Floyd-Warshall");
  const std::size_t n = g.n;
  const Value bound = distance_bound(g);

  FunctionFamily fam;
  fam.name = "floyd_warshall";
  fam.bounds = Bounds::uniform(n * n, {{"dist", bound, Orientation::kDescending}});
  std::vector<Value> d(n * n, bound);
  for (const auto& e : g.edges) d[e.from * n + e.to] = std::min(d[e.from * n + e.to], e.weight);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  fam.initial = StateVector::scalars(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ij = i * n + j;
      std::vector<std::size_t> reads{ij};
      for (std::size_t k = 0; k < n; ++k) {
        reads.push_back(i * n + k);
        reads.push_back(k * n + j);
      }
      fam.functions.push_back(local_function(
          ij, std::move(reads), [n, i, j, ij, bound](const StateVector& s, WriteList& out) {
            Value best = s[ij][0];
            for (std::size_t k = 0; k < n; ++k) {
              best = std::min(best, std::min(s[i * n + k][0] + s[k * n + j][0], bound));
            }
            if (best < s[ij][0]) out.push_back(IntendedWrite::plain(ij, Tuple{best}));
          }));
    }
  }
  fam.decode = [g](const StateVector& s) {
    Answer rows = Answer::array();
    for (const auto& row : decode_all_pairs(s, g)) rows.push_back(distances_answer(row));
    return Answer{{"distances", std::move(rows)}};
  };
  return fam;
}

std::vector<std::vector<std::optional<Value>>> decode_all_pairs(const StateVector& s,
                                                                const Digraph& g) {
  const Value bound = distance_bound(g);
  std::vector<std::vector<std::optional<Value>>> d(g.n, std::vector<std::optional<Value>>(g.n));
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.n; ++j) {
      if (s[i * g.n + j][0] < bound) d[i][j] = s[i * g.n + j][0];
    }
  }
  return d;
}

Value potential_bound(const Digraph& g) { return static_cast<Value>(g.n) * -g.min_weight(); }

FunctionFamily johnson_family(const Digraph& g) {
  g.validate();
  const Value bound = potential_bound(g);
  // One spare value above the bound marks overflow.
  const Value top = bound + 1;
  auto pre = std::make_shared<const std::vector<std::vector<std::pair<std::size_t, Value>>>>(in_edges(g));

  FunctionFamily fam;
  fam.name = "johnson";
  fam.bounds = Bounds::uniform(g.n, {{"potential", top, Orientation::kAscending}});
  fam.initial = StateVector::scalars(std::vector<Value>(g.n, 0));
  for (std::size_t i = 0; i < g.n; ++i) {
    std::vector<std::size_t> reads{i};
    for (const auto& [k, w] : (*pre)[i]) reads.push_back(k);
    fam.functions.push_back(local_function(i, std::move(reads),
                                           [pre, i, top](const StateVector& s, WriteList& out) {
      Value best = s[i][0];
      for (const auto& [k, w] : (*pre)[i]) best = std::max(best, std::min(s[k][0] - w, top));
      if (best > s[i][0]) out.push_back(IntendedWrite::plain(i, Tuple{best}));
    }));
  }
  fam.decode = [g](const StateVector& s) {
    try {
      const Reweighting r = decode_johnson(s, g);
      Answer edges = Answer::array();
      for (const auto& e : r.edges) edges.push_back({e.from + 1, e.to + 1, e.weight});
      return Answer{{"status", "OK"}, {"potentials", r.potentials}, {"reweighted", std::move(edges)}};
    } catch (const NegativeCycle&) {
      return Answer{{"status", "NEGATIVE_CYCLE"}};
    }
  };
  return fam;
}

Reweighting decode_johnson(const StateVector& s, const Digraph& g) {
  const Value bound = potential_bound(g);
  Reweighting r;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (s[i][0] > bound) {
      throw NegativeCycle("potential of vertex " + std::to_string(i + 1) + " exceeds " +
                          std::to_string(bound));
    }
    r.potentials.push_back(s[i][0]);
  }
  for (const auto& e : g.edges) {
    r.edges.push_back({e.from, e.to, e.weight + r.potentials[e.to] - r.potentials[e.from]});
  }
  return r;
}

}  // namespace lfp
