// SPDX-License-Identifier: Apache-2.0
#include "lfp/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lfp/errors.hpp"

namespace lfp {

namespace {

using nlohmann::json;

constexpr std::pair<ProblemKind, const char*> kKinds[] = {
    {ProblemKind::kTransitiveClosure, "transitive_closure"},
    {ProblemKind::kStableMarriage, "stable_marriage"},
    {ProblemKind::kEdgeRelaxation, "edge_relaxation"},
    {ProblemKind::kBellmanFord, "bellman_ford"},
    {ProblemKind::kFloydWarshall, "floyd_warshall"},
    {ProblemKind::kJohnson, "johnson"},
    {ProblemKind::kCountGreater, "count_greater"},
    {ProblemKind::kSubsidy, "subsidy"},
};

bool is_graph_kind(ProblemKind k) {
  return k != ProblemKind::kStableMarriage && k != ProblemKind::kCountGreater &&
         k != ProblemKind::kSubsidy;
}

bool has_source(ProblemKind k) {
  return k == ProblemKind::kEdgeRelaxation || k == ProblemKind::kBellmanFord;
}

// Walks a JSON document while tracking the pointer for diagnostics.
class Field {
 public:
  Field(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw SchemaError(path_.empty() ? "/" : path_, message);
  }

  const Field& require_object() const {
    if (!node_.is_object()) fail("expected an object");
    return *this;
  }

  Field at(const std::string& key) const {
    require_object();
    const auto it = node_.find(key);
    if (it == node_.end()) Field(node_, path_ + "/" + key).fail("missing field");
    return {*it, path_ + "/" + key};
  }

  std::optional<Field> find(const std::string& key) const {
    require_object();
    const auto it = node_.find(key);
    if (it == node_.end()) return std::nullopt;
    return Field(*it, path_ + "/" + key);
  }

  std::vector<Field> items() const {
    if (!node_.is_array()) fail("expected an array");
    std::vector<Field> out;
    for (std::size_t k = 0; k < node_.size(); ++k) out.emplace_back(node_[k], path_ + "/" + std::to_string(k));
    return out;
  }

  Value integer() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    return node_.get<Value>();
  }

  Value integer_at_least(Value lo) const {
    const Value v = integer();
    if (v < lo) fail("expected an integer >= " + std::to_string(lo));
    return v;
  }

  /// A 1-based index in 1..n, returned 0-based.
  std::size_t index(std::size_t n) const {
    const Value v = integer();
    if (v < 1 || static_cast<std::size_t>(v) > n) fail("expected an index in 1.." + std::to_string(n));
    return static_cast<std::size_t>(v - 1);
  }

  std::string text() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  void reject_unknown(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, _] : node_.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        Field(node_, path_ + "/" + key).fail("unknown field");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
};

GraphPayload parse_graph(const Field& root, ProblemKind kind) {
  if (has_source(kind)) {
    root.reject_unknown({"kind", "n", "edges", "source"});
  } else {
    root.reject_unknown({"kind", "n", "edges"});
  }
  GraphPayload out;
  out.graph.n = static_cast<std::size_t>(root.at("n").integer_at_least(1));
  const bool weighted = kind != ProblemKind::kTransitiveClosure;
  for (const auto& e : root.at("edges").items()) {
    const auto parts = e.items();
    const std::size_t want = weighted ? 3 : 2;
    if (parts.size() != want) {
      e.fail(weighted ? "expected [from, to, weight]" : "expected [from, to]");
    }
    Edge edge{parts[0].index(out.graph.n), parts[1].index(out.graph.n), 1};
    if (weighted) edge.weight = parts[2].integer();
    out.graph.edges.push_back(edge);
  }
  if (has_source(kind)) {
    if (auto s = root.find("source")) out.source = s->index(out.graph.n);
  }
  return out;
}

std::vector<std::vector<std::size_t>> parse_lists(const Field& f) {
  std::vector<std::vector<std::size_t>> out;
  const auto rows = f.items();
  for (const auto& row : rows) {
    std::vector<std::size_t> r;
    for (const auto& x : row.items()) r.push_back(x.index(rows.size()));
    out.push_back(std::move(r));
  }
  return out;
}

MarriagePayload parse_marriage(const Field& root) {
  root.reject_unknown({"kind", "men", "women", "forced"});
  MarriagePayload out;
  out.profile = PreferenceProfile::from_lists(parse_lists(root.at("men")), parse_lists(root.at("women")));
  if (auto f = root.find("forced")) {
    const auto pair = f->items();
    if (pair.size() != 2) f->fail("expected [man, woman]");
    out.forced = std::pair{pair[0].index(out.profile.n), pair[1].index(out.profile.n)};
  }
  return out;
}

CountInstance parse_count(const Field& root) {
  root.reject_unknown({"kind", "a", "c"});
  CountInstance out;
  for (const auto& x : root.at("a").items()) out.a.push_back(x.integer());
  out.c = root.at("c").integer();
  return out;
}

SubsidyInstance parse_subsidy(const Field& root) {
  root.reject_unknown({"kind", "values"});
  SubsidyInstance out;
  for (const auto& row : root.at("values").items()) {
    std::vector<Value> r;
    for (const auto& x : row.items()) r.push_back(x.integer_at_least(0));
    out.values.push_back(std::move(r));
  }
  out.validate();
  return out;
}

json edges_json(const Digraph& g, bool weighted) {
  json out = json::array();
  for (const auto& e : g.edges) {
    if (weighted) {
      out.push_back({e.from + 1, e.to + 1, e.weight});
    } else {
      out.push_back({e.from + 1, e.to + 1});
    }
  }
  return out;
}

json lists_json(const std::vector<std::vector<std::size_t>>& lists) {
  json out = json::array();
  for (const auto& row : lists) {
    json r = json::array();
    for (auto x : row) r.push_back(x + 1);
    out.push_back(std::move(r));
  }
  return out;
}

json distances_json(const std::vector<std::optional<Value>>& d) {
  json out = json::array();
  for (const auto& v : d) {
    if (v) {
      out.push_back(*v);
    } else {
      out.push_back("UNREACHABLE");
    }
  }
  return out;
}

void validate_graph(const GraphPayload& p, ProblemKind kind) {
  p.graph.validate();
  if (kind == ProblemKind::kJohnson || kind == ProblemKind::kTransitiveClosure) return;
  for (const auto& e : p.graph.edges) {
    if (e.weight < 0) {
      throw InvalidInstance(std::string(to_string(kind)) + " needs non-negative weights; edge " +
                            std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1) + " has " +
                            std::to_string(e.weight));
    }
  }
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

const char* to_string(ProblemKind k) {
  for (const auto& [kind, name] : kKinds) {
    if (kind == k) return name;
  }
  return "?";
}

ProblemKind problem_kind_from_name(std::string_view name) {
  for (const auto& [kind, n] : kKinds) {
    if (name == n) return kind;
  }
  throw SchemaError("/kind", "unknown problem kind '" + std::string(name) + "'");
}

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)), e.what());
  }
  const Field root(doc, "");
  root.require_object();
  Instance inst;
  inst.kind = problem_kind_from_name(root.at("kind").text());
  switch (inst.kind) {
    case ProblemKind::kStableMarriage:
      inst.payload = parse_marriage(root);
      break;
    case ProblemKind::kCountGreater:
      inst.payload = parse_count(root);
      break;
    case ProblemKind::kSubsidy:
      inst.payload = parse_subsidy(root);
      break;
    default: {
      auto g = parse_graph(root, inst.kind);
      validate_graph(g, inst.kind);
      inst.payload = std::move(g);
    }
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open instance file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

nlohmann::json instance_to_json(const Instance& inst) {
  json out;
  out["kind"] = to_string(inst.kind);
  if (is_graph_kind(inst.kind)) {
    const auto& p = std::get<GraphPayload>(inst.payload);
    out["n"] = p.graph.n;
    out["edges"] = edges_json(p.graph, inst.kind != ProblemKind::kTransitiveClosure);
    if (has_source(inst.kind)) out["source"] = p.source + 1;
  } else if (inst.kind == ProblemKind::kStableMarriage) {
    const auto& p = std::get<MarriagePayload>(inst.payload);
    out["men"] = lists_json(p.profile.mpref);
    out["women"] = lists_json(p.profile.women_lists());
    if (p.forced) out["forced"] = {p.forced->first + 1, p.forced->second + 1};
  } else if (inst.kind == ProblemKind::kCountGreater) {
    const auto& p = std::get<CountInstance>(inst.payload);
    out["a"] = p.a;
    out["c"] = p.c;
  } else {
    out["values"] = std::get<SubsidyInstance>(inst.payload).values;
  }
  return out;
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

std::uint64_t fingerprint(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : instance_to_json(inst).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

FunctionFamily build_family(const Instance& inst) {
  switch (inst.kind) {
    case ProblemKind::kTransitiveClosure:
      return transitive_closure_family(std::get<GraphPayload>(inst.payload).graph);
    case ProblemKind::kStableMarriage: {
      const auto& p = std::get<MarriagePayload>(inst.payload);
      return stable_marriage_family(p.profile, p.forced);
    }
    case ProblemKind::kEdgeRelaxation: {
      const auto& p = std::get<GraphPayload>(inst.payload);
      return edge_relaxation_family(p.graph, p.source);
    }
    case ProblemKind::kBellmanFord: {
      const auto& p = std::get<GraphPayload>(inst.payload);
      return bellman_ford_family(p.graph, p.source);
    }
    case ProblemKind::kFloydWarshall:
      return floyd_warshall_family(std::get<GraphPayload>(inst.payload).graph);
    case ProblemKind::kJohnson:
      return johnson_family(std::get<GraphPayload>(inst.payload).graph);
    case ProblemKind::kCountGreater:
      return count_greater_family(std::get<CountInstance>(inst.payload));
    case ProblemKind::kSubsidy:
      return subsidy_family(std::get<SubsidyInstance>(inst.payload));
  }
  throw std::logic_error("unhandled problem kind");
}

OracleResult run_oracle(const Instance& inst) {
  OracleResult r;
  r.fingerprint = fingerprint(inst);
  switch (inst.kind) {
    case ProblemKind::kTransitiveClosure: {
      json rows = json::array();
      for (const auto& row : warshall_closure(std::get<GraphPayload>(inst.payload).graph)) {
        json out = json::array();
        for (bool b : row) out.push_back(b ? 1 : 0);
        rows.push_back(std::move(out));
      }
      r.answer = {{"closure", std::move(rows)}};
      r.method = "warshall";
      break;
    }
    case ProblemKind::kStableMarriage: {
      const auto& p = std::get<MarriagePayload>(inst.payload);
      std::optional<std::vector<std::size_t>> m;
      if (p.forced) {
        m = constrained_stable_bruteforce(p.profile, p.forced->first, p.forced->second);
        r.method = "stable-matching-enumeration";
      } else {
        m = gale_shapley_sequential(p.profile);
        r.method = "gale-shapley";
      }
      if (!m) {
        r.answer = {{"status", "INFEASIBLE"}};
      } else {
        json wives = json::array();
        for (auto w : *m) wives.push_back(w + 1);
        r.answer = {{"status", "STABLE"}, {"matching", std::move(wives)}};
      }
      break;
    }
    case ProblemKind::kEdgeRelaxation:
    case ProblemKind::kBellmanFord: {
      const auto& p = std::get<GraphPayload>(inst.payload);
      r.answer = {{"distances", distances_json(shortest_paths_reference(p.graph, p.source))}};
      r.method = "sequential-relaxation";
      break;
    }
    case ProblemKind::kFloydWarshall: {
      json rows = json::array();
      for (const auto& row : all_pairs_reference(std::get<GraphPayload>(inst.payload).graph)) {
        rows.push_back(distances_json(row));
      }
      r.answer = {{"distances", std::move(rows)}};
      r.method = "sequential-relaxation";
      break;
    }
    case ProblemKind::kJohnson: {
      const auto& g = std::get<GraphPayload>(inst.payload).graph;
      r.method = "virtual-source-relaxation";
      try {
        const auto h = johnson_potentials_reference(g);
        json edges = json::array();
        for (const auto& e : g.edges) edges.push_back({e.from + 1, e.to + 1, e.weight + h[e.to] - h[e.from]});
        r.answer = {{"status", "OK"}, {"potentials", h}, {"reweighted", std::move(edges)}};
      } catch (const NegativeCycle&) {
        r.answer = {{"status", "NEGATIVE_CYCLE"}};
      }
      break;
    }
    case ProblemKind::kCountGreater:
      r.answer = {{"count", count_greater_sequential(std::get<CountInstance>(inst.payload))}};
      r.method = "sequential-scan";
      break;
    case ProblemKind::kSubsidy: {
      const auto& s = std::get<SubsidyInstance>(inst.payload);
      r.answer = {{"payments", min_subsidy_bruteforce(s, s.cap())}};
      r.method = "payment-enumeration";
      break;
    }
  }
  return r;
}

}  // namespace lfp
