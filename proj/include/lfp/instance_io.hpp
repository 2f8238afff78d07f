// SPDX-License-Identifier: Apache-2.0
//
// Instance files: one JSON object with a "kind" tag and a kind-specific
// payload. Vertices, men, women and agents are 1-based in files.
//
//   {"kind": "transitive_closure", "n": 3, "edges": [[1,2],[2,3]]}
//   {"kind": "edge_relaxation", "n": 3, "source": 1, "edges": [[1,2,5],[2,3,2]]}
//   {"kind": "stable_marriage", "men": [[1,2],[1,2]], "women": [[2,1],[1,2]],
//    "forced": [1,2]}
//   {"kind": "count_greater", "a": [5,1,7], "c": 4}
//   {"kind": "subsidy", "values": [[1,3],[0,2]]}
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "lfp/family.hpp"
#include "lfp/oracles.hpp"
#include "lfp/problems.hpp"

namespace lfp {

enum class ProblemKind {
  kTransitiveClosure,
  kStableMarriage,
  kEdgeRelaxation,
  kBellmanFord,
  kFloydWarshall,
  kJohnson,
  kCountGreater,
  kSubsidy,
};

const char* to_string(ProblemKind k);
/// Throws SchemaError for an unknown tag.
ProblemKind problem_kind_from_name(std::string_view name);

struct GraphPayload {
  Digraph graph;
  std::size_t source = 0;  // used by edge_relaxation and bellman_ford

  bool operator==(const GraphPayload&) const = default;
};

struct MarriagePayload {
  PreferenceProfile profile;
  std::optional<std::pair<std::size_t, std::size_t>> forced;

  bool operator==(const MarriagePayload&) const = default;
};

struct Instance {
  ProblemKind kind = ProblemKind::kTransitiveClosure;
  std::variant<GraphPayload, MarriagePayload, CountInstance, SubsidyInstance> payload;

  bool operator==(const Instance&) const = default;
};

/// Malformed instance text. `where` is "line N" for syntax errors and a JSON
/// pointer such as "/edges/2/0" for field errors.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string where, const std::string& message)
      : std::invalid_argument(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Parses and validates. Throws SchemaError for malformed text or fields and
/// InvalidInstance when the payload breaks a builder precondition.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

/// FNV-1a over the compact serialization.
std::uint64_t fingerprint(const Instance& inst);

FunctionFamily build_family(const Instance& inst);

/// The answer from the matching sequential or brute-force oracle, in the same
/// JSON shape the family's decoder produces.
OracleResult run_oracle(const Instance& inst);

}  // namespace lfp
