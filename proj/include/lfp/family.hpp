// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfp/lattice.hpp"

namespace lfp {

/// Problem-level answer produced by a family's decoder.
using Answer = nlohmann::json;

enum class WriteProtocol : std::uint8_t { kPlain, kCompareAndSet };

/// One write an update function wants to perform.
///
/// A compare-and-set write applies only if field `cas_field` of the target
/// coordinate still equals `cas_expected`; writes listed after a CAS in the
/// same batch are conditional on that CAS succeeding.
struct IntendedWrite {
  std::size_t coordinate = 0;
  Tuple value;
  WriteProtocol protocol = WriteProtocol::kPlain;
  std::size_t cas_field = 0;
  Value cas_expected = 0;

  static IntendedWrite plain(std::size_t coord, Tuple v) {
    return {coord, v, WriteProtocol::kPlain, 0, 0};
  }
  static IntendedWrite compare_and_set(std::size_t coord, Tuple v, std::size_t field,
                                       Value expected) {
    return {coord, v, WriteProtocol::kCompareAndSet, field, expected};
  }
  bool is_cas() const noexcept { return protocol == WriteProtocol::kCompareAndSet; }
};

using WriteList = std::vector<IntendedWrite>;

/// Deterministic evaluation rule: reads the observed state (only coordinates in
/// the function's read set) and appends the writes it intends to `out`.
using EvaluateFn = std::function<void(const StateVector& observed, WriteList& out)>;

struct DeclaredProperties {
  bool monotone = true;
  bool inflationary = true;
  bool i_local = true;
};

struct UpdateFunction {
  std::size_t id = 0;
  std::vector<std::size_t> read_set;
  std::vector<std::size_t> write_set;
  EvaluateFn evaluate;
  DeclaredProperties declared;

  bool may_write(std::size_t coord) const;
};

struct FunctionFamily {
  std::string name;
  Bounds bounds;
  std::vector<UpdateFunction> functions;
  StateVector initial;
  std::function<Answer(const StateVector&)> decode;
  /// Optional restriction of the states the declared properties are claimed
  /// on (for example, states where a counter agrees with the bits it counts).
  /// Empty means the whole lattice.
  std::function<bool(const StateVector&)> domain;

  std::size_t function_count() const noexcept { return functions.size(); }
  Answer decode_or_state(const StateVector& s) const;
};

/// Outcome of applying one batch of intended writes atomically.
struct ApplyResult {
  StateVector state;
  bool changed = false;
  bool cas_failed = false;
};

/// Applies f to G atomically, i.e. computes f(G).
ApplyResult apply_function(const UpdateFunction& f, const StateVector& state);

/// Applies an already evaluated write batch to `state` in order.
/// Returns false if a CAS failed (later writes are then skipped).
bool apply_writes(const WriteList& writes, StateVector& state);

/// True if applying the batch to `state` (with CAS semantics) changes nothing.
bool leaves_unchanged(const WriteList& writes, const StateVector& state);

bool is_common_fixed_point(const StateVector& state, const FunctionFamily& family);

/// Throws ContractViolation if `w` targets a coordinate outside f's write set
/// with a value different from the one observed, or leaves the bounds.
void require_write_allowed(const UpdateFunction& f, const IntendedWrite& w, const Bounds& bounds,
                           const StateVector& observed);

/// Validates structural invariants: initial within bounds, function ids match
/// positions, read/write sets in range, i-local functions write only their
/// own coordinate.
void validate_family(const FunctionFamily& family);

/// The same family seen through the all-ascending lattice: DESCENDING fields
/// are flipped v -> max - v in the initial state, in every observed state and
/// in every write. Returns the family unchanged if it is already ascending.
FunctionFamily ascending_image(const FunctionFamily& family);

}  // namespace lfp
