// SPDX-License-Identifier: Apache-2.0
//
// Non-interleaving rounds: every active function reads coordinates one at a
// time while the other functions of the round are writing, then issues its
// writes; the last write to a coordinate wins.
#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "lfp/family.hpp"
#include "lfp/trace.hpp"

namespace lfp {

enum class WriteMode { kUpdateOnChange, kNaive };

const char* to_string(WriteMode m);

/// How the events of one round are interleaved.
///
/// kRandom picks a random function with a pending event, then one of its
/// pending events. kReadsFirst performs every read before any write (a
/// Jacobi snapshot). kStaleWins also reads first, then orders writes so the
/// smallest value for each coordinate lands last; it is the adversary that
/// exposes stale overwrites.
enum class IntraPolicy { kRandom, kReadsFirst, kStaleWins };

const char* to_string(IntraPolicy p);

struct IntraRoundSchedule {
  IntraPolicy policy = IntraPolicy::kRandom;
  std::uint64_t seed = 0;
};

enum class Participation { kAll, kSeededSubset };

struct RoundPlan {
  Participation policy = Participation::kAll;
  /// SEEDED_SUBSET: every index runs at least once per `window` rounds.
  std::size_t window = 4;

  static RoundPlan all() { return {}; }
  static RoundPlan seeded_subset(std::size_t window = 4) {
    return {Participation::kSeededSubset, window};
  }
};

struct WriteEvent {
  std::size_t function = 0;
  std::size_t coordinate = 0;
  Tuple value;
  bool is_cas = false;
  std::size_t cas_field = 0;
  Value cas_expected = 0;
  bool applied = false;
};

struct RoundOutcome {
  StateVector next;
  std::vector<WriteEvent> writes;  // in application order
  std::vector<TraceEvent> events;
  /// Functions whose CAS failed; they must run again next round.
  std::vector<std::size_t> retry;
};

/// Executes one round from `g` with the functions in `active`.
///
/// Writes after a CAS in a function's batch are held until the CAS applies
/// and are dropped if it fails. In kUpdateOnChange mode a plain write is
/// issued only if it differs from the value the function read; in kNaive
/// mode every function reads and writes back its whole computed vector.
/// Throws ContractViolation for a write outside a function's write set.
RoundOutcome execute_round(const StateVector& g, std::span<const std::size_t> active,
                           const FunctionFamily& family, const IntraRoundSchedule& intra,
                           WriteMode mode, std::size_t round = 0, const TraceOptions& options = {});

struct ParallelConfig {
  RoundPlan plan;
  IntraPolicy intra = IntraPolicy::kRandom;
  std::uint64_t seed = 0;
  WriteMode mode = WriteMode::kUpdateOnChange;
  /// 0 means 4 * max(height, 1) * W + W, with W = 1 for plan ALL.
  std::size_t round_limit = 0;
};

std::size_t default_round_limit(const FunctionFamily& family, const RoundPlan& plan);

/// Iterates rounds until the committed state is a common fixed point
/// (CONVERGED) or the round limit is hit (STEP_LIMIT).
ExecutionTrace run_parallel(const FunctionFamily& family, const ParallelConfig& config,
                            const TraceOptions& options = {});

/// Upper bound on the schedules enumerate_round_outcomes is willing to visit.
inline constexpr long double kEnumerationLimit = 1e6L;

/// Every G_{t+1} reachable from `g` over all interleavings of the round.
/// Throws SearchSpaceTooLarge when the estimated number of interleavings
/// exceeds kEnumerationLimit.
std::set<StateVector> enumerate_round_outcomes(const StateVector& g,
                                               std::span<const std::size_t> active,
                                               const FunctionFamily& family, WriteMode mode);

/// Real shared memory: one std::thread per function, rounds delimited by a
/// barrier, each coordinate packed into one atomic 64-bit cell. Only
/// committed states are traced; the outcome is nondeterministic in general.
/// Throws StructuralError if a coordinate does not fit in 64 bits.
ExecutionTrace run_parallel_threaded(const FunctionFamily& family, WriteMode mode,
                                     std::size_t round_limit = 0);

}  // namespace lfp
