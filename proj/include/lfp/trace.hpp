// SPDX-License-Identifier: Apache-2.0
//
// Execution traces shared by the three engines, and the invariant checks that
// audit them after the fact.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lfp/lattice.hpp"

namespace lfp {

enum class TerminalStatus { kConverged, kStepLimit, kStuckNonFixpoint };

const char* to_string(TerminalStatus s);

enum class EventKind : std::uint8_t { kRead, kWrite, kCasFail, kDeliver };

const char* to_string(EventKind k);

/// One intra-step event. `time` is the step (interleaved) or round
/// (parallel, distributed) during which it happened.
struct TraceEvent {
  std::size_t time = 0;
  EventKind kind = EventKind::kWrite;
  std::size_t actor = 0;
  std::size_t coordinate = 0;
  Tuple value;
  bool is_cas = false;
  std::size_t cas_field = 0;
  Value cas_expected = 0;

  bool operator==(const TraceEvent&) const = default;
};

/// Which intra-step events an engine records. Writes and CAS failures are
/// always recorded.
struct TraceOptions {
  bool reads = true;
  bool deliveries = false;
};

/// Committed states are stored sparsely: `states[k]` is G at time
/// `state_times[k]`, and G_t for any t is the last stored state with time
/// <= t. Step or round t turns G_t into G_{t+1}.
struct ExecutionTrace {
  std::vector<StateVector> states;
  std::vector<std::size_t> state_times;
  /// Function indices selected at each step or round.
  std::vector<std::vector<std::size_t>> selected;
  std::vector<TraceEvent> events;
  TerminalStatus status = TerminalStatus::kStepLimit;
  /// Steps or rounds executed.
  std::size_t time_units = 0;

  const StateVector& initial() const { return states.front(); }
  const StateVector& terminal() const { return states.back(); }
  const StateVector& state_at(std::size_t t) const;
  void commit(std::size_t t, StateVector s);
};

/// Rewrites a trace recorded on the ascending image back into natural values.
void restore_orientation(ExecutionTrace& trace, const Bounds& natural);

/// Result of one trace invariant check.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first violation, if any
};

/// G_t <= G_{t+1} for every consecutive pair of committed states.
CheckResult check_ascent(const ExecutionTrace& trace, const Bounds& bounds);

/// Every applied write to coordinate j during round t carries a value
/// >= G_t[j].
CheckResult check_writes_not_below_round_start(const ExecutionTrace& trace, const Bounds& bounds);

/// G_{t+1} >= G_t componentwise for every round.
CheckResult check_round_monotone(const ExecutionTrace& trace, const Bounds& bounds);

/// G_{t+1}[j] == G_t[j] iff no applied write touched j in round t.
CheckResult check_unchanged_iff_unwritten(const ExecutionTrace& trace, const Bounds& bounds);

/// The three round-progress checks above, in order.
std::vector<CheckResult> check_round_progress(const ExecutionTrace& trace, const Bounds& bounds);

/// Every committed state is <= `ceiling` (normally the oracle least common
/// fixed point).
CheckResult check_dominated_by(const ExecutionTrace& trace, const Bounds& bounds,
                               const StateVector& ceiling);

}  // namespace lfp
