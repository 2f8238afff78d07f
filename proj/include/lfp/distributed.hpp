// SPDX-License-Identifier: Apache-2.0
//
// n simulated processes, process i owning coordinate i. Each commits its own
// coordinate from a possibly stale view and broadcasts changes; messages
// arrive within T rounds unless the delay policy withholds them.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "lfp/family.hpp"
#include "lfp/trace.hpp"

namespace lfp {

enum class DelayPolicy { kUniform, kMaxDelay, kAdversarialWithhold };

const char* to_string(DelayPolicy p);

struct StalenessParams {
  /// Staleness bound, in committed rounds.
  std::size_t staleness = 1;
  DelayPolicy policy = DelayPolicy::kUniform;
  std::uint64_t seed = 0;
  /// kAdversarialWithhold: updates of `target` never reach `victims`; every
  /// other message is delivered immediately.
  std::size_t target = 0;
  std::vector<std::size_t> victims;

  static StalenessParams uniform(std::size_t t, std::uint64_t seed) {
    return {t, DelayPolicy::kUniform, seed, 0, {}};
  }
  static StalenessParams max_delay(std::size_t t) { return {t, DelayPolicy::kMaxDelay, 0, 0, {}}; }
  static StalenessParams withhold(std::size_t target, std::vector<std::size_t> victims) {
    return {0, DelayPolicy::kAdversarialWithhold, 0, target, std::move(victims)};
  }
};

struct Message {
  std::size_t coordinate = 0;
  Tuple value;
  std::size_t send_round = 0;
  std::size_t deliver_round = 0;
};

struct ProcessState {
  std::size_t id = 0;
  StateVector view;
  std::vector<Message> inbox;
};

/// Moves every inbox record due by `round` into its recipient's view. Views
/// merge by progress-order join, so late or reordered records never move a
/// view backwards. Returns the delivered records per process when asked.
void deliver_messages(std::vector<ProcessState>& processes, std::size_t round, const Bounds& bounds,
                      std::vector<std::vector<Message>>* delivered = nullptr);

struct QuiescenceReport {
  StateVector terminal;
  /// Round after which the committed state never changed again.
  std::size_t stabilization_round = 0;
  /// Fairness window: every process runs once per `tau` rounds.
  std::size_t tau = 0;
  /// lag -> number of (evaluating process, foreign coordinate) observations.
  std::map<std::size_t, std::size_t> lag_histogram;
  std::size_t max_lag = 0;
  /// Every evaluated view was <= the committed state.
  bool views_dominated = true;
  /// Evaluations at least T rounds after stabilization, and how many of them
  /// saw exactly the terminal state.
  std::size_t late_evaluations = 0;
  std::size_t late_exact = 0;
};

struct DistributedResult {
  ExecutionTrace trace;
  QuiescenceReport report;
};

/// 0 means 4 * (height + 1) * (T + n + 1).
std::size_t default_distributed_limit(const FunctionFamily& family, const StalenessParams& params);

/// Round t: deliver due messages, stop if nothing is in flight and the
/// committed state is a common fixed point, else process t mod n evaluates
/// its function on its view and commits and broadcasts its coordinate if it
/// changed. Requires m = n and every function i-local.
DistributedResult run_distributed(const FunctionFamily& family, const StalenessParams& params,
                                  std::size_t round_limit = 0, const TraceOptions& options = {});

}  // namespace lfp
