// SPDX-License-Identifier: Apache-2.0
//
// One atomic function application per step under a fair scheduler.
#pragma once

#include <cstddef>
#include <cstdint>

#include "lfp/family.hpp"
#include "lfp/trace.hpp"

namespace lfp {

enum class SchedulePolicy { kRoundRobin, kSeededRandom };

struct FairSchedule {
  SchedulePolicy policy = SchedulePolicy::kRoundRobin;
  std::uint64_t seed = 0;
  /// SEEDED_RANDOM only: an index not selected for `window` steps is forced
  /// next. 0 means 4m; values below m are raised to m.
  std::size_t window = 0;
  /// 0 means 4 * max(height, 1) * max(m, 1).
  std::size_t step_limit = 0;

  static FairSchedule round_robin() { return {}; }
  static FairSchedule seeded_random(std::uint64_t seed, std::size_t window = 0) {
    return {SchedulePolicy::kSeededRandom, seed, window, 0};
  }
};

std::size_t default_step_limit(const FunctionFamily& family);

/// Runs G_{t+1} = f_{i_t}(G_t) until every index has been applied with no
/// change since the last change (CONVERGED) or the step limit is hit. The
/// trace is in the family's natural values.
ExecutionTrace run_interleaved(const FunctionFamily& family, const FairSchedule& schedule,
                               const TraceOptions& options = {});

/// Applies only f_{fixed_index}. Stops as soon as an application changes
/// nothing: CONVERGED if that state is a common fixed point, otherwise
/// STUCK_NON_FIXPOINT. STEP_LIMIT after `steps` applications.
ExecutionTrace run_with_unfair_schedule(const FunctionFamily& family, std::size_t fixed_index,
                                        std::size_t steps, const TraceOptions& options = {});

}  // namespace lfp
