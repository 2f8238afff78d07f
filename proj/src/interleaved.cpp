// SPDX-License-Identifier: Apache-2.0
#include "lfp/interleaved.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "lfp/errors.hpp"

namespace lfp {

std::size_t default_step_limit(const FunctionFamily& family) {
  const auto height = static_cast<std::size_t>(std::max<Value>(family.bounds.height(), 1));
  return 4 * height * std::max<std::size_t>(family.function_count(), 1);
}

namespace {

class Scheduler {
 public:
  Scheduler(const FairSchedule& s, std::size_t m)
      : schedule_(s), m_(m), rng_(s.seed), last_(m, 0) {
    window_ = s.window == 0 ? 4 * m : std::max(s.window, m);
  }

  std::size_t next(std::size_t step) {
    std::size_t pick = 0;
    if (schedule_.policy == SchedulePolicy::kRoundRobin) {
      pick = step % m_;
    } else {
      // last_ holds step + 1 of the latest selection, so 0 means never, and
      // index i must run again by step last_[i] + window. Ordered oldest
      // first, the k-th index is due within k + 1 steps at the latest; when
      // one is that tight the oldest runs now.
      std::vector<std::size_t> order(m_);
      for (std::size_t i = 0; i < m_; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return last_[a] < last_[b]; });
      bool tight = false;
      for (std::size_t k = 0; k < m_ && !tight; ++k) tight = last_[order[k]] + window_ <= step + 1 + k;
      pick = tight ? order.front() : std::uniform_int_distribution<std::size_t>(0, m_ - 1)(rng_);
    }
    last_[pick] = step + 1;
    return pick;
  }

 private:
  FairSchedule schedule_;
  std::size_t m_;
  std::size_t window_ = 0;
  std::mt19937_64 rng_;
  std::vector<std::size_t> last_;
};

// Applies f atomically and records the step. Returns true on change.
bool step_once(const FunctionFamily& img, const UpdateFunction& f, std::size_t t, StateVector& g,
               ExecutionTrace& trace, const TraceOptions& options) {
  if (options.reads) {
    for (auto c : f.read_set) trace.events.push_back({t, EventKind::kRead, f.id, c, g[c]});
  }
  WriteList writes;
  f.evaluate(g, writes);
  StateVector next = g;
  for (const auto& w : writes) {
    require_write_allowed(f, w, img.bounds, g);
    if (w.is_cas() && next[w.coordinate][w.cas_field] != w.cas_expected) {
      trace.events.push_back({t, EventKind::kCasFail, f.id, w.coordinate, w.value, true,
                              w.cas_field, w.cas_expected});
      break;
    }
    next[w.coordinate] = w.value;
    trace.events.push_back(
        {t, EventKind::kWrite, f.id, w.coordinate, w.value, w.is_cas(), w.cas_field, w.cas_expected});
  }
  trace.selected.push_back({f.id});
  if (next == g) return false;
  g = std::move(next);
  trace.commit(t + 1, g);
  return true;
}

}  // namespace

ExecutionTrace run_interleaved(const FunctionFamily& family, const FairSchedule& schedule,
                               const TraceOptions& options) {
  validate_family(family);
  const FunctionFamily img = ascending_image(family);
  const std::size_t m = img.function_count();
  const std::size_t limit = schedule.step_limit ? schedule.step_limit : default_step_limit(family);

  ExecutionTrace trace;
  StateVector g = img.initial;
  trace.commit(0, g);
  trace.status = TerminalStatus::kStepLimit;
  if (m == 0) {
    trace.status = TerminalStatus::kConverged;
  } else {
    Scheduler scheduler(schedule, m);
    std::vector<bool> quiet(m, false);
    std::size_t quiet_count = 0;
    std::size_t t = 0;
    for (; t < limit; ++t) {
      const std::size_t i = scheduler.next(t);
      if (step_once(img, img.functions[i], t, g, trace, options)) {
        std::fill(quiet.begin(), quiet.end(), false);
        quiet_count = 0;
      } else if (!quiet[i]) {
        quiet[i] = true;
        ++quiet_count;
      }
      if (quiet_count == m) {
        ++t;
        trace.status = TerminalStatus::kConverged;
        break;
      }
    }
    trace.time_units = t;
  }
  restore_orientation(trace, family.bounds);
  return trace;
}

ExecutionTrace run_with_unfair_schedule(const FunctionFamily& family, std::size_t fixed_index,
                                        std::size_t steps, const TraceOptions& options) {
  validate_family(family);
  if (fixed_index >= family.function_count()) {
    throw StructuralError("unfair schedule: no function with index " + std::to_string(fixed_index));
  }
  const FunctionFamily img = ascending_image(family);
  const auto& f = img.functions[fixed_index];

  ExecutionTrace trace;
  StateVector g = img.initial;
  trace.commit(0, g);
  trace.status = TerminalStatus::kStepLimit;
  std::size_t t = 0;
  for (; t < steps; ++t) {
    if (!step_once(img, f, t, g, trace, options)) {
      ++t;
      trace.status = is_common_fixed_point(g, img) ? TerminalStatus::kConverged
                                                   : TerminalStatus::kStuckNonFixpoint;
      break;
    }
  }
  trace.time_units = t;
  restore_orientation(trace, family.bounds);
  return trace;
}

}  // namespace lfp
