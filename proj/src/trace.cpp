// SPDX-License-Identifier: Apache-2.0
#include "lfp/trace.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lfp/errors.hpp"

namespace lfp {

const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::kConverged: return "CONVERGED";
    case TerminalStatus::kStepLimit: return "STEP_LIMIT";
    case TerminalStatus::kStuckNonFixpoint: return "STUCK_NON_FIXPOINT";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::kRead: return "READ";
    case EventKind::kWrite: return "WRITE";
    case EventKind::kCasFail: return "CAS_FAIL";
    case EventKind::kDeliver: return "DELIVER";
  }
  return "?";
}

const StateVector& ExecutionTrace::state_at(std::size_t t) const {
  auto it = std::upper_bound(state_times.begin(), state_times.end(), t);
  if (it == state_times.begin()) throw StructuralError("trace has no state at time 0");
  return states[static_cast<std::size_t>(it - state_times.begin()) - 1];
}

void ExecutionTrace::commit(std::size_t t, StateVector s) {
  if (!state_times.empty() && state_times.back() == t) {
    states.back() = std::move(s);
    return;
  }
  states.push_back(std::move(s));
  state_times.push_back(t);
}

void restore_orientation(ExecutionTrace& trace, const Bounds& natural) {
  if (natural.all_ascending()) return;
  for (auto& s : trace.states) s = flip_descending(s, natural);
  for (auto& e : trace.events) {
    const auto fields = natural.fields(e.coordinate);
    e.value = flip_descending(e.value, fields);
    if (e.is_cas && fields[e.cas_field].orientation == Orientation::kDescending) {
      e.cas_expected = fields[e.cas_field].max - e.cas_expected;
    }
  }
}

namespace {

std::string describe_state(const char* label, std::size_t t, const StateVector& s) {
  std::ostringstream os;
  os << label << " at time " << t << ": " << s;
  return os.str();
}

bool applied_write(const TraceEvent& e) { return e.kind == EventKind::kWrite; }

}  // namespace

CheckResult check_ascent(const ExecutionTrace& trace, const Bounds& bounds) {
  CheckResult r{"ascent", true, {}};
  for (std::size_t k = 1; k < trace.states.size(); ++k) {
    if (!progress_leq(trace.states[k - 1], trace.states[k], bounds)) {
      r.passed = false;
      std::ostringstream os;
      os << "state at time " << trace.state_times[k] << " " << trace.states[k]
         << " is not >= its predecessor " << trace.states[k - 1];
      r.detail = os.str();
      return r;
    }
  }
  return r;
}

CheckResult check_writes_not_below_round_start(const ExecutionTrace& trace,
                                               const Bounds& bounds) {
  CheckResult r{"writes >= round start", true, {}};
  for (std::size_t k = 0; k < trace.events.size(); ++k) {
    const auto& e = trace.events[k];
    if (!applied_write(e)) continue;
    const auto& start = trace.state_at(e.time);
    if (!progress_leq(start[e.coordinate], e.value, bounds.fields(e.coordinate))) {
      r.passed = false;
      std::ostringstream os;
      os << "event #" << k << ": round " << e.time << " actor " << e.actor << " wrote ["
         << e.value << "] to coordinate " << e.coordinate << " below round start ["
         << start[e.coordinate] << "]";
      r.detail = os.str();
      return r;
    }
  }
  return r;
}

CheckResult check_round_monotone(const ExecutionTrace& trace, const Bounds& bounds) {
  CheckResult r = check_ascent(trace, bounds);
  r.name = "round monotone";
  return r;
}

CheckResult check_unchanged_iff_unwritten(const ExecutionTrace& trace, const Bounds& bounds) {
  (void)bounds;
  CheckResult r{"unchanged iff unwritten", true, {}};
  std::map<std::size_t, std::set<std::size_t>> written;
  std::map<std::size_t, std::size_t> first_event;
  for (std::size_t k = 0; k < trace.events.size(); ++k) {
    const auto& e = trace.events[k];
    if (!applied_write(e)) continue;
    written[e.time].insert(e.coordinate);
    first_event.emplace(e.time, k);
  }
  std::map<std::size_t, std::set<std::size_t>> changed;
  for (std::size_t k = 1; k < trace.states.size(); ++k) {
    const std::size_t round = trace.state_times[k] - 1;
    auto& set = changed[round];
    for (std::size_t j = 0; j < trace.states[k].size(); ++j) {
      if (trace.states[k][j] != trace.states[k - 1][j]) set.insert(j);
    }
  }
  std::set<std::size_t> rounds;
  for (const auto& [t, _] : written) rounds.insert(t);
  for (const auto& [t, _] : changed) rounds.insert(t);
  for (std::size_t t : rounds) {
    const auto& w = written[t];
    const auto& c = changed[t];
    if (w == c) continue;
    r.passed = false;
    std::ostringstream os;
    for (std::size_t j : w) {
      if (!c.count(j)) {
        os << "round " << t << ": coordinate " << j << " written (first record: event #"
           << first_event[t] << ") yet unchanged at [" << trace.state_at(t)[j] << "]";
        r.detail = os.str();
        return r;
      }
    }
    for (std::size_t j : c) {
      if (!w.count(j)) {
        os << "round " << t << ": coordinate " << j << " changed without any applied write";
        r.detail = os.str();
        return r;
      }
    }
  }
  return r;
}

std::vector<CheckResult> check_round_progress(const ExecutionTrace& trace, const Bounds& bounds) {
  return {check_writes_not_below_round_start(trace, bounds), check_round_monotone(trace, bounds),
          check_unchanged_iff_unwritten(trace, bounds)};
}

CheckResult check_dominated_by(const ExecutionTrace& trace, const Bounds& bounds,
                               const StateVector& ceiling) {
  CheckResult r{"dominated by least fixed point", true, {}};
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    if (!progress_leq(trace.states[k], ceiling, bounds)) {
      r.passed = false;
      r.detail = describe_state("state not below the least fixed point", trace.state_times[k],
                                trace.states[k]);
      return r;
    }
  }
  return r;
}

}  // namespace lfp
