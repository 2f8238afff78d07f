// SPDX-License-Identifier: Apache-2.0
#include "lfp/distributed.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>

#include "lfp/errors.hpp"

namespace lfp {

const char* to_string(DelayPolicy p) {
  switch (p) {
    case DelayPolicy::kUniform: return "uniform";
    case DelayPolicy::kMaxDelay: return "max-delay";
    case DelayPolicy::kAdversarialWithhold: return "withhold";
  }
  return "?";
}

void deliver_messages(std::vector<ProcessState>& processes, std::size_t round, const Bounds& bounds,
                      std::vector<std::vector<Message>>* delivered) {
  if (delivered) delivered->assign(processes.size(), {});
  for (std::size_t p = 0; p < processes.size(); ++p) {
    auto& proc = processes[p];
    auto due = std::stable_partition(proc.inbox.begin(), proc.inbox.end(),
                                     [round](const Message& m) { return m.deliver_round > round; });
    for (auto it = due; it != proc.inbox.end(); ++it) {
      auto& slot = proc.view[it->coordinate];
      slot = progress_join(slot, it->value, bounds.fields(it->coordinate));
      if (delivered) (*delivered)[p].push_back(*it);
    }
    proc.inbox.erase(due, proc.inbox.end());
  }
}

std::size_t default_distributed_limit(const FunctionFamily& family, const StalenessParams& params) {
  const auto height = static_cast<std::size_t>(std::max<Value>(family.bounds.height(), 0));
  return 4 * (height + 1) * (params.staleness + family.bounds.size() + 1);
}

namespace {

// Per-coordinate commit history: (round the value appeared, value).
using History = std::vector<std::pair<std::size_t, Tuple>>;

// Rounds since `value` stopped being the committed value of its coordinate
// (0 while it is still current).
std::optional<std::size_t> lag_of(const History& h, const Tuple& value, std::size_t t) {
  for (std::size_t k = h.size(); k-- > 0;) {
    if (h[k].second != value) continue;
    if (k + 1 == h.size()) return 0;
    return t + 1 - h[k + 1].first;
  }
  return std::nullopt;
}

void require_owned(const FunctionFamily& family) {
  const std::size_t n = family.bounds.size();
  if (family.function_count() != n) {
    throw ContractViolation("distributed execution needs one function per coordinate, got " +
                            std::to_string(family.function_count()) + " for " + std::to_string(n));
  }
  for (const auto& f : family.functions) {
    if (f.write_set.size() != 1 || f.write_set[0] != f.id) {
      throw ContractViolation("f" + std::to_string(f.id) + " is not i-local");
    }
  }
}

}  // namespace

DistributedResult run_distributed(const FunctionFamily& family, const StalenessParams& params,
                                  std::size_t round_limit, const TraceOptions& options) {
  validate_family(family);
  require_owned(family);
  const FunctionFamily img = ascending_image(family);
  const std::size_t n = img.bounds.size();
  const std::size_t limit = round_limit ? round_limit : default_distributed_limit(family, params);
  const std::size_t T = params.policy == DelayPolicy::kAdversarialWithhold ? 0 : params.staleness;

  std::vector<bool> victim(n, false);
  for (auto v : params.victims) {
    if (v >= n) throw StructuralError("withhold victim " + std::to_string(v) + " out of range");
    victim[v] = true;
  }
  std::mt19937_64 rng(params.seed);
  auto delay_for = [&](std::size_t coord, std::size_t recipient) -> std::optional<std::size_t> {
    switch (params.policy) {
      case DelayPolicy::kUniform: return std::uniform_int_distribution<std::size_t>(0, T)(rng);
      case DelayPolicy::kMaxDelay: return T;
      case DelayPolicy::kAdversarialWithhold:
        if (coord == params.target && victim[recipient]) return std::nullopt;
        return 0;
    }
    return 0;
  };

  StateVector g = img.initial;
  std::vector<ProcessState> procs(n);
  for (std::size_t i = 0; i < n; ++i) procs[i] = {i, g, {}};
  std::vector<History> history(n);
  for (std::size_t j = 0; j < n; ++j) history[j].emplace_back(0, g[j]);

  DistributedResult result;
  auto& trace = result.trace;
  auto& report = result.report;
  report.tau = n;
  trace.commit(0, g);
  trace.status = TerminalStatus::kStepLimit;

  std::size_t in_flight = 0;
  std::size_t version = 0;
  std::size_t checked_version = std::numeric_limits<std::size_t>::max();
  bool fixed = false;
  std::vector<std::pair<std::size_t, bool>> evaluations;  // (round, view == G_t)
  std::vector<std::vector<Message>> delivered;

  std::size_t t = 0;
  for (;; ++t) {
    deliver_messages(procs, t, img.bounds, options.deliveries ? &delivered : nullptr);
    if (options.deliveries) {
      for (std::size_t p = 0; p < n; ++p) {
        for (const auto& msg : delivered[p]) {
          trace.events.push_back({t, EventKind::kDeliver, p, msg.coordinate, msg.value});
        }
      }
    }
    in_flight = 0;
    for (const auto& p : procs) in_flight += p.inbox.size();

    if (checked_version != version) {
      fixed = is_common_fixed_point(g, img);
      checked_version = version;
    }
    if (in_flight == 0 && fixed) {
      bool views_current = true;
      for (const auto& p : procs) views_current = views_current && p.view == g;
      if (views_current) {
        trace.status = TerminalStatus::kConverged;
        break;
      }
    }
    if (t == limit) break;

    const std::size_t i = t % n;
    auto& proc = procs[i];
    const auto& f = img.functions[i];
    trace.selected.push_back({i});

    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (auto lag = lag_of(history[j], proc.view[j], t)) {
        ++report.lag_histogram[*lag];
        report.max_lag = std::max(report.max_lag, *lag);
      } else {
        report.views_dominated = false;  // a value that was never committed
      }
    }
    if (!progress_leq(proc.view, g, img.bounds)) report.views_dominated = false;
    evaluations.emplace_back(t, proc.view == g);
    if (options.reads) {
      for (auto c : f.read_set) trace.events.push_back({t, EventKind::kRead, i, c, proc.view[c]});
    }

    WriteList writes;
    f.evaluate(proc.view, writes);
    StateVector local = proc.view;
    for (const auto& w : writes) require_write_allowed(f, w, img.bounds, proc.view);
    apply_writes(writes, local);
    if (local[i] == g[i]) continue;

    g[i] = local[i];
    proc.view[i] = local[i];
    ++version;
    history[i].emplace_back(t + 1, g[i]);
    trace.commit(t + 1, g);
    trace.events.push_back({t, EventKind::kWrite, i, i, g[i]});
    for (std::size_t r = 0; r < n; ++r) {
      if (r == i) continue;
      if (auto d = delay_for(i, r)) procs[r].inbox.push_back({i, g[i], t + 1, t + 1 + *d});
    }
  }
  trace.time_units = t;

  report.stabilization_round = trace.state_times.back();
  for (const auto& [round, exact] : evaluations) {
    if (round < report.stabilization_round + T) continue;
    ++report.late_evaluations;
    if (exact) ++report.late_exact;
  }
  restore_orientation(trace, family.bounds);
  report.terminal = trace.terminal();
  return result;
}

}  // namespace lfp
