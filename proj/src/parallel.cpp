// SPDX-License-Identifier: Apache-2.0
#include "lfp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "lfp/errors.hpp"

namespace lfp {

const char* to_string(WriteMode m) {
  return m == WriteMode::kNaive ? "naive" : "update-on-change";
}

const char* to_string(IntraPolicy p) {
  switch (p) {
    case IntraPolicy::kRandom: return "random";
    case IntraPolicy::kReadsFirst: return "snapshot";
    case IntraPolicy::kStaleWins: return "adversarial";
  }
  return "?";
}

namespace {

constexpr std::size_t kNoGate = std::numeric_limits<std::size_t>::max();

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t round, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(round >> 32),
                    stream};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t{out[0]} << 32) | out[1];
}

struct PendingWrite {
  IntendedWrite write;
  std::size_t gate = kNoGate;  // index of the CAS this write waits for
  bool done = false;
};

// One active function inside a round.
struct Worker {
  const UpdateFunction* f = nullptr;
  std::vector<std::size_t> pending_reads;
  StateVector observed;
  bool computed = false;
  bool cancelled = false;
  std::vector<PendingWrite> writes;

  bool write_eligible(std::size_t k) const {
    const auto& w = writes[k];
    return !cancelled && !w.done && (w.gate == kNoGate || writes[w.gate].done);
  }
  bool has_pending() const {
    if (!pending_reads.empty()) return true;
    for (std::size_t k = 0; k < writes.size(); ++k) {
      if (write_eligible(k)) return true;
    }
    return false;
  }
};

// Round state shared by the simulator and the exhaustive enumerator.
struct RoundSim {
  const FunctionFamily* family = nullptr;
  WriteMode mode = WriteMode::kUpdateOnChange;
  std::size_t round = 0;
  bool record_reads = false;
  const StateVector* start = nullptr;
  StateVector current;
  std::vector<Worker> workers;
  std::vector<TraceEvent> events;
  std::vector<WriteEvent> writes;
  std::vector<std::size_t> retry;

  RoundSim(const StateVector& g, std::span<const std::size_t> active, const FunctionFamily& fam,
           WriteMode m, std::size_t t, bool reads)
      : family(&fam), mode(m), round(t), record_reads(reads), start(&g), current(g) {
    workers.reserve(active.size());
    for (auto id : active) {
      if (id >= fam.function_count()) {
        throw StructuralError("round plan names a missing function " + std::to_string(id));
      }
      Worker w;
      w.f = &fam.functions[id];
      if (mode == WriteMode::kNaive) {
        for (std::size_t c = 0; c < g.size(); ++c) w.pending_reads.push_back(c);
      } else {
        w.pending_reads = w.f->read_set;
      }
      workers.push_back(std::move(w));
    }
  }

  // Turns the function's intended writes into the round's write events.
  void compute(Worker& w, const StateVector& observed) {
    WriteList intended;
    w.f->evaluate(observed, intended);
    for (const auto& iw : intended) require_write_allowed(*w.f, iw, family->bounds, observed);
    w.computed = true;
    if (mode == WriteMode::kNaive) {
      StateVector full = observed;
      for (const auto& iw : intended) full[iw.coordinate] = iw.value;
      for (std::size_t c = 0; c < full.size(); ++c) {
        w.writes.push_back({IntendedWrite::plain(c, full[c]), kNoGate, false});
      }
      return;
    }
    std::size_t gate = kNoGate;
    for (const auto& iw : intended) {
      if (!iw.is_cas() && iw.value == observed[iw.coordinate]) continue;
      w.writes.push_back({iw, gate, false});
      if (iw.is_cas()) gate = w.writes.size() - 1;
    }
  }

  void read(Worker& w, std::size_t slot) {
    const std::size_t c = w.pending_reads[slot];
    w.pending_reads.erase(w.pending_reads.begin() + static_cast<std::ptrdiff_t>(slot));
    if (w.observed.size() == 0) w.observed = *start;
    w.observed[c] = current[c];
    if (record_reads) events.push_back({round, EventKind::kRead, w.f->id, c, current[c]});
    if (w.pending_reads.empty()) compute(w, w.observed);
  }

  void write(Worker& w, std::size_t k) {
    auto& pw = w.writes[k];
    pw.done = true;
    const auto& iw = pw.write;
    WriteEvent we{w.f->id, iw.coordinate, iw.value, iw.is_cas(), iw.cas_field, iw.cas_expected, true};
    if (iw.is_cas() && current[iw.coordinate][iw.cas_field] != iw.cas_expected) {
      we.applied = false;
      w.cancelled = true;
      retry.push_back(w.f->id);
      events.push_back({round, EventKind::kCasFail, w.f->id, iw.coordinate, iw.value, true,
                        iw.cas_field, iw.cas_expected});
    } else {
      current[iw.coordinate] = iw.value;
      events.push_back({round, EventKind::kWrite, w.f->id, iw.coordinate, iw.value, iw.is_cas(),
                        iw.cas_field, iw.cas_expected});
    }
    writes.push_back(std::move(we));
  }

  // Functions that read nothing compute on the round-start state.
  void compute_readless() {
    for (auto& w : workers) {
      if (!w.computed && w.pending_reads.empty()) compute(w, current);
    }
  }

  void all_reads_in_order() {
    compute_readless();
    for (auto& w : workers) {
      while (!w.pending_reads.empty()) read(w, 0);
    }
  }
};

void run_random(RoundSim& sim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  sim.compute_readless();
  std::vector<std::size_t> live;
  std::vector<std::size_t> choices;
  for (;;) {
    live.clear();
    for (std::size_t k = 0; k < sim.workers.size(); ++k) {
      if (sim.workers[k].has_pending()) live.push_back(k);
    }
    if (live.empty()) return;
    Worker& w = sim.workers[live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)]];
    if (!w.pending_reads.empty()) {
      sim.read(w, std::uniform_int_distribution<std::size_t>(0, w.pending_reads.size() - 1)(rng));
      continue;
    }
    choices.clear();
    for (std::size_t k = 0; k < w.writes.size(); ++k) {
      if (w.write_eligible(k)) choices.push_back(k);
    }
    sim.write(w, choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)]);
  }
}

void run_reads_first(RoundSim& sim, const StateVector& g) {
  // Nothing is written before the last read, so every function observes g.
  for (auto& w : sim.workers) {
    if (sim.record_reads) {
      for (auto c : w.pending_reads) sim.events.push_back({sim.round, EventKind::kRead, w.f->id, c, g[c]});
    }
    w.pending_reads.clear();
    sim.compute(w, g);
  }
  for (auto& w : sim.workers) {
    for (std::size_t k = 0; k < w.writes.size(); ++k) {
      if (w.write_eligible(k)) sim.write(w, k);
    }
  }
}

void run_stale_wins(RoundSim& sim) {
  sim.all_reads_in_order();
  const auto& bounds = sim.family->bounds;
  for (;;) {
    Worker* best = nullptr;
    std::size_t best_k = 0;
    Value best_weight = 0;
    for (auto& w : sim.workers) {
      for (std::size_t k = 0; k < w.writes.size(); ++k) {
        if (!w.write_eligible(k)) continue;
        const auto& iw = w.writes[k].write;
        const Value weight = progress_weight(iw.value, bounds.fields(iw.coordinate));
        if (!best || weight > best_weight) {
          best = &w;
          best_k = k;
          best_weight = weight;
        }
      }
    }
    if (!best) return;
    sim.write(*best, best_k);
  }
}

RoundOutcome finish(RoundSim&& sim) {
  return {std::move(sim.current), std::move(sim.writes), std::move(sim.events), std::move(sim.retry)};
}

}  // namespace

RoundOutcome execute_round(const StateVector& g, std::span<const std::size_t> active,
                           const FunctionFamily& family, const IntraRoundSchedule& intra,
                           WriteMode mode, std::size_t round, const TraceOptions& options) {
  family.bounds.require_contains(g);
  RoundSim sim(g, active, family, mode, round, options.reads);
  switch (intra.policy) {
    case IntraPolicy::kRandom: run_random(sim, intra.seed); break;
    case IntraPolicy::kReadsFirst: run_reads_first(sim, g); break;
    case IntraPolicy::kStaleWins: run_stale_wins(sim); break;
  }
  return finish(std::move(sim));
}

std::size_t default_round_limit(const FunctionFamily& family, const RoundPlan& plan) {
  const auto height = static_cast<std::size_t>(std::max<Value>(family.bounds.height(), 1));
  const std::size_t w = plan.policy == Participation::kAll ? 1 : std::max<std::size_t>(plan.window, 1);
  return 4 * height * w + w;
}

namespace {

class PlanSelector {
 public:
  PlanSelector(const RoundPlan& plan, std::size_t m, std::uint64_t seed)
      : plan_(plan), m_(m), rng_(seed), idle_(m, 0) {}

  std::vector<std::size_t> select() {
    std::vector<std::size_t> out;
    if (plan_.policy == Participation::kAll) {
      for (std::size_t i = 0; i < m_; ++i) out.push_back(i);
      return out;
    }
    const std::size_t window = std::max<std::size_t>(plan_.window, 1);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < m_; ++i) {
      if (coin(rng_) || idle_[i] + 1 >= window) out.push_back(i);
    }
    if (out.empty()) out.push_back(std::uniform_int_distribution<std::size_t>(0, m_ - 1)(rng_));
    std::vector<bool> in(m_, false);
    for (auto i : out) in[i] = true;
    for (std::size_t i = 0; i < m_; ++i) idle_[i] = in[i] ? 0 : idle_[i] + 1;
    return out;
  }

 private:
  RoundPlan plan_;
  std::size_t m_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> idle_;
};

}  // namespace

ExecutionTrace run_parallel(const FunctionFamily& family, const ParallelConfig& config,
                            const TraceOptions& options) {
  validate_family(family);
  const FunctionFamily img = ascending_image(family);
  const std::size_t m = img.function_count();
  const std::size_t limit =
      config.round_limit ? config.round_limit : default_round_limit(family, config.plan);

  ExecutionTrace trace;
  StateVector g = img.initial;
  trace.commit(0, g);
  PlanSelector selector(config.plan, m, derive_seed(config.seed, 0, 1));
  std::vector<std::size_t> retry;
  std::size_t t = 0;
  for (;; ++t) {
    if (is_common_fixed_point(g, img)) {
      trace.status = TerminalStatus::kConverged;
      break;
    }
    if (t == limit) {
      trace.status = TerminalStatus::kStepLimit;
      break;
    }
    std::vector<std::size_t> active = selector.select();
    for (auto r : retry) {
      if (std::find(active.begin(), active.end(), r) == active.end()) active.push_back(r);
    }
    std::sort(active.begin(), active.end());
    const IntraRoundSchedule intra{config.intra, derive_seed(config.seed, t, 2)};
    RoundOutcome out = execute_round(g, active, img, intra, config.mode, t, options);
    trace.events.insert(trace.events.end(), std::make_move_iterator(out.events.begin()),
                        std::make_move_iterator(out.events.end()));
    trace.selected.push_back(std::move(active));
    retry = std::move(out.retry);
    if (out.next != g) {
      g = std::move(out.next);
      trace.commit(t + 1, g);
    }
  }
  trace.time_units = t;
  restore_orientation(trace, family.bounds);
  return trace;
}

namespace {

long double factorial(std::size_t k) {
  long double r = 1;
  for (std::size_t i = 2; i <= k; ++i) r *= static_cast<long double>(i);
  return r;
}

void explore(const RoundSim& sim, std::set<StateVector>& out) {
  bool any = false;
  for (std::size_t wi = 0; wi < sim.workers.size(); ++wi) {
    const Worker& w = sim.workers[wi];
    if (!w.pending_reads.empty()) {
      for (std::size_t slot = 0; slot < w.pending_reads.size(); ++slot) {
        any = true;
        RoundSim next = sim;
        next.read(next.workers[wi], slot);
        explore(next, out);
      }
      continue;
    }
    for (std::size_t k = 0; k < w.writes.size(); ++k) {
      if (!w.write_eligible(k)) continue;
      any = true;
      RoundSim next = sim;
      next.write(next.workers[wi], k);
      explore(next, out);
    }
  }
  if (!any) out.insert(sim.current);
}

}  // namespace

std::set<StateVector> enumerate_round_outcomes(const StateVector& g,
                                               std::span<const std::size_t> active,
                                               const FunctionFamily& family, WriteMode mode) {
  family.bounds.require_contains(g);
  RoundSim root(g, active, family, mode, 0, false);

  // Interleavings of independent event sequences, with reads and writes
  // free to permute within each function.
  std::size_t total = 0;
  long double denominator = 1;
  long double inner = 1;
  for (const auto& w : root.workers) {
    RoundSim probe(g, std::span<const std::size_t>(&w.f->id, 1), family, mode, 0, false);
    probe.compute(probe.workers[0], g);
    const std::size_t r = w.pending_reads.size();
    const std::size_t wr = probe.workers[0].writes.size();
    total += r + wr;
    denominator *= factorial(r + wr);
    inner *= factorial(r) * factorial(wr);
  }
  const long double estimate = factorial(total) / denominator * inner;
  if (estimate > kEnumerationLimit) {
    std::ostringstream os;
    os << "round enumeration would visit about " << static_cast<double>(estimate)
       << " schedules (limit " << static_cast<double>(kEnumerationLimit) << ")";
    throw SearchSpaceTooLarge(os.str(), estimate);
  }

  std::set<StateVector> out;
  root.compute_readless();
  explore(root, out);
  return out;
}

namespace {

// Bit layout of one coordinate inside a 64-bit cell.
struct CellLayout {
  std::vector<int> width;

  explicit CellLayout(std::span<const FieldSpec> fields) {
    int used = 0;
    for (const auto& f : fields) {
      width.push_back(std::bit_width(static_cast<std::uint64_t>(f.max)));
      used += width.back();
    }
    if (used > 64) throw StructuralError("coordinate does not fit in one 64-bit cell");
  }

  std::uint64_t pack(const Tuple& t) const {
    std::uint64_t v = 0;
    int shift = 0;
    for (std::size_t f = 0; f < width.size(); ++f) {
      v |= static_cast<std::uint64_t>(t[f]) << shift;
      shift += width[f];
    }
    return v;
  }

  Value field(std::uint64_t v, std::size_t f) const {
    int shift = 0;
    for (std::size_t k = 0; k < f; ++k) shift += width[k];
    if (width[f] == 0) return 0;
    const std::uint64_t mask = width[f] == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width[f]) - 1;
    return static_cast<Value>((v >> shift) & mask);
  }

  Tuple unpack(std::uint64_t v) const {
    Tuple t;
    for (std::size_t f = 0; f < width.size(); ++f) t.push_back(field(v, f));
    return t;
  }
};

}  // namespace

ExecutionTrace run_parallel_threaded(const FunctionFamily& family, WriteMode mode,
                                     std::size_t round_limit) {
  validate_family(family);
  const FunctionFamily img = ascending_image(family);
  const std::size_t n = img.bounds.size();
  const std::size_t m = img.function_count();
  const std::size_t limit = round_limit ? round_limit : default_round_limit(family, RoundPlan::all());

  std::vector<CellLayout> layouts;
  for (std::size_t c = 0; c < n; ++c) layouts.emplace_back(img.bounds.fields(c));
  std::vector<std::atomic<std::uint64_t>> cells(n);
  for (std::size_t c = 0; c < n; ++c) cells[c].store(layouts[c].pack(img.initial[c]));

  ExecutionTrace trace;
  StateVector snapshot = img.initial;
  trace.commit(0, snapshot);
  trace.status = TerminalStatus::kStepLimit;
  std::size_t round = 0;
  bool stop = false;
  if (m == 0 || is_common_fixed_point(snapshot, img)) {
    trace.status = TerminalStatus::kConverged;
    stop = true;
  }

  std::mutex error_mutex;
  std::exception_ptr error;

  // Runs once per round after every worker has finished its writes.
  auto on_round_end = [&]() noexcept {
    StateVector next = snapshot;
    for (std::size_t c = 0; c < n; ++c) next[c] = layouts[c].unpack(cells[c].load());
    trace.selected.emplace_back();
    for (std::size_t i = 0; i < m; ++i) trace.selected.back().push_back(i);
    if (next != snapshot) {
      snapshot = std::move(next);
      trace.commit(round + 1, snapshot);
    }
    ++round;
    if (error) {
      stop = true;
    } else if (is_common_fixed_point(snapshot, img)) {
      trace.status = TerminalStatus::kConverged;
      stop = true;
    } else if (round == limit) {
      stop = true;
    }
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(m), on_round_end);

  auto worker = [&](std::size_t id) {
    const auto& f = img.functions[id];
    while (!stop) {
      try {
        StateVector observed = snapshot;
        const auto& reads = mode == WriteMode::kNaive ? std::vector<std::size_t>{} : f.read_set;
        if (mode == WriteMode::kNaive) {
          for (std::size_t c = 0; c < n; ++c) observed[c] = layouts[c].unpack(cells[c].load());
        }
        for (auto c : reads) observed[c] = layouts[c].unpack(cells[c].load());
        WriteList intended;
        f.evaluate(observed, intended);
        if (mode == WriteMode::kNaive) {
          StateVector full = observed;
          for (const auto& w : intended) {
            require_write_allowed(f, w, img.bounds, observed);
            full[w.coordinate] = w.value;
          }
          for (std::size_t c = 0; c < n; ++c) cells[c].store(layouts[c].pack(full[c]));
        } else {
          for (const auto& w : intended) {
            require_write_allowed(f, w, img.bounds, observed);
            const std::uint64_t packed = layouts[w.coordinate].pack(w.value);
            if (w.is_cas()) {
              auto& cell = cells[w.coordinate];
              std::uint64_t cur = cell.load();
              bool ok = false;
              while (layouts[w.coordinate].field(cur, w.cas_field) == w.cas_expected) {
                if (cell.compare_exchange_weak(cur, packed)) {
                  ok = true;
                  break;
                }
              }
              if (!ok) break;  // retried next round
            } else if (w.value != observed[w.coordinate]) {
              cells[w.coordinate].store(packed);
            }
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
      sync.arrive_and_wait();
    }
  };

  if (!stop) {
    std::vector<std::jthread> threads;
    threads.reserve(m);
    for (std::size_t i = 0; i < m; ++i) threads.emplace_back(worker, i);
  }
  if (error) std::rethrow_exception(error);
  trace.time_units = round;
  restore_orientation(trace, family.bounds);
  return trace;
}

}  // namespace lfp
