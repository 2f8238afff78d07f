// SPDX-License-Identifier: Apache-2.0
#include "lfp/counterexamples.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "lfp/distributed.hpp"
#include "lfp/interleaved.hpp"
#include "lfp/oracles.hpp"
#include "lfp/parallel.hpp"

namespace lfp {

namespace {

struct Entry {
  Scenario scenario;
  const char* name;
};

constexpr Entry kRegistry[] = {
    {Scenario::kInfiniteLattice, "INFINITE_LATTICE"},
    {Scenario::kUnfair, "UNFAIR"},
    {Scenario::kNonbottomStart, "NONBOTTOM_START"},
    {Scenario::kNonmonotone, "NONMONOTONE"},
    {Scenario::kNoninflationary, "NONINFLATIONARY"},
    {Scenario::kNaiveParallel, "NAIVE_PARALLEL"},
    {Scenario::kUnboundedStaleness, "UNBOUNDED_STALENESS"},
};

// Scalar family on one chain {0..max} from single-argument rules.
FunctionFamily chain_family(std::string name, Value max, Value start,
                            std::vector<std::function<Value(Value)>> rules) {
  FunctionFamily fam;
  fam.name = std::move(name);
  fam.bounds = Bounds::uniform(1, {{"x", max, Orientation::kAscending}});
  fam.initial = StateVector::scalars({start});
  for (std::size_t k = 0; k < rules.size(); ++k) {
    UpdateFunction f;
    f.id = k;
    f.read_set = {0};
    f.write_set = {0};
    // Several functions share one coordinate, so none is i-local.
    f.declared.i_local = false;
    f.evaluate = [rule = rules[k]](const StateVector& s, WriteList& out) {
      out.push_back(IntendedWrite::plain(0, Tuple{rule(s[0][0])}));
    };
    fam.functions.push_back(std::move(f));
  }
  return fam;
}

// Bit family where f_i sets coordinate i from a rule over the whole state.
FunctionFamily bit_family(std::string name, std::size_t n,
                          std::vector<std::function<Value(const StateVector&)>> rules) {
  FunctionFamily fam;
  fam.name = std::move(name);
  fam.bounds = Bounds::uniform(n, {{"bit", 1, Orientation::kAscending}});
  fam.initial = StateVector::scalars(std::vector<Value>(n, 0));
  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
  for (std::size_t i = 0; i < n; ++i) {
    UpdateFunction f;
    f.id = i;
    f.read_set = everyone;
    f.write_set = {i};
    f.evaluate = [i, rule = rules[i]](const StateVector& s, WriteList& out) {
      out.push_back(IntendedWrite::plain(i, Tuple{rule(s)}));
    };
    fam.functions.push_back(std::move(f));
  }
  return fam;
}

std::string show(const StateVector& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

StateVector single_minimum(const FunctionFamily& fam, const StateVector& above) {
  const auto mins = minimal_fixed_points_scan(fam, above);
  if (mins.size() != 1) throw std::logic_error(fam.name + ": expected one least common fixed point");
  return mins.front();
}

class Checker {
 public:
  explicit Checker(ScenarioOutcome& out) : out_(out) {}
  void expect(bool ok, const std::string& what) {
    out_.findings.push_back(std::string(ok ? "ok: " : "MISMATCH: ") + what);
    all_ok_ = all_ok_ && ok;
  }
  ~Checker() { out_.verdict = all_ok_ ? Verdict::kMatchesPaper : Verdict::kDeviates; }

 private:
  ScenarioOutcome& out_;
  bool all_ok_ = true;
};

}  // namespace

const char* to_string(Scenario s) {
  for (const auto& e : kRegistry) {
    if (e.scenario == s) return e.name;
  }
  return "?";
}

const char* to_string(Verdict v) { return v == Verdict::kMatchesPaper ? "MATCHES_PAPER" : "DEVIATES"; }

Scenario scenario_from_name(std::string_view name) {
  for (const auto& e : kRegistry) {
    if (name == e.name) return e.scenario;
  }
  throw std::invalid_argument("unknown counterexample '" + std::string(name) + "'");
}

std::vector<Scenario> all_scenarios() {
  std::vector<Scenario> out;
  for (const auto& e : kRegistry) out.push_back(e.scenario);
  return out;
}

FunctionFamily two_bit_family() {
  return bit_family("two_bit", 2, {[](const StateVector&) { return Value{1}; },
                                   [](const StateVector&) { return Value{1}; }});
}

FunctionFamily three_bit_chain_family() {
  return bit_family("three_bit_chain", 3,
                    {[](const StateVector&) { return Value{1}; },
                     [](const StateVector& s) { return std::max(s[0][0], s[1][0]); },
                     [](const StateVector& s) { return std::max(s[1][0], s[2][0]); }});
}

FunctionFamily nonmonotone_family() {
  return chain_family("nonmonotone", 2, 0,
                      {[](Value x) { return x == 1 ? Value{1} : Value{2}; },
                       [](Value x) { return std::max<Value>(x, 1); }});
}

FunctionFamily noninflationary_family() {
  return chain_family("noninflationary", 1, 0,
                      {[](Value) { return Value{0}; }, [](Value) { return Value{1}; }});
}

FunctionFamily counter_family(Value cap) {
  auto fam = chain_family("counter", cap, 0, {[cap](Value x) { return std::min(x + 1, cap); }});
  fam.functions[0].declared.i_local = true;
  return fam;
}

FunctionFamily floor_one_family(Value start) {
  auto fam = chain_family("floor_one", 2, start, {[](Value x) { return std::max<Value>(x, 1); }});
  fam.functions[0].declared.i_local = true;
  return fam;
}

ScenarioOutcome run_counterexample(Scenario s) {
  ScenarioOutcome out{s, {}, Verdict::kDeviates, {}};
  Checker check(out);
  switch (s) {
    case Scenario::kInfiniteLattice: {
      constexpr Value kCap = Value{1} << 40;
      constexpr std::size_t kSteps = 10000;
      const auto fam = counter_family(kCap);
      FairSchedule sched;
      sched.step_limit = kSteps;
      out.trace = run_interleaved(fam, sched, {false, false});
      check.expect(out.trace.status == TerminalStatus::kStepLimit, "step cutoff reached without fixation");
      check.expect(out.trace.states.size() == kSteps + 1, "every step increased the counter");
      check.expect(!is_common_fixed_point(out.trace.terminal(), fam), "terminal state is not a fixed point");
      break;
    }
    case Scenario::kUnfair: {
      const auto fam = two_bit_family();
      out.trace = run_with_unfair_schedule(fam, 0, 100);
      check.expect(out.trace.status == TerminalStatus::kStuckNonFixpoint, "f1 alone gets stuck");
      check.expect(out.trace.terminal() == StateVector::scalars({1, 0}),
                   "stabilizes at (1 0), observed " + show(out.trace.terminal()));
      const auto f2 = apply_function(fam.functions[1], out.trace.terminal());
      check.expect(f2.state == StateVector::scalars({1, 1}), "f2 moves the stuck state to (1 1)");
      break;
    }
    case Scenario::kNonbottomStart: {
      const auto fam = floor_one_family(2);
      out.trace = run_interleaved(fam, FairSchedule::round_robin());
      const auto above = single_minimum(fam, fam.initial);
      const auto global = single_minimum(fam, extremes(fam.bounds).bottom);
      check.expect(out.trace.status == TerminalStatus::kConverged, "converges");
      check.expect(out.trace.terminal() == above,
                   "terminal " + show(out.trace.terminal()) + " is the least fixed point above the start");
      check.expect(out.trace.terminal() != global, "global least fixed point " + show(global) + " is missed");
      break;
    }
    case Scenario::kNonmonotone: {
      const auto fam = nonmonotone_family();
      out.trace = run_interleaved(fam, FairSchedule::round_robin());
      const auto lcfp = single_minimum(fam, fam.initial);
      check.expect(out.trace.status == TerminalStatus::kConverged, "f1 then f2 settles");
      check.expect(out.trace.terminal() == StateVector::scalars({2}),
                   "terminal is 2, observed " + show(out.trace.terminal()));
      check.expect(lcfp == StateVector::scalars({1}), "least common fixed point is 1");
      break;
    }
    case Scenario::kNoninflationary: {
      const auto fam = noninflationary_family();
      FairSchedule sched;
      sched.step_limit = 40;
      out.trace = run_interleaved(fam, sched);
      bool alternates = out.trace.states.size() > 4;
      for (std::size_t k = 1; k < out.trace.states.size(); ++k) {
        alternates = alternates && out.trace.states[k] != out.trace.states[k - 1] &&
                     (k < 2 || out.trace.states[k] == out.trace.states[k - 2]);
      }
      check.expect(out.trace.status == TerminalStatus::kStepLimit, "never terminates");
      check.expect(alternates, "toggles between 0 and 1");
      check.expect(minimal_fixed_points_scan(fam, extremes(fam.bounds).bottom).empty(),
                   "no common fixed point exists");
      break;
    }
    case Scenario::kNaiveParallel: {
      const auto fam = two_bit_family();
      ParallelConfig cfg;
      cfg.intra = IntraPolicy::kStaleWins;
      cfg.mode = WriteMode::kNaive;
      out.trace = run_parallel(fam, cfg);
      const std::size_t both[] = {0, 1};
      const auto reachable = enumerate_round_outcomes(fam.initial, both, fam, WriteMode::kNaive);
      check.expect(out.trace.status == TerminalStatus::kStepLimit, "never converges");
      check.expect(out.trace.terminal() == StateVector::scalars({0, 0}),
                   "stuck at (0 0), observed " + show(out.trace.terminal()));
      check.expect(reachable.count(StateVector::scalars({0, 0})) == 1,
                   "(0 0) is a reachable round outcome");
      break;
    }
    case Scenario::kUnboundedStaleness: {
      const auto fam = three_bit_chain_family();
      auto result = run_distributed(fam, StalenessParams::withhold(0, {1, 2}), 60);
      out.trace = std::move(result.trace);
      const auto f2 = apply_function(fam.functions[1], out.trace.terminal());
      check.expect(out.trace.status == TerminalStatus::kStepLimit, "never quiesces");
      check.expect(out.trace.terminal() == StateVector::scalars({1, 0, 0}),
                   "stuck at (1 0 0), observed " + show(out.trace.terminal()));
      check.expect(f2.state == StateVector::scalars({1, 1, 0}), "f2(1 0 0) = (1 1 0)");
      break;
    }
  }
  return out;
}

RepairOutcome run_repaired_twin(Scenario s) {
  RepairOutcome out{s, {}, {}, false, {}};
  FunctionFamily fam;
  switch (s) {
    case Scenario::kInfiniteLattice:
      fam = counter_family(8);
      out.description = "counter capped at 8";
      out.trace = run_interleaved(fam, FairSchedule::round_robin());
      break;
    case Scenario::kUnfair:
      fam = two_bit_family();
      out.description = "round-robin schedule";
      out.trace = run_interleaved(fam, FairSchedule::round_robin());
      break;
    case Scenario::kNonbottomStart:
      fam = floor_one_family(0);
      out.description = "start at bottom";
      out.trace = run_interleaved(fam, FairSchedule::round_robin());
      break;
    case Scenario::kNonmonotone:
      fam = chain_family("nonmonotone_repaired", 2, 0,
                         {[](Value x) { return std::max<Value>(x, 1); },
                          [](Value x) { return std::max<Value>(x, 1); }});
      out.description = "f1 replaced by the monotone max(x, 1)";
      out.trace = run_interleaved(fam, FairSchedule::round_robin());
      break;
    case Scenario::kNoninflationary:
      fam = chain_family("noninflationary_repaired", 1, 0,
                         {[](Value x) { return x; }, [](Value) { return Value{1}; }});
      out.description = "f1 replaced by the identity";
      out.trace = run_interleaved(fam, FairSchedule::round_robin());
      break;
    case Scenario::kNaiveParallel: {
      fam = two_bit_family();
      ParallelConfig cfg;
      cfg.intra = IntraPolicy::kStaleWins;
      cfg.mode = WriteMode::kUpdateOnChange;
      out.description = "update-only-on-change under the same adversary";
      out.trace = run_parallel(fam, cfg);
      break;
    }
    case Scenario::kUnboundedStaleness:
      fam = three_bit_chain_family();
      out.description = "uniform delays bounded by T = 2";
      out.trace = run_distributed(fam, StalenessParams::uniform(2, 7)).trace;
      break;
  }
  out.oracle = single_minimum(fam, extremes(fam.bounds).bottom);
  out.converged_to_oracle =
      out.trace.status == TerminalStatus::kConverged && out.trace.terminal() == out.oracle;
  return out;
}

}  // namespace lfp
