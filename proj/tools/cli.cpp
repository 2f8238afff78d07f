// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "lfp/audit.hpp"
#include "lfp/counterexamples.hpp"
#include "lfp/distributed.hpp"
#include "lfp/errors.hpp"
#include "lfp/instance_io.hpp"
#include "lfp/interleaved.hpp"
#include "lfp/oracles.hpp"
#include "lfp/parallel.hpp"
#include "lfp/trace_io.hpp"

namespace lfp::cli {

namespace {

struct RunOptions {
  std::string instance;
  std::string engine = "interleaved";
  std::string mode = "update-on-change";
  std::string schedule;
  std::string intra = "random";
  std::string delay = "uniform";
  std::uint64_t seed = 0;
  std::size_t staleness = 1;
  std::size_t window = 0;
  std::size_t limit = 0;
  std::size_t target = 1;
  std::vector<std::size_t> victims;
  std::string trace_out;
  bool no_reads = false;
};

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

WriteMode parse_mode(const std::string& s) {
  if (s == "update-on-change") return WriteMode::kUpdateOnChange;
  if (s == "naive") return WriteMode::kNaive;
  throw CLI::ValidationError("--mode", "expected update-on-change or naive");
}

IntraPolicy parse_intra(const std::string& s) {
  if (s == "random") return IntraPolicy::kRandom;
  if (s == "snapshot") return IntraPolicy::kReadsFirst;
  if (s == "adversarial") return IntraPolicy::kStaleWins;
  throw CLI::ValidationError("--intra", "expected random, snapshot or adversarial");
}

std::vector<std::size_t> to_zero_based(const std::vector<std::size_t>& xs, const char* flag) {
  std::vector<std::size_t> out;
  for (auto x : xs) {
    if (x == 0) throw CLI::ValidationError(flag, "coordinates are 1-based");
    out.push_back(x - 1);
  }
  return out;
}

void print_check(std::ostream& out, const CheckResult& c) {
  out << "  " << c.name << ": " << (c.passed ? "PASS" : "FAIL");
  if (!c.passed) out << " (" << c.detail << ")";
  out << '\n';
}

std::vector<CheckResult> trace_checks(const ExecutionTrace& trace, const FunctionFamily& family,
                                      const std::string& engine) {
  std::vector<CheckResult> checks{check_ascent(trace, family.bounds)};
  if (engine == "parallel") {
    for (auto& c : check_round_progress(trace, family.bounds)) checks.push_back(std::move(c));
  } else if (engine == "threaded") {
    // Threaded traces hold committed states only, no write records.
    checks.push_back(check_round_monotone(trace, family.bounds));
  }
  checks.push_back(check_dominated_by(trace, family.bounds, lcfp_roundrobin(family)));
  CheckResult fixed{"converged state is a fixed point", true, {}};
  if (trace.status == TerminalStatus::kConverged && !is_common_fixed_point(trace.terminal(), family)) {
    fixed.passed = false;
    fixed.detail = "terminal state is not a common fixed point";
  }
  checks.push_back(std::move(fixed));
  return checks;
}

int cmd_run(const RunOptions& o, std::ostream& out) {
  const Instance inst = load_instance(o.instance);
  const FunctionFamily family = build_family(inst);
  const TraceOptions topt{!o.no_reads, false};
  const WriteMode mode = parse_mode(o.mode);

  ExecutionTrace trace;
  std::vector<std::pair<std::string, std::string>> header{
      {"family", family.name}, {"fingerprint", hex(fingerprint(inst))}, {"engine", o.engine}};
  std::optional<QuiescenceReport> report;
  bool parallel = false;

  if (o.engine == "interleaved") {
    FairSchedule s;
    if (o.schedule.empty() || o.schedule == "round-robin") {
      s = FairSchedule::round_robin();
    } else if (o.schedule == "random") {
      s = FairSchedule::seeded_random(o.seed, o.window);
    } else {
      throw CLI::ValidationError("--schedule", "interleaved takes round-robin or random");
    }
    s.step_limit = o.limit;
    header.emplace_back("schedule", o.schedule.empty() ? "round-robin" : o.schedule);
    header.emplace_back("seed", std::to_string(o.seed));
    trace = run_interleaved(family, s, topt);
  } else if (o.engine == "parallel" || o.engine == "threaded") {
    parallel = true;
    header.emplace_back("mode", to_string(mode));
    if (o.engine == "threaded") {
      trace = run_parallel_threaded(family, mode, o.limit);
    } else {
      ParallelConfig cfg;
      if (o.schedule.empty() || o.schedule == "all") {
        cfg.plan = RoundPlan::all();
      } else if (o.schedule == "subset") {
        cfg.plan = RoundPlan::seeded_subset(o.window == 0 ? 4 : o.window);
      } else {
        throw CLI::ValidationError("--schedule", "parallel takes all or subset");
      }
      cfg.intra = parse_intra(o.intra);
      cfg.seed = o.seed;
      cfg.mode = mode;
      cfg.round_limit = o.limit;
      header.emplace_back("schedule", o.schedule.empty() ? "all" : o.schedule);
      header.emplace_back("intra", o.intra);
      header.emplace_back("seed", std::to_string(o.seed));
      trace = run_parallel(family, cfg, topt);
    }
  } else if (o.engine == "distributed") {
    StalenessParams p;
    if (o.delay == "uniform") {
      p = StalenessParams::uniform(o.staleness, o.seed);
    } else if (o.delay == "max-delay") {
      p = StalenessParams::max_delay(o.staleness);
    } else if (o.delay == "withhold") {
      if (o.target == 0) throw CLI::ValidationError("--target", "coordinates are 1-based");
      p = StalenessParams::withhold(o.target - 1, to_zero_based(o.victims, "--victims"));
    } else {
      throw CLI::ValidationError("--delay", "expected uniform, max-delay or withhold");
    }
    header.emplace_back("delay", to_string(p.policy));
    header.emplace_back("staleness", std::to_string(p.staleness));
    header.emplace_back("seed", std::to_string(o.seed));
    auto r = run_distributed(family, p, o.limit, topt);
    trace = std::move(r.trace);
    report = std::move(r.report);
  } else {
    throw CLI::ValidationError("--engine", "expected interleaved, parallel, threaded or distributed");
  }

  out << "family: " << family.name << '\n';
  out << "engine: " << o.engine << '\n';
  out << "status: " << to_string(trace.status) << '\n';
  out << (o.engine == "interleaved" ? "steps: " : "rounds: ") << trace.time_units << '\n';
  out << "terminal: " << trace.terminal() << '\n';
  out << "answer: " << family.decode_or_state(trace.terminal()).dump() << '\n';
  if (report) {
    out << "stabilization_round: " << report->stabilization_round << '\n';
    out << "tau: " << report->tau << '\n';
    out << "max_view_lag: " << report->max_lag << '\n';
  }

  bool oracle_ok = true;
  if (trace.status == TerminalStatus::kConverged) {
    try {
      const auto oracle = run_oracle(inst);
      oracle_ok = oracle.answer == family.decode_or_state(trace.terminal());
      out << "oracle: " << (oracle_ok ? "match" : "MISMATCH") << " (" << oracle.method << ")\n";
      if (!oracle_ok) out << "oracle_answer: " << oracle.answer.dump() << '\n';
    } catch (const SearchSpaceTooLarge& e) {
      out << "oracle: skipped (" << e.what() << ")\n";
    }
  }

  const auto checks = trace_checks(trace, family, o.engine);
  out << "checks:\n";
  for (const auto& c : checks) print_check(out, c);
  // Naive writes are expected to break the round-progress invariants.
  const bool checks_binding = !(parallel && mode == WriteMode::kNaive);
  const bool checks_ok =
      std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });

  if (!o.trace_out.empty()) {
    std::ofstream f(o.trace_out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + o.trace_out);
    write_trace(f, {header, trace});
  }

  if (trace.status != TerminalStatus::kConverged) return kLimit;
  if (!oracle_ok || (checks_binding && !checks_ok)) return kContract;
  return kOk;
}

int cmd_verify(const std::string& trace_path, const std::string& instance_path, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  const FunctionFamily family = build_family(inst);
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + trace_path);
  const TraceFile file = read_trace(in, family.initial);
  const std::string fp = hex(fingerprint(inst));
  if (file.get("fingerprint") != fp) {
    throw SchemaError(trace_path, "trace fingerprint " + file.get("fingerprint") +
                                      " does not match instance fingerprint " + fp);
  }
  const auto checks = trace_checks(file.trace, family, file.get("engine"));
  bool ok = true;
  for (const auto& c : checks) {
    out << c.name << ": " << (c.passed ? "PASS" : "FAIL");
    if (!c.passed) out << " (" << c.detail << ")";
    out << '\n';
    ok = ok && c.passed;
  }
  out << "verdict: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kUsage;
}

int cmd_counterexample(const std::string& name, const std::string& trace_out, std::ostream& out) {
  std::vector<Scenario> scenarios;
  if (name == "all") {
    scenarios = all_scenarios();
  } else {
    try {
      scenarios.push_back(scenario_from_name(name));
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError("NAME", e.what());
    }
  }
  bool all_match = true;
  for (auto s : scenarios) {
    const auto outcome = run_counterexample(s);
    const auto twin = run_repaired_twin(s);
    out << to_string(s) << ": " << to_string(outcome.verdict) << '\n';
    out << "  status: " << to_string(outcome.trace.status) << '\n';
    out << "  terminal: " << outcome.trace.terminal() << '\n';
    for (const auto& f : outcome.findings) out << "  " << f << '\n';
    out << "  repaired (" << twin.description << "): " << to_string(twin.trace.status) << " at "
        << twin.trace.terminal() << ", oracle " << twin.oracle << ", "
        << (twin.converged_to_oracle ? "match" : "MISMATCH") << '\n';
    all_match = all_match && outcome.verdict == Verdict::kMatchesPaper && twin.converged_to_oracle;
    if (!trace_out.empty() && scenarios.size() == 1) {
      std::ofstream f(trace_out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + trace_out);
      write_trace(f, {{{"scenario", to_string(s)}}, outcome.trace});
    }
  }
  return all_match ? kOk : kDeviates;
}

int cmd_audit(const std::string& instance_path, std::size_t samples, std::uint64_t seed,
              std::ostream& out) {
  const FunctionFamily family = build_family(load_instance(instance_path));
  const auto r = audit_family(family, samples, seed);
  out << "family: " << r.family << '\n';
  out << "scope: " << (r.exhaustive ? "exhaustive" : "sampled") << '\n';
  out << "states: " << r.states_checked << '\n';
  out << "pairs: " << r.pairs_checked << '\n';
  out << "violations: " << r.violations.size() << '\n';
  for (const auto& v : r.violations) {
    out << "  " << to_string(v.kind) << " f" << v.function + 1 << " at " << v.g;
    if (v.h) out << " vs " << *v.h;
    out << ": " << v.detail << '\n';
  }
  return r.clean() ? kOk : kContract;
}

int cmd_oracle(const std::string& instance_path, std::ostream& out) {
  const auto r = run_oracle(load_instance(instance_path));
  out << nlohmann::json{{"method", r.method}, {"fingerprint", hex(r.fingerprint)}, {"answer", r.answer}}.dump()
      << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least common fixed points under interleaved, parallel and distributed execution", "lfp"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Solve an instance with one engine");
  run_cmd->add_option("--instance", ro.instance, "Instance file")->required();
  run_cmd->add_option("--engine", ro.engine, "interleaved | parallel | threaded | distributed")
      ->capture_default_str();
  run_cmd->add_option("--mode", ro.mode, "update-on-change | naive (parallel engines)")->capture_default_str();
  run_cmd->add_option("--schedule", ro.schedule,
                      "interleaved: round-robin | random; parallel: all | subset");
  run_cmd->add_option("--intra", ro.intra, "Intra-round order: random | snapshot | adversarial")
      ->capture_default_str();
  run_cmd->add_option("--delay", ro.delay, "Distributed delays: uniform | max-delay | withhold")
      ->capture_default_str();
  run_cmd->add_option("--seed", ro.seed, "Seed for schedules and delays")->capture_default_str();
  run_cmd->add_option("--staleness", ro.staleness, "Staleness bound T in rounds")->capture_default_str();
  run_cmd->add_option("--window", ro.window, "Fairness window for random or subset schedules");
  run_cmd->add_option("--limit", ro.limit, "Step or round limit (0 = default)");
  run_cmd->add_option("--target", ro.target, "withhold: coordinate whose updates are dropped (1-based)");
  run_cmd->add_option("--victims", ro.victims, "withhold: processes that never hear them (1-based)");
  run_cmd->add_option("--trace-out", ro.trace_out, "Write the trace here");
  run_cmd->add_flag("--no-reads", ro.no_reads, "Leave READ records out of the trace");

  std::string trace_path, verify_instance;
  auto* verify_cmd = app.add_subcommand("verify", "Replay a trace and check its invariants");
  verify_cmd->add_option("--trace", trace_path, "Trace file")->required();
  verify_cmd->add_option("--instance", verify_instance, "Instance the trace was produced from")->required();

  std::string scenario, cx_trace;
  auto* cx_cmd = app.add_subcommand("counterexample", "Run a named failure scenario and its repair");
  cx_cmd->add_option("name", scenario, "Scenario name, or 'all'")->required();
  cx_cmd->add_option("--trace-out", cx_trace, "Write the scenario trace here");

  std::string audit_instance;
  std::size_t samples = 4096;
  std::uint64_t audit_seed = 0;
  auto* audit_cmd = app.add_subcommand("audit", "Check declared monotonicity, inflation and locality");
  audit_cmd->add_option("--instance", audit_instance, "Instance file")->required();
  audit_cmd->add_option("--samples", samples, "Pairs to sample on large lattices")->capture_default_str();
  audit_cmd->add_option("--seed", audit_seed, "Sampling seed")->capture_default_str();

  std::string oracle_instance;
  auto* oracle_cmd = app.add_subcommand("oracle", "Print the reference answer");
  oracle_cmd->add_option("--instance", oracle_instance, "Instance file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(ro, out);
    if (*verify_cmd) return cmd_verify(trace_path, verify_instance, out);
    if (*cx_cmd) return cmd_counterexample(scenario, cx_trace, out);
    if (*audit_cmd) return cmd_audit(audit_instance, samples, audit_seed, out);
    if (*oracle_cmd) return cmd_oracle(oracle_instance, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const InvalidInstance& e) {
    err << "invalid instance: " << e.what() << '\n';
    return kSchema;
  } catch (const TraceFormatError& e) {
    err << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << '\n';
    return kContract;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace lfp::cli
