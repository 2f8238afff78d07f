// SPDX-License-Identifier: Apache-2.0
//
// Runnable necessity constructions: each drops one assumption and shows the
// resulting failure, and each has a repaired twin that converges.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lfp/family.hpp"
#include "lfp/trace.hpp"

namespace lfp {

enum class Scenario {
  kInfiniteLattice,
  kUnfair,
  kNonbottomStart,
  kNonmonotone,
  kNoninflationary,
  kNaiveParallel,
  kUnboundedStaleness,
};

enum class Verdict { kMatchesPaper, kDeviates };

const char* to_string(Scenario s);
const char* to_string(Verdict v);

/// Throws std::invalid_argument for an unknown name.
Scenario scenario_from_name(std::string_view name);
std::vector<Scenario> all_scenarios();

struct ScenarioOutcome {
  Scenario scenario;
  ExecutionTrace trace;
  Verdict verdict = Verdict::kDeviates;
  /// What was expected and what was observed, one fact per entry.
  std::vector<std::string> findings;
};

/// Runs the broken scenario and checks its expected failure.
ScenarioOutcome run_counterexample(Scenario s);

struct RepairOutcome {
  Scenario scenario;
  ExecutionTrace trace;
  StateVector oracle;
  bool converged_to_oracle = false;
  std::string description;
};

/// Runs the same instance with the broken ingredient restored and compares
/// the terminal state with the oracle least common fixed point.
RepairOutcome run_repaired_twin(Scenario s);

/// f1(x1,x2) = (1,x2), f2(x1,x2) = (x1,1) on {0,1}^2.
FunctionFamily two_bit_family();
/// f1 = (1,x2,x3), f2 = (x1, x1 or x2, x3), f3 = (x1, x2, x2 or x3) on {0,1}^3.
FunctionFamily three_bit_chain_family();
/// On {0,1,2}: f1 = 0->2, 1->1, 2->2 (not monotone), f2 = max(x, 1).
FunctionFamily nonmonotone_family();
/// On {0,1}: f1(x) = 0 (not inflationary), f2(x) = 1.
FunctionFamily noninflationary_family();
/// f(x) = min(x + 1, cap) on {0..cap}.
FunctionFamily counter_family(Value cap);
/// f(x) = max(x, 1) on {0,1,2}, starting at `start`.
FunctionFamily floor_one_family(Value start);

}  // namespace lfp
