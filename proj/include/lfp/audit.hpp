// SPDX-License-Identifier: Apache-2.0
//
// Spot checks of the properties an update function declares. Engines trust
// the declarations; this is where they get tested.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfp/family.hpp"

namespace lfp {

enum class ViolationKind { kInflationary, kMonotone, kLocality, kBounds };

const char* to_string(ViolationKind k);

struct AuditViolation {
  ViolationKind kind = ViolationKind::kMonotone;
  std::size_t function = 0;
  StateVector g;
  std::optional<StateVector> h;  // the larger state of a monotonicity pair
  std::string detail;
};

struct AuditReport {
  std::string family;
  bool exhaustive = false;
  std::size_t states_checked = 0;
  std::size_t pairs_checked = 0;
  std::vector<AuditViolation> violations;

  bool clean() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind k) const;
};

/// Lattices with at most this many elements are audited exhaustively.
inline constexpr std::uint64_t kExhaustiveAuditLimit = std::uint64_t{1} << 16;

/// Checks every declared property of every function.
///
/// Exhaustive mode visits every state and every covering pair G < G + e; on a
/// product of chains that suffices for monotonicity. Families with a domain
/// predicate instead compare all comparable pairs inside the domain, or pairs
/// along random execution chains when the domain is large. Sampled mode draws
/// `sample_budget` pairs G <= H. At most `max_violations` are recorded.
AuditReport audit_family(const FunctionFamily& family, std::size_t sample_budget,
                         std::uint64_t seed, std::size_t max_violations = 16);

}  // namespace lfp
