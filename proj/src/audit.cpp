// SPDX-License-Identifier: Apache-2.0
#include "lfp/audit.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <utility>

namespace lfp {

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kInflationary: return "INFLATIONARY";
    case ViolationKind::kMonotone: return "MONOTONE";
    case ViolationKind::kLocality: return "LOCALITY";
    case ViolationKind::kBounds: return "BOUNDS";
  }
  return "?";
}

std::size_t AuditReport::count(ViolationKind k) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [k](const AuditViolation& v) { return v.kind == k; }));
}

namespace {

// Final value per coordinate after applying a batch to a base state.
using Overlay = std::vector<std::pair<std::size_t, Tuple>>;

const Tuple& value_at(const Overlay& overlay, const StateVector& base, std::size_t coord) {
  for (auto it = overlay.rbegin(); it != overlay.rend(); ++it) {
    if (it->first == coord) return it->second;
  }
  return base[coord];
}

Overlay resolve(const WriteList& writes, const StateVector& base) {
  Overlay overlay;
  for (const auto& w : writes) {
    if (w.is_cas() && value_at(overlay, base, w.coordinate)[w.cas_field] != w.cas_expected) break;
    overlay.emplace_back(w.coordinate, w.value);
  }
  return overlay;
}

class Auditor {
 public:
  Auditor(const FunctionFamily& natural, std::size_t max_violations)
      : natural_(natural), image_(ascending_image(natural)), max_violations_(max_violations) {
    report_.family = natural.name;
    for (const auto& f : natural.functions) {
      if (f.declared.i_local && (f.write_set.size() != 1 || f.write_set[0] != f.id)) {
        record(ViolationKind::kLocality, f.id, image_.initial, std::nullopt,
               "declared i-local but write set is not its own coordinate");
      }
    }
  }

  const FunctionFamily& image() const { return image_; }
  AuditReport& report() { return report_; }
  bool full() const { return report_.violations.size() >= max_violations_; }

  bool in_domain(const StateVector& s) const { return !image_.domain || image_.domain(s); }

  // Evaluates f on g, checking locality, bounds and (if declared) inflation.
  Overlay evaluate(const UpdateFunction& f, const StateVector& g) {
    WriteList writes;
    f.evaluate(g, writes);
    for (const auto& w : writes) {
      if (w.coordinate >= g.size()) {
        record(ViolationKind::kLocality, f.id, g, std::nullopt, "write to a missing coordinate");
        return {};
      }
      if (!f.may_write(w.coordinate) && w.value != g[w.coordinate]) {
        record(ViolationKind::kLocality, f.id, g, std::nullopt,
               "write to coordinate " + std::to_string(w.coordinate) + " outside the write set");
      }
      if (!image_.bounds.contains(w.coordinate, w.value)) {
        record(ViolationKind::kBounds, f.id, g, std::nullopt,
               "value outside the bounds of coordinate " + std::to_string(w.coordinate));
        return {};
      }
    }
    Overlay out = resolve(writes, g);
    if (f.declared.inflationary) {
      for (const auto& [coord, value] : out) {
        if (!progress_leq(g[coord], value, image_.bounds.fields(coord))) {
          std::ostringstream os;
          os << "coordinate " << coord << " moved down";
          record(ViolationKind::kInflationary, f.id, g, std::nullopt, os.str());
          break;
        }
      }
    }
    return out;
  }

  // f(g) <= f(h), given g <= h and both images.
  void compare(const UpdateFunction& f, const StateVector& g, const Overlay& fg,
               const StateVector& h, const Overlay& fh) {
    if (!f.declared.monotone) return;
    auto check = [&](std::size_t coord) {
      if (!progress_leq(value_at(fg, g, coord), value_at(fh, h, coord),
                        image_.bounds.fields(coord))) {
        record(ViolationKind::kMonotone, f.id, g, h,
               "f(G) exceeds f(H) at coordinate " + std::to_string(coord));
        return false;
      }
      return true;
    };
    for (const auto& entry : fg) {
      if (!check(entry.first)) return;
    }
    for (const auto& entry : fh) {
      if (!check(entry.first)) return;
    }
  }

  void check_pair(const StateVector& g, const StateVector& h) {
    ++report_.pairs_checked;
    for (const auto& f : image_.functions) {
      if (full()) return;
      compare(f, g, evaluate(f, g), h, evaluate(f, h));
    }
  }

 private:
  void record(ViolationKind kind, std::size_t function, const StateVector& g,
              const std::optional<StateVector>& h, std::string detail) {
    if (full()) return;
    AuditViolation v;
    v.kind = kind;
    v.function = function;
    v.g = flip_descending(g, natural_.bounds);
    if (h) v.h = flip_descending(*h, natural_.bounds);
    v.detail = std::move(detail);
    for (const auto& seen : report_.violations) {
      if (seen.kind == v.kind && seen.function == v.function && seen.g == v.g && seen.h == v.h) return;
    }
    report_.violations.push_back(std::move(v));
  }

  const FunctionFamily& natural_;
  FunctionFamily image_;
  std::size_t max_violations_;
  AuditReport report_;
};

// Field slots of the ascending image, flattened.
struct Slot {
  std::size_t coord;
  std::size_t field;
  Value max;
};

std::vector<Slot> slots_of(const Bounds& bounds) {
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto fields = bounds.fields(i);
    for (std::size_t f = 0; f < fields.size(); ++f) slots.push_back({i, f, fields[f].max});
  }
  return slots;
}

// Steps `state` to the next element in mixed-radix order; false after the last.
bool next_state(StateVector& state, const std::vector<Slot>& slots) {
  for (const auto& s : slots) {
    if (state[s.coord][s.field] < s.max) {
      ++state[s.coord][s.field];
      return true;
    }
    state[s.coord][s.field] = 0;
  }
  return false;
}

void audit_exhaustive(Auditor& a) {
  const auto& img = a.image();
  const auto slots = slots_of(img.bounds);
  StateVector g = extremes(img.bounds).bottom;
  std::vector<Overlay> fg(img.functions.size());
  do {
    ++a.report().states_checked;
    for (std::size_t k = 0; k < img.functions.size(); ++k) fg[k] = a.evaluate(img.functions[k], g);
    for (const auto& s : slots) {
      if (g[s.coord][s.field] == s.max) continue;
      StateVector h = g;
      ++h[s.coord][s.field];
      ++a.report().pairs_checked;
      for (std::size_t k = 0; k < img.functions.size(); ++k) {
        const auto& f = img.functions[k];
        if (!f.declared.monotone) continue;
        WriteList writes;
        f.evaluate(h, writes);
        a.compare(f, g, fg[k], h, resolve(writes, h));
      }
      if (a.full()) return;
    }
  } while (next_state(g, slots));
}

void audit_domain_pairs(Auditor& a, const std::vector<StateVector>& states) {
  const auto& bounds = a.image().bounds;
  for (const auto& g : states) {
    for (const auto& f : a.image().functions) a.evaluate(f, g);
  }
  for (const auto& g : states) {
    for (const auto& h : states) {
      if (g == h || !progress_leq(g, h, bounds)) continue;
      a.check_pair(g, h);
      if (a.full()) return;
    }
  }
}

void audit_chains(Auditor& a, std::size_t budget, std::mt19937_64& rng) {
  const auto& img = a.image();
  if (img.functions.empty()) return;
  const auto steps = static_cast<std::size_t>(img.bounds.height()) + img.functions.size() + 1;
  std::uniform_int_distribution<std::size_t> pick(0, img.functions.size() - 1);
  while (a.report().pairs_checked < budget && !a.full()) {
    std::vector<StateVector> chain{img.initial};
    for (std::size_t s = 0; s < 4 * steps; ++s) {
      auto next = apply_function(img.functions[pick(rng)], chain.back());
      if (next.changed) chain.push_back(std::move(next.state));
    }
    a.report().states_checked += chain.size();
    const std::size_t before = a.report().pairs_checked;
    for (std::size_t x = 0; x < chain.size() && !a.full(); ++x) {
      for (std::size_t y = x + 1; y < chain.size() && !a.full(); ++y) a.check_pair(chain[x], chain[y]);
    }
    if (a.report().pairs_checked == before) ++a.report().pairs_checked;  // no progress possible
  }
}

void audit_sampled(Auditor& a, std::size_t budget, std::mt19937_64& rng) {
  const auto slots = slots_of(a.image().bounds);
  StateVector g = a.image().initial;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < budget && !a.full(); ++k) {
    for (const auto& s : slots) g[s.coord][s.field] = std::uniform_int_distribution<Value>(0, s.max)(rng);
    StateVector h = g;
    for (const auto& s : slots) {
      if (coin(rng)) h[s.coord][s.field] = std::uniform_int_distribution<Value>(g[s.coord][s.field], s.max)(rng);
    }
    a.report().states_checked += 2;
    a.check_pair(g, h);
  }
}

}  // namespace

AuditReport audit_family(const FunctionFamily& family, std::size_t sample_budget,
                         std::uint64_t seed, std::size_t max_violations) {
  sample_budget = std::max<std::size_t>(sample_budget, 1);
  Auditor a(family, max_violations);
  std::mt19937_64 rng(seed);
  const bool small = family.bounds.cardinality() <= kExhaustiveAuditLimit;

  if (!family.domain) {
    a.report().exhaustive = small;
    if (small) {
      audit_exhaustive(a);
    } else {
      audit_sampled(a, sample_budget, rng);
    }
    return std::move(a.report());
  }

  if (small) {
    std::vector<StateVector> states;
    const auto slots = slots_of(a.image().bounds);
    StateVector g = extremes(a.image().bounds).bottom;
    do {
      if (a.in_domain(g)) states.push_back(g);
    } while (next_state(g, slots));
    if (states.size() <= 2048) {
      a.report().exhaustive = true;
      a.report().states_checked = states.size();
      audit_domain_pairs(a, states);
      return std::move(a.report());
    }
  }
  audit_chains(a, sample_budget, rng);
  return std::move(a.report());
}

}  // namespace lfp
