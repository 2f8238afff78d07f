// SPDX-License-Identifier: Apache-2.0
#include "lfp/family.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "lfp/errors.hpp"

namespace lfp {

bool UpdateFunction::may_write(std::size_t coord) const {
  return std::find(write_set.begin(), write_set.end(), coord) != write_set.end();
}

Answer FunctionFamily::decode_or_state(const StateVector& s) const {
  if (decode) return decode(s);
  Answer out = Answer::array();
  for (const auto& t : s) {
    Answer tuple = Answer::array();
    for (Value v : t.values()) tuple.push_back(v);
    out.push_back(t.size() == 1 ? tuple[0] : tuple);
  }
  return out;
}

bool apply_writes(const WriteList& writes, StateVector& state) {
  for (const auto& w : writes) {
    if (w.is_cas() && state[w.coordinate][w.cas_field] != w.cas_expected) return false;
    state[w.coordinate] = w.value;
  }
  return true;
}

ApplyResult apply_function(const UpdateFunction& f, const StateVector& state) {
  WriteList writes;
  f.evaluate(state, writes);
  ApplyResult result{state, false, false};
  result.cas_failed = !apply_writes(writes, result.state);
  result.changed = result.state != state;
  return result;
}

bool leaves_unchanged(const WriteList& writes, const StateVector& state) {
  // Overlay of the batch's writes so far; batches are tiny, a linear scan is enough.
  std::vector<std::pair<std::size_t, Tuple>> overlay;
  auto current = [&](std::size_t coord) -> const Tuple& {
    for (auto it = overlay.rbegin(); it != overlay.rend(); ++it) {
      if (it->first == coord) return it->second;
    }
    return state[coord];
  };
  for (const auto& w : writes) {
    if (w.is_cas() && current(w.coordinate)[w.cas_field] != w.cas_expected) break;
    overlay.emplace_back(w.coordinate, w.value);
  }
  for (const auto& [coord, value] : overlay) {
    if (current(coord) != state[coord]) return false;
  }
  return true;
}

bool is_common_fixed_point(const StateVector& state, const FunctionFamily& family) {
  WriteList writes;
  for (const auto& f : family.functions) {
    writes.clear();
    f.evaluate(state, writes);
    if (!leaves_unchanged(writes, state)) return false;
  }
  return true;
}

void require_write_allowed(const UpdateFunction& f, const IntendedWrite& w, const Bounds& bounds,
                           const StateVector& observed) {
  if (w.coordinate >= bounds.size()) {
    throw ContractViolation("f" + std::to_string(f.id) + " wrote coordinate " +
                            std::to_string(w.coordinate) + " which does not exist");
  }
  if (!f.may_write(w.coordinate) && w.value != observed[w.coordinate]) {
    throw ContractViolation("f" + std::to_string(f.id) + " wrote coordinate " +
                            std::to_string(w.coordinate) + " outside its write set");
  }
  if (!bounds.contains(w.coordinate, w.value)) {
    throw ContractViolation("f" + std::to_string(f.id) + " wrote a value outside the bounds of coordinate " +
                            std::to_string(w.coordinate));
  }
}

void validate_family(const FunctionFamily& family) {
  family.bounds.require_contains(family.initial);
  const std::size_t n = family.bounds.size();
  for (std::size_t k = 0; k < family.functions.size(); ++k) {
    const auto& f = family.functions[k];
    const std::string who = family.name + " f" + std::to_string(k);
    if (f.id != k) throw StructuralError(who + ": id does not match its position");
    if (!f.evaluate) throw StructuralError(who + ": missing evaluation rule");
    for (auto c : f.read_set) {
      if (c >= n) throw StructuralError(who + ": read set out of range");
    }
    for (auto c : f.write_set) {
      if (c >= n) throw StructuralError(who + ": write set out of range");
    }
    if (f.declared.i_local && (f.write_set.size() != 1 || f.write_set[0] != f.id)) {
      throw ContractViolation(who + ": declared i-local but write set is not {" +
                              std::to_string(f.id) + "}");
    }
  }
}

FunctionFamily ascending_image(const FunctionFamily& family) {
  if (family.bounds.all_ascending()) return family;

  FunctionFamily image;
  image.name = family.name;
  image.bounds = family.bounds.ascending();
  image.initial = flip_descending(family.initial, family.bounds);

  auto natural = std::make_shared<const Bounds>(family.bounds);
  image.functions.reserve(family.functions.size());
  for (const auto& f : family.functions) {
    UpdateFunction g = f;
    g.evaluate = [natural, inner = f.evaluate](const StateVector& observed, WriteList& out) {
      const StateVector decoded = flip_descending(observed, *natural);
      const std::size_t first = out.size();
      inner(decoded, out);
      for (std::size_t k = first; k < out.size(); ++k) {
        auto& w = out[k];
        const auto fields = natural->fields(w.coordinate);
        w.value = flip_descending(w.value, fields);
        if (w.is_cas() && fields[w.cas_field].orientation == Orientation::kDescending) {
          w.cas_expected = fields[w.cas_field].max - w.cas_expected;
        }
      }
    };
    image.functions.push_back(std::move(g));
  }
  if (family.decode) {
    image.decode = [natural, decode = family.decode](const StateVector& s) {
      return decode(flip_descending(s, *natural));
    };
  }
  if (family.domain) {
    image.domain = [natural, domain = family.domain](const StateVector& s) {
      return domain(flip_descending(s, *natural));
    };
  }
  return image;
}

}  // namespace lfp
