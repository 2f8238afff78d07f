// SPDX-License-Identifier: Apache-2.0
#include "lfp/lattice.hpp"

#include <limits>
#include <ostream>
#include <sstream>

#include "lfp/errors.hpp"

namespace lfp {

Tuple::Tuple(std::initializer_list<Value> values) {
  for (Value v : values) push_back(v);
}

void Tuple::push_back(Value v) {
  if (arity_ == kMaxFields) throw StructuralError("tuple holds at most 4 fields");
  fields_[arity_++] = v;
}

bool Tuple::operator==(const Tuple& other) const noexcept {
  if (arity_ != other.arity_) return false;
  for (std::size_t f = 0; f < arity_; ++f) {
    if (fields_[f] != other.fields_[f]) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Tuple& t) {
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (f) os << ',';
    os << t[f];
  }
  return os;
}

StateVector StateVector::scalars(std::initializer_list<Value> values) {
  return scalars(std::span<const Value>(values.begin(), values.size()));
}

StateVector StateVector::scalars(std::span<const Value> values) {
  std::vector<Tuple> coords;
  coords.reserve(values.size());
  for (Value v : values) coords.push_back(Tuple{v});
  return StateVector(std::move(coords));
}

std::ostream& operator<<(std::ostream& os, const StateVector& s) {
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ' ';
    if (s[i].size() > 1) {
      os << '[' << s[i] << ']';
    } else {
      os << s[i];
    }
  }
  return os << ')';
}

Bounds::Bounds(std::vector<std::vector<FieldSpec>> per_coordinate)
    : layouts_(std::move(per_coordinate)) {
  layout_of_.resize(layouts_.size());
  for (std::size_t i = 0; i < layout_of_.size(); ++i) layout_of_[i] = static_cast<std::uint32_t>(i);
  finish();
}

Bounds::Bounds(std::vector<std::vector<FieldSpec>> layouts, std::vector<std::uint32_t> layout_of)
    : layouts_(std::move(layouts)), layout_of_(std::move(layout_of)) {
  for (auto idx : layout_of_) {
    if (idx >= layouts_.size()) throw StructuralError("coordinate refers to a missing layout");
  }
  finish();
}

Bounds Bounds::uniform(std::size_t n, std::vector<FieldSpec> fields) {
  return Bounds({std::move(fields)}, std::vector<std::uint32_t>(n, 0));
}

void Bounds::finish() {
  if (layout_of_.empty()) throw StructuralError("lattice needs at least one coordinate");
  for (const auto& layout : layouts_) {
    if (layout.empty() || layout.size() > kMaxFields) {
      throw StructuralError("coordinate layout must have 1 to 4 fields");
    }
    for (const auto& field : layout) {
      if (field.max < 0) throw StructuralError("field '" + field.name + "' has negative max");
      if (field.orientation == Orientation::kDescending) all_ascending_ = false;
    }
  }
  constexpr auto kSat = std::numeric_limits<std::uint64_t>::max();
  height_ = 0;
  cardinality_ = 1;
  for (auto idx : layout_of_) {
    for (const auto& field : layouts_[idx]) {
      height_ += field.max;
      const auto levels = static_cast<std::uint64_t>(field.max) + 1;
      cardinality_ = (cardinality_ > kSat / levels) ? kSat : cardinality_ * levels;
    }
  }
}

bool Bounds::contains(std::size_t coord, const Tuple& t) const {
  const auto layout = fields(coord);
  if (t.size() != layout.size()) return false;
  for (std::size_t f = 0; f < layout.size(); ++f) {
    if (t[f] < 0 || t[f] > layout[f].max) return false;
  }
  return true;
}

bool Bounds::contains(const StateVector& s) const {
  if (s.size() != size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!contains(i, s[i])) return false;
  }
  return true;
}

void Bounds::require_contains(const StateVector& s) const {
  if (s.size() != size()) {
    std::ostringstream msg;
    msg << "state has " << s.size() << " coordinates, lattice has " << size();
    throw StructuralError(msg.str());
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!contains(i, s[i])) {
      std::ostringstream msg;
      msg << "coordinate " << i << " value [" << s[i] << "] outside its bounds";
      throw StructuralError(msg.str());
    }
  }
}

Bounds Bounds::ascending() const {
  Bounds out = *this;
  for (auto& layout : out.layouts_) {
    for (auto& field : layout) field.orientation = Orientation::kAscending;
  }
  out.all_ascending_ = true;
  return out;
}

const char* to_string(OrderRelation r) {
  switch (r) {
    case OrderRelation::kLess: return "LT";
    case OrderRelation::kGreater: return "GT";
    case OrderRelation::kEqual: return "EQ";
    case OrderRelation::kIncomparable: return "INCOMPARABLE";
  }
  return "?";
}

namespace {

Value progress_value(Value v, const FieldSpec& field) {
  return field.orientation == Orientation::kAscending ? v : field.max - v;
}

void require_same_shape(const StateVector& a, const StateVector& b, const Bounds& bounds) {
  if (a.size() != bounds.size() || b.size() != bounds.size()) {
    throw StructuralError("order_compare: dimension mismatch");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != bounds.arity(i) || b[i].size() != bounds.arity(i)) {
      throw StructuralError("order_compare: tuple arity mismatch at coordinate " +
                            std::to_string(i));
    }
  }
}

}  // namespace

OrderRelation order_compare(const StateVector& a, const StateVector& b, const Bounds& bounds) {
  require_same_shape(a, b, bounds);
  bool some_below = false;
  bool some_above = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto layout = bounds.fields(i);
    for (std::size_t f = 0; f < layout.size(); ++f) {
      const Value pa = progress_value(a[i][f], layout[f]);
      const Value pb = progress_value(b[i][f], layout[f]);
      if (pa < pb) some_below = true;
      if (pa > pb) some_above = true;
    }
  }
  if (some_below && some_above) return OrderRelation::kIncomparable;
  if (some_below) return OrderRelation::kLess;
  if (some_above) return OrderRelation::kGreater;
  return OrderRelation::kEqual;
}

bool progress_leq(const Tuple& a, const Tuple& b, std::span<const FieldSpec> fields) {
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (progress_value(a[f], fields[f]) > progress_value(b[f], fields[f])) return false;
  }
  return true;
}

bool progress_leq(const StateVector& a, const StateVector& b, const Bounds& bounds) {
  const auto rel = order_compare(a, b, bounds);
  return rel == OrderRelation::kLess || rel == OrderRelation::kEqual;
}

Tuple progress_join(const Tuple& a, const Tuple& b, std::span<const FieldSpec> fields) {
  Tuple out = a;
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (progress_value(b[f], fields[f]) > progress_value(a[f], fields[f])) out[f] = b[f];
  }
  return out;
}

Extremes extremes(const Bounds& bounds) {
  std::vector<Tuple> bottom(bounds.size());
  std::vector<Tuple> top(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    for (const auto& field : bounds.fields(i)) {
      const bool asc = field.orientation == Orientation::kAscending;
      bottom[i].push_back(asc ? 0 : field.max);
      top[i].push_back(asc ? field.max : 0);
    }
  }
  return {StateVector(std::move(bottom)), StateVector(std::move(top))};
}

Tuple flip_descending(const Tuple& t, std::span<const FieldSpec> fields) {
  Tuple out = t;
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (fields[f].orientation == Orientation::kDescending) out[f] = fields[f].max - t[f];
  }
  return out;
}

StateVector flip_descending(const StateVector& s, const Bounds& bounds) {
  if (bounds.all_ascending()) return s;
  StateVector out = s;
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = flip_descending(s[i], bounds.fields(i));
  return out;
}

Value progress_weight(const Tuple& t, std::span<const FieldSpec> fields) {
  Value w = 0;
  for (std::size_t f = 0; f < fields.size(); ++f) w += progress_value(t[f], fields[f]);
  return w;
}

}  // namespace lfp
