// SPDX-License-Identifier: Apache-2.0
//
// Finite product lattices of bounded naturals. Every coordinate holds a small
// tuple of fields; each field has an upper bound and an orientation that says
// which direction counts as progress. DESCENDING fields realize the dual
// lattice used for greatest-fixed-point (deflationary) problems.
#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lfp {

using Value = std::int64_t;

inline constexpr std::size_t kMaxFields = 4;

enum class Orientation : std::uint8_t { kAscending, kDescending };

struct FieldSpec {
  std::string name;
  Value max = 0;
  Orientation orientation = Orientation::kAscending;

  bool operator==(const FieldSpec&) const = default;
};

/// Fixed-capacity tuple of field values for one coordinate.
class Tuple {
 public:
  Tuple() = default;
  Tuple(std::initializer_list<Value> values);
  static Tuple scalar(Value v) { return Tuple{v}; }

  std::size_t size() const noexcept { return arity_; }
  Value& operator[](std::size_t field) noexcept { return fields_[field]; }
  Value operator[](std::size_t field) const noexcept { return fields_[field]; }
  std::span<const Value> values() const noexcept { return {fields_.data(), arity_}; }
  void push_back(Value v);

  bool operator==(const Tuple& other) const noexcept;
  auto operator<=>(const Tuple& other) const noexcept {
    return std::lexicographical_compare_three_way(
        fields_.begin(), fields_.begin() + arity_, other.fields_.begin(),
        other.fields_.begin() + other.arity_);
  }

 private:
  std::array<Value, kMaxFields> fields_{};
  std::uint8_t arity_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Tuple& t);

/// The global state G: one tuple per coordinate, in natural (unflipped) values.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<Tuple> coords) : coords_(std::move(coords)) {}
  /// Single-field state from plain integers.
  static StateVector scalars(std::initializer_list<Value> values);
  static StateVector scalars(std::span<const Value> values);

  std::size_t size() const noexcept { return coords_.size(); }
  Tuple& operator[](std::size_t coord) noexcept { return coords_[coord]; }
  const Tuple& operator[](std::size_t coord) const noexcept { return coords_[coord]; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  bool operator==(const StateVector&) const = default;
  auto operator<=>(const StateVector& other) const { return coords_ <=> other.coords_; }

 private:
  std::vector<Tuple> coords_;
};

std::ostream& operator<<(std::ostream& os, const StateVector& s);

class Bounds {
 public:
  Bounds() = default;
  /// One layout per coordinate.
  explicit Bounds(std::vector<std::vector<FieldSpec>> per_coordinate);
  /// Shared layouts: coordinate i uses layouts[layout_of[i]].
  Bounds(std::vector<std::vector<FieldSpec>> layouts, std::vector<std::uint32_t> layout_of);
  static Bounds uniform(std::size_t n, std::vector<FieldSpec> fields);

  std::size_t size() const noexcept { return layout_of_.size(); }
  std::span<const FieldSpec> fields(std::size_t coord) const {
    return layouts_[layout_of_[coord]];
  }
  std::size_t arity(std::size_t coord) const { return fields(coord).size(); }
  bool all_ascending() const noexcept { return all_ascending_; }

  /// Length of the longest chain: the sum of every field's max.
  Value height() const noexcept { return height_; }
  /// Number of lattice elements, saturating at UINT64_MAX.
  std::uint64_t cardinality() const noexcept { return cardinality_; }

  bool contains(const StateVector& s) const;
  bool contains(std::size_t coord, const Tuple& t) const;
  /// Throws StructuralError unless `s` has this layout and lies within bounds.
  void require_contains(const StateVector& s) const;

  /// Same layout with every field ascending.
  Bounds ascending() const;

  bool operator==(const Bounds&) const = default;

 private:
  void finish();

  std::vector<std::vector<FieldSpec>> layouts_;
  std::vector<std::uint32_t> layout_of_;
  bool all_ascending_ = true;
  Value height_ = 0;
  std::uint64_t cardinality_ = 1;
};

enum class OrderRelation { kLess, kGreater, kEqual, kIncomparable };

const char* to_string(OrderRelation r);

/// Relation of `a` to `b` in the progress order.
OrderRelation order_compare(const StateVector& a, const StateVector& b, const Bounds& bounds);

/// a ≤ b in the progress order.
bool progress_leq(const StateVector& a, const StateVector& b, const Bounds& bounds);
bool progress_leq(const Tuple& a, const Tuple& b, std::span<const FieldSpec> fields);

/// Fieldwise progress-order maximum of two tuples of the same coordinate.
Tuple progress_join(const Tuple& a, const Tuple& b, std::span<const FieldSpec> fields);

struct Extremes {
  StateVector bottom;
  StateVector top;
};

Extremes extremes(const Bounds& bounds);

/// Maps every DESCENDING field v to max - v. An involution; applied to a
/// state it yields the state's image in the all-ascending lattice.
Tuple flip_descending(const Tuple& t, std::span<const FieldSpec> fields);
StateVector flip_descending(const StateVector& s, const Bounds& bounds);

/// Progress-order rank of a tuple: the sum of its flipped field values.
Value progress_weight(const Tuple& t, std::span<const FieldSpec> fields);

}  // namespace lfp
