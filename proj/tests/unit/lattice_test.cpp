// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "lfp/counterexamples.hpp"
#include "lfp/errors.hpp"
#include "lfp/family.hpp"
#include "lfp/interleaved.hpp"
#include "lfp/lattice.hpp"
#include "lfp/parallel.hpp"
#include "lfp/problems.hpp"

namespace lfp {
namespace {

Bounds bits(std::size_t n) { return Bounds::uniform(n, {{"b", 1, Orientation::kAscending}}); }

StateVector random_state(const Bounds& b, std::mt19937_64& rng) {
  std::vector<Tuple> coords;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Tuple t;
    for (const auto& f : b.fields(i)) t.push_back(std::uniform_int_distribution<Value>(0, f.max)(rng));
    coords.push_back(t);
  }
  return StateVector(std::move(coords));
}

Bounds mixed_bounds() {
  return Bounds::uniform(3, {{"dist", 27, Orientation::kDescending}, {"level", 4, Orientation::kAscending}});
}

TEST(OrderCompare, AscendingComponentwise) {
  EXPECT_EQ(order_compare(StateVector::scalars({0, 0}), StateVector::scalars({1, 0}), bits(2)), OrderRelation::kLess);
  EXPECT_EQ(order_compare(StateVector::scalars({1, 0}), StateVector::scalars({0, 1}), bits(2)),
            OrderRelation::kIncomparable);
  EXPECT_EQ(order_compare(StateVector::scalars({1, 1}), StateVector::scalars({1, 1}), bits(2)), OrderRelation::kEqual);
  EXPECT_EQ(order_compare(StateVector::scalars({1, 1}), StateVector::scalars({0, 1}), bits(2)),
            OrderRelation::kGreater);
}

TEST(OrderCompare, DescendingFieldReversesOrder) {
  const auto b = Bounds::uniform(1, {{"dist", 27, Orientation::kDescending}});
  EXPECT_EQ(order_compare(StateVector::scalars({9}), StateVector::scalars({7}), b), OrderRelation::kLess);
}

TEST(OrderCompare, DimensionMismatchIsStructural) {
  EXPECT_THROW(order_compare(StateVector::scalars({0}), StateVector::scalars({0, 0}), bits(2)), StructuralError);
}

TEST(OrderCompare, PartialOrderOnSampledTriples) {
  const auto b = mixed_bounds();
  std::mt19937_64 rng(5);
  for (int k = 0; k < 2000; ++k) {
    const auto x = random_state(b, rng);
    const auto y = random_state(b, rng);
    const auto z = random_state(b, rng);
    EXPECT_EQ(order_compare(x, x, b), OrderRelation::kEqual);
    if (progress_leq(x, y, b) && progress_leq(y, x, b)) EXPECT_EQ(x, y);
    if (progress_leq(x, y, b) && progress_leq(y, z, b)) EXPECT_TRUE(progress_leq(x, z, b));
  }
}

TEST(Extremes, OneBitPerCoordinate) {
  const auto e = extremes(bits(2));
  EXPECT_EQ(e.bottom, StateVector::scalars({0, 0}));
  EXPECT_EQ(e.top, StateVector::scalars({1, 1}));
}

TEST(Extremes, DescendingBottomIsAllMax) {
  const auto e = extremes(Bounds::uniform(3, {{"dist", 27, Orientation::kDescending}}));
  EXPECT_EQ(e.bottom, StateVector::scalars({27, 27, 27}));
  EXPECT_EQ(e.top, StateVector::scalars({0, 0, 0}));
}

TEST(Extremes, MixedOrientationPerField) {
  const auto e = extremes(mixed_bounds());
  for (const auto& t : e.bottom) EXPECT_EQ(t, (Tuple{27, 0}));
  for (const auto& t : e.top) EXPECT_EQ(t, (Tuple{0, 4}));
}

TEST(Extremes, BracketEverySampledState) {
  const auto b = mixed_bounds();
  const auto e = extremes(b);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 1000; ++k) {
    const auto g = random_state(b, rng);
    EXPECT_TRUE(progress_leq(e.bottom, g, b));
    EXPECT_TRUE(progress_leq(g, e.top, b));
  }
}

TEST(Bounds, RejectsOutOfRangeState) {
  EXPECT_FALSE(bits(2).contains(StateVector::scalars({0, 2})));
  EXPECT_THROW(bits(2).require_contains(StateVector::scalars({0, 2})), StructuralError);
  EXPECT_EQ(mixed_bounds().height(), 3 * (27 + 4));
}

TEST(Flip, IsAnInvolution) {
  const auto b = mixed_bounds();
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto g = random_state(b, rng);
    EXPECT_EQ(flip_descending(flip_descending(g, b), b), g);
  }
}

TEST(CommonFixedPoint, TwoBitFamily) {
  const auto fam = two_bit_family();
  EXPECT_FALSE(is_common_fixed_point(StateVector::scalars({0, 0}), fam));
  EXPECT_TRUE(is_common_fixed_point(StateVector::scalars({1, 1}), fam));
  EXPECT_EQ(apply_function(fam.functions[0], StateVector::scalars({0, 0})).state, StateVector::scalars({1, 0}));
}

TEST(CommonFixedPoint, ThreeBitChainStuckState) {
  const auto fam = three_bit_chain_family();
  EXPECT_FALSE(is_common_fixed_point(StateVector::scalars({1, 0, 0}), fam));
  EXPECT_EQ(apply_function(fam.functions[1], StateVector::scalars({1, 0, 0})).state,
            StateVector::scalars({1, 1, 0}));
}

TEST(CommonFixedPoint, ZeroFunctionsFixEverything) {
  FunctionFamily fam;
  fam.bounds = bits(2);
  fam.initial = StateVector::scalars({0, 1});
  EXPECT_TRUE(is_common_fixed_point(fam.initial, fam));
}

TEST(ValidateFamily, CatchesBadDescriptors) {
  auto fam = two_bit_family();
  fam.functions[1].write_set = {0, 1};
  EXPECT_THROW(validate_family(fam), ContractViolation);

  fam = two_bit_family();
  fam.initial = StateVector::scalars({0, 3});
  EXPECT_THROW(validate_family(fam), StructuralError);
}

TEST(RequireWriteAllowed, ForeignCoordinate) {
  const auto fam = two_bit_family();
  const auto g = StateVector::scalars({0, 0});
  EXPECT_NO_THROW(require_write_allowed(fam.functions[0], IntendedWrite::plain(0, {1}), fam.bounds, g));
  // Writing back the observed value of a foreign coordinate is tolerated.
  EXPECT_NO_THROW(require_write_allowed(fam.functions[0], IntendedWrite::plain(1, {0}), fam.bounds, g));
  EXPECT_THROW(require_write_allowed(fam.functions[0], IntendedWrite::plain(1, {1}), fam.bounds, g),
               ContractViolation);
  EXPECT_THROW(require_write_allowed(fam.functions[0], IntendedWrite::plain(0, {2}), fam.bounds, g),
               ContractViolation);
}

// Running on a DESCENDING family must match running on its ascending image
// and flipping the result back.
TEST(DualLattice, EnginesCommuteWithTheFlip) {
  Digraph g{4, {{0, 1, 5}, {1, 2, 2}, {0, 2, 9}, {2, 3, 1}}};
  const auto fam = edge_relaxation_family(g);
  const auto image = ascending_image(fam);
  ASSERT_TRUE(image.bounds.all_ascending());
  EXPECT_EQ(image.initial, flip_descending(fam.initial, fam.bounds));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto natural = run_interleaved(fam, FairSchedule::seeded_random(seed));
    const auto flipped = run_interleaved(image, FairSchedule::seeded_random(seed));
    ASSERT_EQ(natural.states.size(), flipped.states.size());
    for (std::size_t k = 0; k < natural.states.size(); ++k) {
      EXPECT_EQ(natural.states[k], flip_descending(flipped.states[k], fam.bounds));
    }
    ParallelConfig cfg;
    cfg.seed = seed;
    const auto pn = run_parallel(fam, cfg);
    const auto pf = run_parallel(image, cfg);
    EXPECT_EQ(pn.terminal(), flip_descending(pf.terminal(), fam.bounds));
    EXPECT_EQ(pn.time_units, pf.time_units);
  }
}

}  // namespace
}  // namespace lfp
