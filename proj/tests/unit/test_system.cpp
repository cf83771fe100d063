#include <gtest/gtest.h>

#include "boxlab/errors.hpp"
#include "boxlab/system.hpp"
#include "test_support.hpp"

using namespace boxlab;
using namespace boxlab::testing;

namespace {

RawSystem raw(std::vector<std::string> weights, std::vector<std::vector<std::int64_t>> transforms) {
  RawSystem r;
  r.points = static_cast<std::int64_t>(weights.size());
  for (const auto& w : weights) r.weights.push_back(q(w));
  r.transforms = std::move(transforms);
  return r;
}

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

Partition part(std::size_t n, std::vector<std::vector<PointId>> cells) { return Partition(n, std::move(cells)); }

}  // namespace

TEST(Validate, CyclicGroupWithTwoShiftsIsValid) {
  EXPECT_TRUE(validate_system(raw({"1/4", "1/4", "1/4", "1/4"}, {{1, 2, 3, 0}, {2, 3, 0, 1}})).ok());
}

TEST(Validate, IdentityOnTwoPointsIsValid) {
  EXPECT_TRUE(validate_system(raw({"1/2", "1/2"}, {{0, 1}})).ok());
}

TEST(Validate, SwapWithUnequalWeightsBreaksMeasurePreservation) {
  const auto r = validate_system(raw({"1/3", "2/3"}, {{1, 0}}));
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "measure preservation"));
}

TEST(Validate, ReportsEveryViolation) {
  const auto r = validate_system(raw({"-1/2", "1/2", "1/2"}, {{1, 0, 2}, {0, 2, 1}}));
  EXPECT_TRUE(mentions(r, "negative"));
  EXPECT_TRUE(mentions(r, "commutation"));
  EXPECT_TRUE(mentions(r, "sum"));
}

TEST(Validate, NonBijectionIsStructural) {
  try {
    validate_system(raw({"1/3", "1/3", "1/3"}, {{1, 2, 0}, {0, 0, 1}}));
    FAIL() << "expected StructuralError";
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("transform 2 not a bijection"), std::string::npos);
  }
  EXPECT_THROW(validate_system(raw({"1/2", "1/2"}, {{0}})), StructuralError);
}

TEST(FiniteSystemTest, ConstructorRejectsInvalidData) {
  EXPECT_THROW(FiniteSystem({q("1/3"), q("2/3")}, {perm({1, 0})}), InvariantViolation);
  EXPECT_THROW(FiniteSystem({q("1/2"), q("1/4")}, {}), InvariantViolation);
  EXPECT_NO_THROW(FiniteSystem({q("1/2"), q("1/2")}, {perm({1, 0})}));
}

TEST(FiniteSystemTest, CheckOrderGuards) {
  const FiniteSystem sys = z4_shift1_shift2();
  const std::vector<std::size_t> empty, bad{2}, repeated{0, 0}, good{1, 0};
  EXPECT_THROW(check_order(sys, empty), PreconditionError);
  EXPECT_THROW(check_order(sys, bad), PreconditionError);
  EXPECT_THROW(check_order(sys, repeated), PreconditionError);
  EXPECT_NO_THROW(check_order(sys, good));
}

TEST(OrbitPartition, SingleCycle) {
  EXPECT_EQ(orbit_partition(Permutation::shift(4, 1)), Partition::trivial(4));
}

TEST(OrbitPartition, TwoTranspositions) {
  EXPECT_EQ(orbit_partition(perm({1, 0, 3, 2})), part(4, {{0, 1}, {2, 3}}));
}

TEST(OrbitPartition, IdentityGivesSingletons) {
  EXPECT_EQ(orbit_partition(Permutation(5)), Partition::singletons(5));
}

TEST(JoinPartitions, TransversalCellsGiveSingletons) {
  const Partition parts[] = {part(4, {{0, 1}, {2, 3}}), part(4, {{0, 2}, {1, 3}})};
  EXPECT_EQ(join_partitions(parts), Partition::singletons(4));
}

TEST(JoinPartitions, TrivialPartitionIsNeutralAndJoinIsIdempotent) {
  const Partition p = part(5, {{0, 3}, {1, 2, 4}});
  const Partition with_whole[] = {p, Partition::trivial(5)};
  const Partition twice[] = {p, p};
  EXPECT_EQ(join_partitions(with_whole), p);
  EXPECT_EQ(join_partitions(twice), p);
}

TEST(JoinPartitions, AssociativeAndCommutative) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Partition> ps;
    for (int k = 0; k < 3; ++k) {
      std::vector<std::size_t> labels(6);
      for (auto& l : labels) l = static_cast<std::size_t>(rng.uniform(0, 2));
      ps.push_back(Partition::from_labels(labels));
    }
    const Partition ab[] = {ps[0], ps[1]};
    const Partition ba[] = {ps[1], ps[0]};
    EXPECT_EQ(join_partitions(ab), join_partitions(ba));
    const Partition ab_c[] = {join_partitions(ab), ps[2]};
    const Partition bc[] = {ps[1], ps[2]};
    const Partition a_bc[] = {ps[0], join_partitions(bc)};
    EXPECT_EQ(join_partitions(ab_c), join_partitions(a_bc));
  }
}

TEST(PartitionTest, RejectsOverlapsAndGaps) {
  EXPECT_THROW(part(3, {{0, 1}, {1, 2}}), StructuralError);
  EXPECT_THROW(part(3, {{0, 1}}), StructuralError);
  EXPECT_EQ(part(3, {{2, 0}, {1}}).cells().front(), (std::vector<PointId>{0, 2}));
}

TEST(ConditionalExpectation, MeanZeroCell) {
  const Observable f = obs({"1", "-1"});
  EXPECT_TRUE(conditional_expectation(f, Partition::trivial(2), uniform_weights(2)).is_zero());
}

TEST(ConditionalExpectation, SingletonsAreIdentity) {
  const Observable f = obs({"3/7", "-2", "5"});
  EXPECT_EQ(conditional_expectation(f, Partition::singletons(3), uniform_weights(3)), f);
}

TEST(ConditionalExpectation, CellAverages) {
  const Observable f = obs({"1", "2", "3", "4"});
  EXPECT_EQ(conditional_expectation(f, part(4, {{0, 1}, {2, 3}}), uniform_weights(4)),
            obs({"3/2", "3/2", "7/2", "7/2"}));
}

TEST(ConditionalExpectation, ZeroWeightCellsMapToZero) {
  const Observable f = obs({"1", "5", "7"});
  const std::vector<Rational> w = {q("1"), q("0"), q("0")};
  EXPECT_EQ(conditional_expectation(f, part(3, {{0}, {1, 2}}), w), obs({"1", "0", "0"}));
}

TEST(ConditionalExpectation, IdempotentContractiveAndInvariant) {
  Rng rng(9);
  for (const auto& sys : random_systems(17, 40, 6, 2)) {
    for (const auto& t : sys.transforms()) {
      const Partition p = orbit_partition(sys, t);
      for (const auto& cycle : p.cells()) {
        for (PointId x : cycle) EXPECT_EQ(p.cell_of(t(x)), p.cell_of(x));
      }
      for (int k = 0; k < 5; ++k) {
        const Observable f = random_observable(rng, sys.size(), 3);
        const Observable e = conditional_expectation(f, p, sys.weights());
        EXPECT_EQ(conditional_expectation(e, p, sys.weights()), e);
        EXPECT_LE(l2_norm_sq(e, sys.weights()), l2_norm_sq(f, sys.weights()));
        EXPECT_EQ(compose(e, t), e);
      }
    }
  }
}

TEST(OrbitComponents, MeetOfOrbitPartitions) {
  const Permutation ts[] = {perm({1, 0, 2, 3}), perm({0, 2, 1, 3})};
  EXPECT_EQ(orbit_components(4, ts), part(4, {{0, 1, 2}, {3}}));
}

TEST(ObservableTest, SupBoundIsEnforced) {
  EXPECT_THROW(Observable({q("2")}, q("1")), InvariantViolation);
  const Observable f({q("-3/2"), q("1")});
  EXPECT_EQ(f.sup_norm(), q("3/2"));
  EXPECT_EQ(inner_product(f, f, uniform_weights(2)), q("13/8"));
  EXPECT_EQ(integral(f, uniform_weights(2)), q("-1/4"));
}
