#include <gtest/gtest.h>

#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/magic.hpp"
#include "boxlab/random.hpp"
#include "boxlab/seminorm.hpp"
#include "test_support.hpp"

using namespace boxlab;
using namespace boxlab::testing;

namespace {

StarSystem star_of(const FiniteSystem& sys) {
  const auto o = iota_order(sys.dimension());
  return build_star_system(sys, o);
}

FiniteSystem two_transpositions() { return FiniteSystem(uniform_weights(4), {perm({1, 0, 3, 2})}); }

std::vector<FiniteSystem> small_systems() {
  auto out = random_systems(401, 12, 3, 2);
  out.push_back(FiniteSystem(uniform_weights(2), {perm({1, 0}), perm({1, 0})}));
  out.push_back(FiniteSystem(uniform_weights(3), {Permutation(3), Permutation(3)}));
  out.push_back(z4_shift1_shift2());
  for (auto& s : random_systems(402, 12, 5, 1)) out.push_back(std::move(s));
  return out;
}

VertexFunctions random_vfs(Rng& rng, unsigned d, std::size_t n) {
  VertexFunctions fs(d);
  for (std::uint32_t v = 0; v < fs.width(); ++v) fs.set(v, random_observable(rng, n));
  return fs;
}

}  // namespace

TEST(StarSystemTest, IdentityTransformsGiveDiagonalCarrier) {
  const StarSystem star = star_of(FiniteSystem(uniform_weights(3), {Permutation(3), Permutation(3)}));
  ASSERT_EQ(star.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    for (PointId v : star.tuple(i)) EXPECT_EQ(v, i);
  }
  for (const auto& t : star.star_transforms()) EXPECT_TRUE(t.is_identity());
  EXPECT_EQ(wstar_partition(star), Partition::singletons(3));
  EXPECT_EQ(sharp_invariant_partition(star), Partition::singletons(3));
}

TEST(StarSystemTest, ErgodicRotationOnThreePoints) {
  const StarSystem star = star_of(FiniteSystem::cyclic(3, std::vector<std::int64_t>{1}));
  ASSERT_EQ(star.size(), 9u);
  const Permutation& t = star.star_transforms()[0];
  for (PointId i = 0; i < 9; ++i) {
    EXPECT_EQ(star.tuple(t(i))[0], (star.tuple(i)[0] + 1) % 3);
    EXPECT_EQ(star.tuple(t(i))[1], star.tuple(i)[1]);
  }
  EXPECT_EQ(wstar_partition(star), orbit_partition(t));
  EXPECT_EQ(wstar_partition(star).cell_count(), 3u);
}

TEST(StarSystemTest, Z4CarrierAndSideOrbitsMatchGoldenFiles) {
  const StarSystem star = star_of(z4_shift1_shift2());
  const std::string dir = BOXLAB_TEST_DATA_DIR;
  EXPECT_EQ(star.measure(), io::parse_measure(io::read_json_file(dir + "/z4_shift1_shift2_box.json")));
  const auto doc = io::read_json_file(dir + "/z4_shift1_shift2_wstar.json");
  std::vector<std::vector<PointId>> cells;
  for (const auto& cell : doc.at("cells")) {
    std::vector<PointId> ids;
    for (const auto& tuple : cell) {
      const auto t = tuple.get<std::vector<PointId>>();
      ids.push_back(static_cast<PointId>(*star.measure().find(t)));
    }
    cells.push_back(ids);
  }
  EXPECT_EQ(wstar_partition(star), Partition(star.size(), cells));
}

TEST(StarSystemTest, SideOrbitsAreDiscreteForTwoOrMoreTransforms) {
  for (const auto& sys : small_systems()) {
    if (sys.dimension() < 2) continue;
    const StarSystem star = star_of(sys);
    EXPECT_EQ(wstar_partition(star), Partition::singletons(star.size()));
  }
}

TEST(StarSystemTest, StructuralInvariants) {
  for (const auto& sys : small_systems()) {
    const StarSystem star = star_of(sys);
    EXPECT_TRUE(factor_map_check(star));
    EXPECT_TRUE(extension_commutation_check(star));
    EXPECT_TRUE(invariant_descent_check(star));
    EXPECT_EQ(star.as_system().size(), star.size());
  }
}

TEST(DeriveSStar, OneTransform) {
  const StarSystem star = star_of(FiniteSystem::cyclic(3, std::vector<std::int64_t>{1}));
  const auto s = derive_S_star(star);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], star.star_transforms()[0]);
}

TEST(DeriveSStar, QuotientsRecoverSideTransformsAndIntertwine) {
  for (const auto& sys : small_systems()) {
    const StarSystem star = star_of(sys);
    const auto s = derive_S_star(star);
    const Permutation s1_inv = s[0].inverse();
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(i == 0 ? s[0] : s[i] * s1_inv, star.star_transforms()[i]);
      const Permutation base = i == 0 ? sys.transform(0) : sys.transform(i) * sys.transform(0);
      for (PointId x = 0; x < star.size(); ++x) EXPECT_EQ(star.tuple(s[i](x))[0], base(star.tuple(x)[0]));
    }
  }
}

TEST(DeriveSStar, NeedsEveryTransformInTheOrder) {
  const std::vector<std::size_t> o{1};
  EXPECT_THROW(derive_S_star(build_star_system(z4_shift1_shift2(), o)), PreconditionError);
}

TEST(SharpPartition, OneTransformIsTheOrbitPartition) {
  const StarSystem star = star_of(two_transpositions());
  EXPECT_EQ(sharp_invariant_partition(star), Partition(4, {{0, 1}, {2, 3}}));
  const StarSystem ergodic = star_of(FiniteSystem::cyclic(4, std::vector<std::int64_t>{1}));
  EXPECT_EQ(sharp_invariant_partition(ergodic), Partition::trivial(4));
}

TEST(SharpPartition, PullBackReproducesZed) {
  auto systems = small_systems();
  for (auto& s : random_systems(403, 10, 6, 2)) systems.push_back(std::move(s));
  for (const auto& sys : systems) {
    const auto o = iota_order(sys.dimension());
    EXPECT_EQ(zed_from_sharp(build_star_system(sys, o)), zed_partition(sys, o));
  }
}

TEST(StarExpectation, Examples) {
  const StarSystem star = star_of(FiniteSystem::cyclic(3, std::vector<std::int64_t>{1}));
  const Observable one = Observable::constant(star.size(), q("1"));
  const Partition w = wstar_partition(star);
  EXPECT_EQ(star_conditional_expectation(star, one, w), one);
  Rng rng(1);
  const Observable F = random_observable(rng, star.size());
  EXPECT_EQ(star_conditional_expectation(star, F, Partition::singletons(star.size())), F);
  const Observable cell = Observable::indicator(star.size(), w.cells()[1]);
  EXPECT_EQ(star_conditional_expectation(star, cell, w), cell);
}

TEST(StarSeminorm, ConstantsAndOneTransform) {
  const StarSystem star = star_of(z4_shift1_shift2());
  EXPECT_EQ(star_seminorm_pow(star, Observable::constant(star.size(), q("1/2"))).pow, q("1/16"));

  Rng rng(2);
  for (const auto& sys : small_systems()) {
    if (sys.dimension() != 1) continue;
    const StarSystem s1 = star_of(sys);
    const Observable F = random_observable(rng, s1.size());
    const Observable e = star_conditional_expectation(s1, F, orbit_partition(s1.star_transforms()[0]));
    EXPECT_EQ(star_seminorm_pow(s1, F).pow, l2_norm_sq(e, s1.weights()));
  }
}

TEST(StarSeminorm, SignFunctionOnTwoPointSwapIsNotNull) {
  const FiniteSystem sys(uniform_weights(2), {perm({1, 0}), perm({1, 0})});
  EXPECT_EQ(seminorm_pow(sys, iota_order(2), obs({"1", "-1"})).pow, q("1"));
  const StarSystem star = star_of(sys);
  Rng rng(3);
  VertexFunctions fs = random_vfs(rng, 2, 2);
  fs.set(0, obs({"1", "-1"}));
  EXPECT_THROW(normstar_check(star, fs), PreconditionError);
}

TEST(StarSeminorm, ProductSupportedOnNullPointsVanishes) {
  const FiniteSystem sys({q("1/2"), q("1/2"), q("0"), q("0"), q("0")},
                         {perm({1, 0, 3, 4, 2}), perm({0, 1, 4, 2, 3})});
  const StarSystem star = star_of(sys);
  Rng rng(3);
  VertexFunctions fs = random_vfs(rng, 2, 5);
  fs.set(0, obs({"0", "0", "1", "-1", "2"}));
  EXPECT_EQ(star_seminorm_pow(star, product_on_carrier(star, fs)).pow, q("0"));
  EXPECT_TRUE(normstar_check(star, fs));
}

TEST(StarSeminorm, OneTransformNullProduct) {
  const StarSystem star = star_of(two_transpositions());
  Rng rng(3);
  VertexFunctions fs = random_vfs(rng, 1, 4);
  fs.set(0, obs({"1", "-1", "2", "-2"}));
  EXPECT_EQ(star_seminorm_pow(star, product_on_carrier(star, fs)).pow, q("0"));
}

TEST(Magic, OrthogonalToSideInvariantsHasNullSeminorm) {
  Rng rng(4);
  for (const auto& sys : small_systems()) {
    const StarSystem star = star_of(sys);
    const auto box = star_box_measure(star);
    const Partition w = wstar_partition(star);
    for (int k = 0; k < 3; ++k) {
      const Observable G = random_observable(rng, star.size());
      const auto r = magic_check(star, box, G - star_conditional_expectation(star, G, w));
      EXPECT_TRUE(r.expectation_is_zero);
      EXPECT_EQ(r.star_pow, q("0"));
      EXPECT_TRUE(r.holds);
    }
  }
}

TEST(Magic, MeasurableFunctionHoldsVacuously) {
  const StarSystem star = star_of(FiniteSystem::cyclic(3, std::vector<std::int64_t>{1}));
  const Partition w = wstar_partition(star);
  const auto r = magic_check(star, star_box_measure(star), Observable::indicator(star.size(), w.cells()[0]));
  EXPECT_FALSE(r.expectation_is_zero);
  EXPECT_TRUE(r.holds);
}

TEST(Magic, OneTransformAlwaysHolds) {
  Rng rng(5);
  for (const auto& sys : random_systems(404, 20, 6, 1)) {
    const std::vector<std::size_t> o{0};
    const StarSystem star = build_star_system(sys, o);
    const Observable F = random_observable(rng, star.size());
    EXPECT_TRUE(magic_check(sys, o, F).holds);
  }
}

TEST(Span0, Examples) {
  const StarSystem star = star_of(two_transpositions());
  Rng rng(6);
  VertexFunctions fs = random_vfs(rng, 1, 4);
  fs.set(0, Observable::constant(4, q("0")));
  EXPECT_TRUE(span0_orthogonality_check(star, fs));
  fs.set(0, obs({"1", "-1", "2", "-2"}));
  EXPECT_TRUE(span0_orthogonality_check(star, fs));
  fs.set(0, obs({"1", "0", "0", "0"}));
  EXPECT_THROW(span0_orthogonality_check(star, fs), PreconditionError);
}

TEST(Normstar, Examples) {
  const StarSystem star = star_of(FiniteSystem(uniform_weights(2), {perm({1, 0}), perm({1, 0})}));
  Rng rng(7);
  VertexFunctions fs = random_vfs(rng, 2, 2);
  fs.set(0, Observable::constant(2, q("0")));
  EXPECT_TRUE(normstar_check(star, fs));
  fs.set(0, obs({"1", "-1"}));
  EXPECT_THROW(normstar_check(star, fs), PreconditionError);
  fs.set(0, obs({"1", "1/2"}));
  EXPECT_THROW(normstar_check(star, fs), PreconditionError);
}

TEST(Span0AndNormstar, RandomNullFunctions) {
  Rng rng(8);
  for (const auto& sys : small_systems()) {
    const auto d = static_cast<unsigned>(sys.dimension());
    const StarSystem star = star_of(sys);
    const auto box = star_box_measure(star);
    const Partition zed = zed_partition(sys, iota_order(d));
    for (int k = 0; k < 3; ++k) {
      VertexFunctions fs = random_vfs(rng, d, sys.size());
      const Observable h = *fs.get(0);
      fs.set(0, h - conditional_expectation(h, zed, sys.weights()));
      EXPECT_TRUE(span0_orthogonality_check(star, zed, fs));
      EXPECT_TRUE(normstar_check(star, box, fs));
    }
  }
}

TEST(StarBox, CapIsReported) {
  const StarSystem star = star_of(z4_shift1_shift2());
  EXPECT_THROW(star_box_measure(star, {40, 1}), ResourceError);
}
