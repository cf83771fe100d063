#pragma once

#include <span>
#include <vector>

#include "boxlab/box_measure.hpp"
#include "boxlab/seminorm.hpp"
#include "boxlab/system.hpp"

namespace boxlab {

/// The extension (X*, mu*, T_1*, ..., T_d*) restricted to the support of the
/// box measure. Carrier points are the support tuples in canonical order;
/// transforms are permutations of carrier indices. Digit i of the cube
/// carries base transform order[i], and star/diagonal transforms are indexed
/// by digit.
class StarSystem {
 public:
  StarSystem(FiniteSystem base, std::vector<std::size_t> order, SparseCubeMeasure measure,
             std::vector<Permutation> star_transforms, std::vector<Permutation> diag_transforms);

  const FiniteSystem& base() const { return base_; }
  std::span<const std::size_t> order() const { return order_; }
  unsigned dimension() const { return static_cast<unsigned>(order_.size()); }
  const SparseCubeMeasure& measure() const { return measure_; }
  std::size_t size() const { return measure_.size(); }
  std::span<const PointId> tuple(std::size_t i) const { return measure_.tuple(i); }
  std::span<const Rational> weights() const { return measure_.masses(); }
  std::span<const Permutation> star_transforms() const { return star_; }
  std::span<const Permutation> diag_transforms() const { return diag_; }

  /// The carrier as a finite system whose transforms are T_1*, ..., T_d*.
  FiniteSystem as_system() const;

 private:
  FiniteSystem base_;
  std::vector<std::size_t> order_;
  SparseCubeMeasure measure_;
  std::vector<Permutation> star_;
  std::vector<Permutation> diag_;
};

/// Builds the carrier and its transforms and checks every StarSystem
/// invariant (throws InvariantViolation if one fails).
StarSystem build_star_system(const FiniteSystem& sys, std::span<const std::size_t> order,
                             const ComputeOptions& opts = {});

/// Measure preservation onto the base and intertwining of T_i* with its base
/// transform under x -> x_0.
bool factor_map_check(const StarSystem& star);

/// S_1* = T_1* and S_i* = T_i* T_1* (base indices), so that x -> x_0
/// intertwines S_i* with S_i = T_i T_1. Requires the order to list every
/// base transform.
std::vector<Permutation> derive_S_star(const StarSystem& star);

/// Join of the invariant algebras of T_1*, ..., T_d*.
Partition wstar_partition(const StarSystem& star);

/// Projection of the carrier onto x_sharp = (x_eps, eps != 0).
struct SharpFactor {
  std::size_t width = 0;                   // 2^d - 1
  std::vector<PointId> tuples;             // distinct projections, lexicographic
  std::vector<Rational> weights;           // image of mu*
  std::vector<std::size_t> carrier_to_sharp;
  std::vector<Permutation> transforms;     // T_i^sharp on the projected support

  std::size_t size() const { return weights.size(); }
  std::span<const PointId> tuple(std::size_t i) const { return {tuples.data() + i * width, width}; }
};

SharpFactor sharp_factor(const StarSystem& star);

/// Sets invariant under every T_i^sharp, as a partition of the projected
/// support.
Partition sharp_invariant_partition(const StarSystem& star);
Partition sharp_invariant_partition(const SharpFactor& sharp);

/// Pulls the invariant cells of X_sharp back to X through the relation
/// 1_B(x_0) = 1_A(x_sharp) on the support; zero-weight points become
/// singletons. Throws InvariantViolation if two pull-backs overlap.
Partition zed_from_sharp(const StarSystem& star);

/// Partition of the carrier by the value of x_sharp.
Partition xsharp_partition(const StarSystem& star);

Observable star_conditional_expectation(const StarSystem& star, const Observable& F, const Partition& p);

/// Box measure of the carrier system under T_1*, ..., T_d*.
SparseCubeMeasure star_box_measure(const StarSystem& star, const ComputeOptions& opts = {});

SeminormValue star_seminorm_pow(const StarSystem& star, const Observable& F, const ComputeOptions& opts = {});
SeminormValue star_seminorm_pow(const StarSystem& star, const SparseCubeMeasure& star_box, const Observable& F);

struct MagicResult {
  bool expectation_is_zero = false;
  Rational star_pow;
  bool holds = false;  // !expectation_is_zero || star_pow == 0
};

MagicResult magic_check(const StarSystem& star, const SparseCubeMeasure& star_box, const Observable& F);
MagicResult magic_check(const FiniteSystem& sys, std::span<const std::size_t> order, const Observable& F,
                        const ComputeOptions& opts = {});

/// F(x) = prod_eps f_eps(x_eps) on the carrier.
Observable product_on_carrier(const StarSystem& star, const VertexFunctions& fs);

/// E(F | X_sharp) = 0 for F = prod f_eps(x_eps). Throws PreconditionError
/// unless E(f_0 | Z) = 0.
bool span0_orthogonality_check(const StarSystem& star, const VertexFunctions& fs);
bool span0_orthogonality_check(const StarSystem& star, const Partition& zed, const VertexFunctions& fs);

/// |||F|||* = 0 for F = prod f_eps(x_eps). Throws PreconditionError unless
/// |||f_0||| = 0.
bool normstar_check(const StarSystem& star, const VertexFunctions& fs, const ComputeOptions& opts = {});
bool normstar_check(const StarSystem& star, const SparseCubeMeasure& star_box, const VertexFunctions& fs);

/// T_i^diag (T_i*)^-1 fixes every coordinate with eps_i = 0 and applies the
/// base transform to those with eps_i = 1.
bool extension_commutation_check(const StarSystem& star);

/// Functions invariant under every T_i^diag (T_i*)^-1 depend on x_0 only:
/// the orbit components of those maps are exactly the fibers of x -> x_0.
bool invariant_descent_check(const StarSystem& star);

}  // namespace boxlab
