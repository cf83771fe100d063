#pragma once

#include <span>
#include <vector>

#include "boxlab/box_measure.hpp"
#include "boxlab/system.hpp"

namespace boxlab {

/// The exact 2^d-th power of a box seminorm.
struct SeminormValue {
  unsigned d = 0;
  Rational pow;
  std::vector<std::size_t> order;

  double root() const { return root_of_power(pow, d); }
};

/// Integral of f placed at every vertex against the box measure.
SeminormValue seminorm_pow(const FiniteSystem& sys, std::span<const std::size_t> order,
                           const Observable& f, const ComputeOptions& opts = {});
Rational seminorm_pow(const SparseCubeMeasure& box, const Observable& f);

/// Iterated-average formula evaluated as an exact finite multi-sum: each
/// average over n_i runs over one period of T_i. Shares no code with the
/// box-measure construction.
Rational limit_formula_integral(const FiniteSystem& sys, std::span<const std::size_t> order,
                                const VertexFunctions& fs, unsigned threads = 1);

SeminormValue seminorm_oracle_pow(const FiniteSystem& sys, std::span<const std::size_t> order,
                                  const Observable& f, unsigned threads = 1);

/// (1/L) sum_{n<L} pow_{T_1..T_{d-1}}(f o T_d^n * f), recursing down to the
/// one-transform case sum mu * E(f | I(T))^2.
SeminormValue seminorm_recursion_pow(const FiniteSystem& sys, std::span<const std::size_t> order,
                                     const Observable& f);

struct CsgResult {
  Rational integral;
  Rational lhs_pow;  // |integral|^(2^d)
  Rational rhs_pow;  // product of the vertex seminorm powers
  bool holds = false;
};

CsgResult csg_check(const SparseCubeMeasure& box, const VertexFunctions& fs);
CsgResult csg_check(const FiniteSystem& sys, std::span<const std::size_t> order,
                    const VertexFunctions& fs, const ComputeOptions& opts = {});

struct TriangleResult {
  double lhs = 0;  // |||f + g|||
  double rhs = 0;  // |||f||| + |||g|||
  bool holds = false;
};

inline constexpr double kTriangleTolerance = 1e-9;

/// Sub-additivity through floating 2^d-th roots, tolerance 1e-9.
TriangleResult triangle_check(const SparseCubeMeasure& box, const Observable& f, const Observable& g);
TriangleResult triangle_check(const FiniteSystem& sys, std::span<const std::size_t> order,
                              const Observable& f, const Observable& g, const ComputeOptions& opts = {});

/// The characteristic algebra: X-sides of the connected components of the
/// incidence between x_0 and the remaining coordinates on the support of
/// the box measure. Points outside the support become singletons.
Partition zed_partition(const SparseCubeMeasure& box);
Partition zed_partition(const FiniteSystem& sys, std::span<const std::size_t> order,
                        const ComputeOptions& opts = {});

/// (|||f||| = 0) == (E(f | Z) = 0).
bool zed_equivalence_check(const FiniteSystem& sys, std::span<const std::size_t> order,
                           const Observable& f, const ComputeOptions& opts = {});
bool zed_equivalence_check(const SparseCubeMeasure& box, const Partition& zed,
                           std::span<const Rational> weights, const Observable& f);

/// (1/N^(d+1)) sum_{x,h} prod_eps f(x + eps.h) on Z/N, by direct summation.
Rational gowers_norm_pow(std::size_t modulus, unsigned d, const Observable& f);

}  // namespace boxlab
