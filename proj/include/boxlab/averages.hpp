#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boxlab/box_measure.hpp"
#include "boxlab/seminorm.hpp"
#include "boxlab/system.hpp"

namespace boxlab {

/// The integer interval [start, start + length).
struct Interval {
  std::int64_t start = 0;
  std::int64_t length = 1;

  Interval() = default;
  Interval(std::int64_t start, std::int64_t length);
};

struct AverageResult {
  Observable values;
  Interval interval;
  Rational l2_norm_sq;
};

/// T_1 = S_1 and T_i = S_i S_1^-1, where S_i are the system's transforms.
std::vector<Permutation> derive_T_from_S(const FiniteSystem& sys);

/// values(x) = (1/|I|) sum_{n in I} prod_i f_i(S_i^n x), one observable per
/// transform of the system.
AverageResult multi_average(const FiniteSystem& sys, std::span<const Observable> fs, Interval interval);

/// The exact limit: the average over [0, L) with L the common period of the
/// transforms.
AverageResult multi_average_limit(const FiniteSystem& sys, std::span<const Observable> fs);

struct ConvergenceCheck {
  Rational distance_sq;  // ||average(I) - limit||^2
  Rational bound;        // 2 L prod ||f_i||_inf / |I|
  bool holds = false;    // distance_sq <= bound^2
};

ConvergenceCheck convergence_check(const FiniteSystem& sys, std::span<const Observable> fs,
                                   Interval interval);

struct CharacteristicBound {
  Rational lhs;  // ||limit||_2^2
  SeminormValue rhs;
  Observable limit;
  bool holds = false;  // lhs^(2^(d-1)) <= rhs.pow
};

/// Bounds the limit of the multiple average by the seminorm of f_1 for the
/// order (T_d, ..., T_1). Throws PreconditionError unless |f_i| <= 1 for
/// i >= 2.
CharacteristicBound characteristic_bound_check(const FiniteSystem& sys, std::span<const Observable> fs,
                                               const ComputeOptions& opts = {});

/// Mean over n in I_1 x ... x I_d of
///   sum_x mu(x) prod_eps f_eps(T_1^{(1-eps_1) n_1} ... T_d^{(1-eps_d) n_d} x),
/// where T_i = sys.transform(order[i]).
Rational multilinear_average_J(const FiniteSystem& sys, std::span<const std::size_t> order,
                               const VertexFunctions& fs, std::span<const Interval> intervals);

struct UniformityRow {
  std::vector<std::int64_t> starts;
  Rational value;
};

struct UniformityReport {
  std::vector<UniformityRow> rows;
  Rational max_abs_J;
  SeminormValue seminorm;  // of f at the empty vertex
  double seminorm_root = 0;
  double margin = 0;            // max|J| - |||f_0|||
  bool within_delta = false;    // max|J| < |||f_0||| + delta
  bool power_bound = false;     // max|J|^(2^d) <= seminorm.pow
};

/// Scans J over every d-tuple of intervals [s, s + length) with s drawn from
/// `starts`. Throws PreconditionError unless |f_eps| <= 1 off the empty vertex.
UniformityReport uniformity_scan(const FiniteSystem& sys, std::span<const std::size_t> order,
                                 const VertexFunctions& fs, std::int64_t length,
                                 std::span<const std::int64_t> starts, double delta,
                                 const ComputeOptions& opts = {});

struct VanDerCorputResult {
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

/// Finite van der Corput inequality for u_0..u_{N-1} in the space weighted
/// by `weights`. Out-of-range pairs are dropped from the correlation sums.
/// Throws PreconditionError unless 1 <= H <= N and each ||u_n|| <= 1.
VanDerCorputResult van_der_corput_bound(std::span<const Observable> u, std::span<const Rational> weights,
                                        std::int64_t H);

struct DecomposableReduction {
  Observable f1;                 // g_2 ... g_d
  FiniteSystem reduced;          // transforms S_2, ..., S_d
  std::vector<Observable> fs;    // g_2 f_2, ..., g_d f_d
};

/// For g_i invariant under T_i = S_i S_1^-1 (2 <= i <= d), the d-fold
/// average with f_1 = g_2...g_d equals the (d-1)-fold average returned here.
/// `gs` and `rest` hold g_2..g_d and f_2..f_d.
DecomposableReduction reduce_decomposable(const FiniteSystem& sys, std::span<const Observable> gs,
                                          std::span<const Observable> rest);

}  // namespace boxlab
