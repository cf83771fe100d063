#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "boxlab/system.hpp"

namespace boxlab {

/// Seeded generator for property draws. The integer mapping is written out
/// here so sequences do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return uniform(0, 1) == 1; }

  /// p/q with 1 <= q <= max_den and |p/q| <= bound.
  Rational rational(std::int64_t max_den = 6, std::int64_t bound = 1);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct SystemShape {
  std::size_t max_points = 6;
  std::size_t transforms = 2;
  std::int64_t max_denominator = 12;
  bool allow_zero_weights = true;
};

/// Random system: points split into blocks, each block a regular orbit of
/// Z/a x Z/b on which every transform acts by a random translation; weights
/// are constant on blocks with denominators at most max_denominator; point
/// labels are shuffled.
FiniteSystem random_system(Rng& rng, const SystemShape& shape);

/// Values p/q with q <= max_den and |value| <= bound; sup_bound set to bound.
Observable random_observable(Rng& rng, std::size_t n, std::int64_t bound = 1, std::int64_t max_den = 6);

/// Function invariant under t: E(random | I(t)) with respect to the counting
/// measure, so it is constant on every cycle even at zero-weight points.
Observable random_invariant_observable(Rng& rng, const Permutation& t, std::int64_t max_den = 6);

std::vector<unsigned> random_permutation(Rng& rng, std::size_t n);

// All permutations of {0..k-1} in lexicographic order.
std::vector<std::vector<unsigned>> all_permutations(std::size_t k);

}  // namespace boxlab
