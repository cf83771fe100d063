#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace boxlab {

using PointId = std::uint32_t;

/// A bijection of {0, ..., n-1} stored as its image array.
class Permutation {
 public:
  Permutation() = default;

  /// Identity on n points.
  explicit Permutation(std::size_t n);

  /// Throws StructuralError unless `images` is a bijection of {0..n-1}.
  explicit Permutation(std::vector<PointId> images);

  /// x -> x + step (mod n).
  static Permutation shift(std::size_t n, std::int64_t step);

  std::size_t size() const { return images_.size(); }
  PointId operator()(PointId x) const { return images_[x]; }
  std::span<const PointId> images() const { return images_; }

  Permutation inverse() const;

  /// Integer power; negative exponents use the inverse.
  Permutation pow(std::int64_t exponent) const;

  /// Cycles in canonical order: each cycle starts at its least element and
  /// cycles are sorted by that element.
  std::vector<std::vector<PointId>> cycles() const;

  bool is_identity() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<PointId> images_;
};

/// Composition (a * b)(x) = a(b(x)).
Permutation operator*(const Permutation& a, const Permutation& b);

/// Least L >= 1 with t^L = identity (lcm of the cycle lengths).
std::uint64_t transform_period(const Permutation& t);

/// lcm of the periods of every permutation in the list (1 for an empty list).
std::uint64_t common_period(std::span<const Permutation> ts);

}  // namespace boxlab
