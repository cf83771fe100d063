#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "boxlab/system.hpp"

namespace boxlab {

/// A vertex of {0,1}^k; bit (i-1) of `bits` is the digit eps_i, so the empty
/// vertex is 0.
struct Vertex {
  unsigned k = 0;
  std::uint32_t bits = 0;

  Vertex() = default;
  Vertex(unsigned k, std::uint32_t bits);

  bool digit(unsigned i) const { return (bits >> i) & 1u; }
  bool operator==(const Vertex&) const = default;
};

struct ComputeOptions {
  std::size_t support_cap = 10'000'000;
  unsigned threads = 1;
};

/// Probability measure on X^(2^k) stored sparsely: tuples of 2^k point ids in
/// lexicographic order, each with a strictly positive rational mass.
class SparseCubeMeasure {
 public:
  SparseCubeMeasure() = default;

  /// Accepts tuples in any order (flattened, 2^k ids each); duplicates are
  /// merged and zero masses dropped. Throws InvariantViolation on a negative
  /// mass or a total different from 1, StructuralError on shape errors.
  SparseCubeMeasure(unsigned k, std::size_t base_n, std::vector<PointId> flat_tuples,
                    std::vector<Rational> masses);

  /// The base measure as a k = 0 cube measure (support only).
  static SparseCubeMeasure from_weights(std::span<const Rational> weights);

  unsigned k() const { return k_; }
  std::size_t width() const { return std::size_t{1} << k_; }
  std::size_t base_n() const { return base_n_; }
  std::size_t size() const { return masses_.size(); }

  std::span<const PointId> tuple(std::size_t i) const {
    return {tuples_.data() + i * width(), width()};
  }
  const Rational& mass(std::size_t i) const { return masses_[i]; }
  std::span<const Rational> masses() const { return masses_; }

  /// Index of `t` in the support, by binary search.
  std::optional<std::size_t> find(std::span<const PointId> t) const;

  Rational total_mass() const;

  bool operator==(const SparseCubeMeasure&) const = default;

 private:
  struct Trusted {};
  SparseCubeMeasure(Trusted, unsigned k, std::size_t base_n, std::vector<PointId> tuples,
                    std::vector<Rational> masses);

  friend SparseCubeMeasure relative_self_product(const SparseCubeMeasure&, const Permutation&,
                                                 const ComputeOptions&);

  unsigned k_ = 0;
  std::size_t base_n_ = 0;
  std::vector<PointId> tuples_;
  std::vector<Rational> masses_;
};

/// Map on tuples of a fixed width; writes the image of `in` into `out`.
using TupleMap = std::function<void(std::span<const PointId> in, std::span<PointId> out)>;

enum class Direction { forward, inverse };

/// Conditionally independent square of `nu` over the invariant algebra of s
/// acting coordinatewise. Cells are the orbits of s restricted to the support;
/// the first factor fills the low half of the output tuple (new digit = 0).
/// Throws InvariantViolation if s does not preserve nu, ResourceError if the
/// output would exceed the cap.
SparseCubeMeasure relative_self_product(const SparseCubeMeasure& nu, const Permutation& s,
                                        const ComputeOptions& opts = {});

/// Box measure for the transforms sys.transform(order[0]), ...; stage j
/// writes digit j.
SparseCubeMeasure build_box_measure(const FiniteSystem& sys, std::span<const std::size_t> order,
                                    const ComputeOptions& opts = {});

/// t applied to every coordinate.
TupleMap diagonal_transform(unsigned k, const Permutation& t);

/// t (or t^-1) applied to coordinates whose digit `digit` is 0.
TupleMap side_transform(unsigned k, unsigned digit, const Permutation& t,
                        Direction direction = Direction::forward);

SparseCubeMeasure push_forward(const SparseCubeMeasure& m, const TupleMap& f);

/// Law of the coordinate x_eps.
std::vector<Rational> marginal(const SparseCubeMeasure& m, Vertex eps);

/// Push-forward under eps -> eps with digit i flipped.
SparseCubeMeasure apply_digit_flip(const SparseCubeMeasure& m, unsigned digit);

/// Push-forward under x -> (x_{sigma*(eps)})_eps with sigma*(eps)_i =
/// eps_{sigma(i)}.
SparseCubeMeasure apply_index_permutation(const SparseCubeMeasure& m,
                                          std::span<const unsigned> sigma);

/// One observable per vertex; unset vertices mean the constant 1.
class VertexFunctions {
 public:
  explicit VertexFunctions(unsigned k) : fs_(std::size_t{1} << k) {}

  static VertexFunctions uniform(unsigned k, const Observable& f);

  unsigned k() const;
  std::size_t width() const { return fs_.size(); }
  void set(std::uint32_t vertex, Observable f) { fs_.at(vertex) = std::move(f); }
  const Observable* get(std::uint32_t vertex) const {
    return fs_[vertex] ? &*fs_[vertex] : nullptr;
  }

 private:
  std::vector<std::optional<Observable>> fs_;
};

/// sum over the support of mass(x) * prod_eps f_eps(x_eps).
Rational integrate_product(const SparseCubeMeasure& m, const VertexFunctions& fs);

}  // namespace boxlab
