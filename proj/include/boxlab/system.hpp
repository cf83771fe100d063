#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boxlab/permutation.hpp"
#include "boxlab/rational.hpp"

namespace boxlab {

/// Unchecked system description as read from a file.
struct RawSystem {
  std::int64_t points = 0;
  std::vector<Rational> weights;
  std::vector<std::vector<std::int64_t>> transforms;
  std::vector<std::string> labels;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Reports every violated FiniteSystem invariant (negative weight, total
/// mass, measure preservation, commutation). Throws StructuralError for
/// length mismatches and transform arrays that are not bijections.
ValidationReport validate_system(const RawSystem& raw);

/// A finite probability space with d commuting measure-preserving
/// permutations. Immutable once constructed; construction validates.
class FiniteSystem {
 public:
  FiniteSystem(std::vector<Rational> weights, std::vector<Permutation> transforms,
               std::vector<std::string> labels = {});

  /// Throws StructuralError or InvariantViolation (listing every violation).
  static FiniteSystem from_raw(const RawSystem& raw);

  /// Uniform measure on Z/n with the given shift steps.
  static FiniteSystem cyclic(std::size_t n, std::span<const std::int64_t> steps);

  std::size_t size() const { return weights_.size(); }
  std::size_t dimension() const { return transforms_.size(); }
  std::span<const Rational> weights() const { return weights_; }
  const Rational& weight(PointId x) const { return weights_[x]; }
  std::span<const Permutation> transforms() const { return transforms_; }
  const Permutation& transform(std::size_t i) const { return transforms_.at(i); }
  std::span<const std::string> labels() const { return labels_; }

  /// Same measure, different transforms (validated).
  FiniteSystem with_transforms(std::vector<Permutation> transforms) const;

 private:
  std::vector<Rational> weights_;
  std::vector<Permutation> transforms_;
  std::vector<std::string> labels_;
};

/// Throws PreconditionError unless `order` is a non-empty list of distinct
/// valid transform indices of `sys`.
void check_order(const FiniteSystem& sys, std::span<const std::size_t> order);

/// A partition of {0..n-1}. Cells are sorted internally and ordered by
/// their least element.
class Partition {
 public:
  Partition() = default;

  /// Throws StructuralError unless the cells are disjoint and cover {0..n-1}.
  Partition(std::size_t n, std::vector<std::vector<PointId>> cells);

  /// Cells are the classes of equal labels.
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition singletons(std::size_t n);
  static Partition trivial(std::size_t n);

  std::size_t size() const { return cell_of_.size(); }
  std::size_t cell_count() const { return cells_.size(); }
  const std::vector<std::vector<PointId>>& cells() const { return cells_; }
  std::size_t cell_of(PointId x) const { return cell_of_[x]; }

  /// Whether every cell of `this` lies inside a cell of `coarser`.
  bool refines(const Partition& coarser) const;

  bool operator==(const Partition&) const = default;

 private:
  void canonicalize();

  std::vector<std::vector<PointId>> cells_;
  std::vector<std::size_t> cell_of_;
};

/// A rational-valued function on a point set with an optional sup bound.
class Observable {
 public:
  Observable() = default;
  explicit Observable(std::vector<Rational> values, std::optional<Rational> sup_bound = {});

  static Observable constant(std::size_t n, const Rational& c);
  static Observable indicator(std::size_t n, std::span<const PointId> set);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t x) const { return values_[x]; }
  std::span<const Rational> values() const { return values_; }
  const std::optional<Rational>& sup_bound() const { return sup_bound_; }

  /// max |f(x)|, exact.
  Rational sup_norm() const;
  bool is_zero() const;

  bool operator==(const Observable& other) const { return values_ == other.values_; }

 private:
  std::vector<Rational> values_;
  std::optional<Rational> sup_bound_;
};

Observable operator+(const Observable& f, const Observable& g);
Observable operator-(const Observable& f, const Observable& g);
Observable operator*(const Observable& f, const Observable& g);
Observable operator*(const Rational& c, const Observable& f);

/// x -> f(t(x)); this is the Koopman action f o t.
Observable compose(const Observable& f, const Permutation& t);

/// sum_x w(x) f(x) g(x).
Rational inner_product(const Observable& f, const Observable& g, std::span<const Rational> weights);
Rational integral(const Observable& f, std::span<const Rational> weights);
Rational l2_norm_sq(const Observable& f, std::span<const Rational> weights);

/// Cycles of t as a partition; realizes the invariant algebra of t.
Partition orbit_partition(const Permutation& t);
Partition orbit_partition(const FiniteSystem& sys, const Permutation& t);

/// Classes of the equivalence generated by x ~ t(x) for every t in the list
/// (the invariant algebra of the whole group, i.e. the meet of the orbit
/// partitions).
Partition orbit_components(std::size_t n, std::span<const Permutation> ts);

/// Common refinement. Throws StructuralError on mismatched index sets or an
/// empty list.
Partition join_partitions(std::span<const Partition> parts);

/// Cell-wise weighted averages; zero on cells of zero weight.
Observable conditional_expectation(const Observable& f, const Partition& p,
                                   std::span<const Rational> weights);

}  // namespace boxlab
