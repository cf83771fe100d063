#include "boxlab/magic.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "boxlab/errors.hpp"

namespace boxlab {

namespace {

/// Lifts a tuple map to a permutation of the support indices of m.
Permutation carrier_permutation(const SparseCubeMeasure& m, const TupleMap& f, const char* what) {
  std::vector<PointId> images(m.size());
  std::vector<PointId> out(m.width());
  for (std::size_t i = 0; i < m.size(); ++i) {
    f(m.tuple(i), out);
    auto j = m.find(out);
    if (!j || m.mass(*j) != m.mass(i)) {
      throw InvariantViolation(std::string(what) + " does not preserve the box measure");
    }
    images[i] = static_cast<PointId>(*j);
  }
  return Permutation(std::move(images));
}

bool pairwise_commute(std::span<const Permutation> a, std::span<const Permutation> b) {
  for (const auto& p : a) {
    for (const auto& q : b) {
      if (!(p * q == q * p)) return false;
    }
  }
  return true;
}

Partition cells_by_key(std::span<const std::size_t> key) { return Partition::from_labels(key); }

}  // namespace

StarSystem::StarSystem(FiniteSystem base, std::vector<std::size_t> order, SparseCubeMeasure measure,
                       std::vector<Permutation> star_transforms, std::vector<Permutation> diag_transforms)
    : base_(std::move(base)),
      order_(std::move(order)),
      measure_(std::move(measure)),
      star_(std::move(star_transforms)),
      diag_(std::move(diag_transforms)) {}

FiniteSystem StarSystem::as_system() const {
  return FiniteSystem(std::vector<Rational>(weights().begin(), weights().end()), star_);
}

StarSystem build_star_system(const FiniteSystem& sys, std::span<const std::size_t> order,
                             const ComputeOptions& opts) {
  auto box = build_box_measure(sys, order, opts);
  const auto k = box.k();
  std::vector<Permutation> star, diag;
  for (unsigned i = 0; i < k; ++i) {
    const auto& t = sys.transform(order[i]);
    star.push_back(carrier_permutation(box, side_transform(k, i, t), "side transform"));
    diag.push_back(carrier_permutation(box, diagonal_transform(k, t), "diagonal transform"));
  }
  StarSystem out(sys, {order.begin(), order.end()}, std::move(box), std::move(star), std::move(diag));

  if (out.measure().total_mass() != 1) throw InvariantViolation("star system weights do not sum to 1");
  if (!pairwise_commute(out.star_transforms(), out.star_transforms())) {
    throw InvariantViolation("side transforms do not commute");
  }
  if (!pairwise_commute(out.diag_transforms(), out.diag_transforms())) {
    throw InvariantViolation("diagonal transforms do not commute");
  }
  if (!pairwise_commute(out.diag_transforms(), out.star_transforms())) {
    throw InvariantViolation("diagonal and side transforms do not commute");
  }
  if (!factor_map_check(out)) throw InvariantViolation("x -> x_0 is not a factor map");
  return out;
}

bool factor_map_check(const StarSystem& star) {
  const auto& base = star.base();
  if (marginal(star.measure(), Vertex(star.dimension(), 0)) !=
      std::vector<Rational>(base.weights().begin(), base.weights().end())) {
    return false;
  }
  for (unsigned i = 0; i < star.dimension(); ++i) {
    const auto& t = base.transform(star.order()[i]);
    const auto& s = star.star_transforms()[i];
    for (PointId x = 0; x < star.size(); ++x) {
      if (star.tuple(s(x))[0] != t(star.tuple(x)[0])) return false;
    }
  }
  return true;
}

std::vector<Permutation> derive_S_star(const StarSystem& star) {
  const std::size_t d = star.base().dimension();
  if (star.order().size() != d) {
    throw PreconditionError("derive_S_star needs the order to list every base transform");
  }
  std::vector<std::size_t> digit_of(d);
  for (std::size_t j = 0; j < d; ++j) digit_of[star.order()[j]] = j;
  const Permutation& t1 = star.star_transforms()[digit_of[0]];
  std::vector<Permutation> out{t1};
  for (std::size_t i = 1; i < d; ++i) out.push_back(star.star_transforms()[digit_of[i]] * t1);
  return out;
}

Partition wstar_partition(const StarSystem& star) {
  std::vector<Partition> parts;
  for (const auto& t : star.star_transforms()) parts.push_back(orbit_partition(t));
  return join_partitions(parts);
}

SharpFactor sharp_factor(const StarSystem& star) {
  const std::size_t w = star.measure().width();
  SharpFactor s;
  s.width = w - 1;
  std::map<std::vector<PointId>, Rational> mass;
  for (std::size_t i = 0; i < star.size(); ++i) {
    auto t = star.tuple(i);
    mass[std::vector<PointId>(t.begin() + 1, t.end())] += star.weights()[i];
  }
  std::map<std::vector<PointId>, std::size_t> index;
  for (auto& [key, m] : mass) {
    index.emplace(key, s.weights.size());
    s.tuples.insert(s.tuples.end(), key.begin(), key.end());
    s.weights.push_back(m);
  }
  s.carrier_to_sharp.resize(star.size());
  for (std::size_t i = 0; i < star.size(); ++i) {
    auto t = star.tuple(i);
    s.carrier_to_sharp[i] = index.at(std::vector<PointId>(t.begin() + 1, t.end()));
  }
  for (unsigned digit = 0; digit < star.dimension(); ++digit) {
    const auto& t = star.base().transform(star.order()[digit]);
    std::vector<PointId> images(s.size());
    std::vector<PointId> key(s.width);
    for (std::size_t a = 0; a < s.size(); ++a) {
      auto src = s.tuple(a);
      for (std::size_t e = 1; e < w; ++e) key[e - 1] = ((e >> digit) & 1u) ? t(src[e - 1]) : src[e - 1];
      auto it = index.find(key);
      if (it == index.end() || s.weights[it->second] != s.weights[a]) {
        throw InvariantViolation("sharp transform does not preserve the projected measure");
      }
      images[a] = static_cast<PointId>(it->second);
    }
    s.transforms.emplace_back(std::move(images));
  }
  return s;
}

Partition sharp_invariant_partition(const SharpFactor& sharp) {
  return orbit_components(sharp.size(), sharp.transforms);
}

Partition sharp_invariant_partition(const StarSystem& star) {
  return sharp_invariant_partition(sharp_factor(star));
}

Partition zed_from_sharp(const StarSystem& star) {
  const auto sharp = sharp_factor(star);
  const auto invariant = sharp_invariant_partition(sharp);
  const std::size_t n = star.base().size();
  std::vector<std::size_t> owner(n, SIZE_MAX);
  for (std::size_t i = 0; i < star.size(); ++i) {
    const PointId x0 = star.tuple(i)[0];
    const std::size_t cell = invariant.cell_of(static_cast<PointId>(sharp.carrier_to_sharp[i]));
    if (owner[x0] == SIZE_MAX) {
      owner[x0] = cell;
    } else if (owner[x0] != cell) {
      throw InvariantViolation("pull-backs of distinct invariant cells overlap");
    }
  }
  // Label zero-weight points past every cell id so they stay singletons.
  std::vector<std::size_t> label(n);
  for (std::size_t x = 0; x < n; ++x) label[x] = owner[x] == SIZE_MAX ? invariant.cell_count() + x : owner[x];
  return Partition::from_labels(label);
}

Partition xsharp_partition(const StarSystem& star) {
  return cells_by_key(sharp_factor(star).carrier_to_sharp);
}

Observable star_conditional_expectation(const StarSystem& star, const Observable& F, const Partition& p) {
  return conditional_expectation(F, p, star.weights());
}

SparseCubeMeasure star_box_measure(const StarSystem& star, const ComputeOptions& opts) {
  std::vector<std::size_t> order(star.dimension());
  std::iota(order.begin(), order.end(), std::size_t{0});
  try {
    return build_box_measure(star.as_system(), order, opts);
  } catch (const ResourceError& e) {
    throw ResourceError(std::string(e.what()) + " while building the extension's box measure; use a smaller base system",
                        e.cap());
  }
}

SeminormValue star_seminorm_pow(const StarSystem& star, const SparseCubeMeasure& star_box, const Observable& F) {
  if (F.size() != star.size()) throw StructuralError("observable size does not match the carrier");
  std::vector<std::size_t> order(star.dimension());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return {star.dimension(), seminorm_pow(star_box, F), std::move(order)};
}

SeminormValue star_seminorm_pow(const StarSystem& star, const Observable& F, const ComputeOptions& opts) {
  return star_seminorm_pow(star, star_box_measure(star, opts), F);
}

MagicResult magic_check(const StarSystem& star, const SparseCubeMeasure& star_box, const Observable& F) {
  MagicResult r;
  r.expectation_is_zero = star_conditional_expectation(star, F, wstar_partition(star)).is_zero();
  r.star_pow = star_seminorm_pow(star, star_box, F).pow;
  r.holds = !r.expectation_is_zero || r.star_pow == 0;
  return r;
}

MagicResult magic_check(const FiniteSystem& sys, std::span<const std::size_t> order, const Observable& F,
                        const ComputeOptions& opts) {
  auto star = build_star_system(sys, order, opts);
  return magic_check(star, star_box_measure(star, opts), F);
}

Observable product_on_carrier(const StarSystem& star, const VertexFunctions& fs) {
  if (fs.width() != star.measure().width()) throw PreconditionError("vertex functions do not match d");
  std::vector<Rational> v(star.size());
  for (std::size_t i = 0; i < star.size(); ++i) {
    auto t = star.tuple(i);
    Rational p = 1;
    for (std::uint32_t e = 0; e < fs.width(); ++e) {
      if (const Observable* f = fs.get(e)) p *= (*f)[t[e]];
    }
    v[i] = std::move(p);
  }
  return Observable(std::move(v));
}

bool span0_orthogonality_check(const StarSystem& star, const Partition& zed, const VertexFunctions& fs) {
  const auto& base = star.base();
  const Observable one = Observable::constant(base.size(), 1);
  const Observable& f0 = fs.get(0) ? *fs.get(0) : one;
  if (!conditional_expectation(f0, zed, base.weights()).is_zero()) {
    throw PreconditionError("span0 check needs E(f_0 | Z) = 0");
  }
  const auto F = product_on_carrier(star, fs);
  return star_conditional_expectation(star, F, xsharp_partition(star)).is_zero();
}

bool span0_orthogonality_check(const StarSystem& star, const VertexFunctions& fs) {
  return span0_orthogonality_check(star, zed_partition(star.measure()), fs);
}

bool normstar_check(const StarSystem& star, const SparseCubeMeasure& star_box, const VertexFunctions& fs) {
  const Observable one = Observable::constant(star.base().size(), 1);
  const Observable& f0 = fs.get(0) ? *fs.get(0) : one;
  if (seminorm_pow(star.measure(), f0) != 0) throw PreconditionError("normstar check needs |||f_0||| = 0");
  return star_seminorm_pow(star, star_box, product_on_carrier(star, fs)).pow == 0;
}

bool normstar_check(const StarSystem& star, const VertexFunctions& fs, const ComputeOptions& opts) {
  const Observable one = Observable::constant(star.base().size(), 1);
  const Observable& f0 = fs.get(0) ? *fs.get(0) : one;
  if (seminorm_pow(star.measure(), f0) != 0) throw PreconditionError("normstar check needs |||f_0||| = 0");
  return normstar_check(star, star_box_measure(star, opts), fs);
}

bool extension_commutation_check(const StarSystem& star) {
  const std::size_t w = star.measure().width();
  for (unsigned i = 0; i < star.dimension(); ++i) {
    const auto& t = star.base().transform(star.order()[i]);
    const Permutation r = star.diag_transforms()[i] * star.star_transforms()[i].inverse();
    for (PointId x = 0; x < star.size(); ++x) {
      auto src = star.tuple(x);
      auto dst = star.tuple(r(x));
      for (std::size_t e = 0; e < w; ++e) {
        const PointId expected = ((e >> i) & 1u) ? t(src[e]) : src[e];
        if (dst[e] != expected) return false;
      }
    }
  }
  return true;
}

bool invariant_descent_check(const StarSystem& star) {
  std::vector<Permutation> rs;
  for (unsigned i = 0; i < star.dimension(); ++i) {
    rs.push_back(star.diag_transforms()[i] * star.star_transforms()[i].inverse());
  }
  const auto components = orbit_components(star.size(), rs);
  std::vector<std::size_t> fiber(star.size());
  for (std::size_t i = 0; i < star.size(); ++i) fiber[i] = star.tuple(i)[0];
  return components == Partition::from_labels(fiber);
}

}  // namespace boxlab
