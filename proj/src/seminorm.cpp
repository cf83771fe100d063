#include "boxlab/seminorm.hpp"

#include <map>
#include <numeric>

#include "boxlab/errors.hpp"
#include "boxlab/parallel.hpp"

namespace boxlab {

SeminormValue seminorm_pow(const FiniteSystem& sys, std::span<const std::size_t> order,
                           const Observable& f, const ComputeOptions& opts) {
  if (f.size() != sys.size()) throw StructuralError("observable size does not match the system");
  auto box = build_box_measure(sys, order, opts);
  return {static_cast<unsigned>(order.size()), seminorm_pow(box, f), {order.begin(), order.end()}};
}

Rational seminorm_pow(const SparseCubeMeasure& box, const Observable& f) {
  return integrate_product(box, VertexFunctions::uniform(box.k(), f));
}

Rational limit_formula_integral(const FiniteSystem& sys, std::span<const std::size_t> order,
                                const VertexFunctions& fs, unsigned threads) {
  check_order(sys, order);
  const std::size_t d = order.size();
  if (fs.width() != (std::size_t{1} << d)) throw PreconditionError("vertex functions do not match d");
  const std::size_t n = sys.size();
  const std::size_t w = fs.width();

  std::vector<std::vector<Permutation>> powers(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& t = sys.transform(order[i]);
    const auto period = transform_period(t);
    powers[i].reserve(period);
    Permutation p(n);
    for (std::uint64_t e = 0; e < period; ++e, p = t * p) powers[i].push_back(p);
    total *= period;
  }

  const std::size_t outer = powers[d - 1].size();
  const std::size_t inner = total / outer;
  std::vector<Rational> per_outer(outer);
  parallel_chunks(outer, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(d);
    Rational term;
    for (std::size_t o = begin; o < end; ++o) {
      Rational acc = 0;
      for (std::size_t r = 0; r < inner; ++r) {
        std::size_t rest = r;
        for (std::size_t i = 0; i + 1 < d; ++i) {
          idx[i] = rest % powers[i].size();
          rest /= powers[i].size();
        }
        idx[d - 1] = o;
        for (PointId x = 0; x < n; ++x) {
          if (sys.weight(x) == 0) continue;
          term = sys.weight(x);
          for (std::size_t e = 0; e < w && term != 0; ++e) {
            const Observable* f = fs.get(static_cast<std::uint32_t>(e));
            if (!f) continue;
            PointId y = x;
            for (std::size_t i = 0; i < d; ++i) {
              if (!((e >> i) & 1u)) y = powers[i][idx[i]](y);
            }
            term *= (*f)[y];
          }
          acc += term;
        }
      }
      per_outer[o] = std::move(acc);
    }
  });
  Rational sum = 0;
  for (const auto& v : per_outer) sum += v;
  return sum / Rational(mpz_class(std::to_string(total)));
}

SeminormValue seminorm_oracle_pow(const FiniteSystem& sys, std::span<const std::size_t> order,
                                  const Observable& f, unsigned threads) {
  if (f.size() != sys.size()) throw StructuralError("observable size does not match the system");
  const auto d = static_cast<unsigned>(order.size());
  auto fs = VertexFunctions::uniform(d, f);
  return {d, limit_formula_integral(sys, order, fs, threads), {order.begin(), order.end()}};
}

namespace {

Rational recursion_pow(const FiniteSystem& sys, std::span<const std::size_t> order, const Observable& f) {
  const auto& t = sys.transform(order.back());
  if (order.size() == 1) {
    return l2_norm_sq(conditional_expectation(f, orbit_partition(t), sys.weights()), sys.weights());
  }
  const auto prefix = order.first(order.size() - 1);
  const auto period = transform_period(t);
  Rational acc = 0;
  Permutation p(sys.size());
  for (std::uint64_t n = 0; n < period; ++n, p = t * p) acc += recursion_pow(sys, prefix, compose(f, p) * f);
  return acc / Rational(mpz_class(std::to_string(period)));
}

}  // namespace

SeminormValue seminorm_recursion_pow(const FiniteSystem& sys, std::span<const std::size_t> order,
                                     const Observable& f) {
  check_order(sys, order);
  if (f.size() != sys.size()) throw StructuralError("observable size does not match the system");
  return {static_cast<unsigned>(order.size()), recursion_pow(sys, order, f), {order.begin(), order.end()}};
}

CsgResult csg_check(const SparseCubeMeasure& box, const VertexFunctions& fs) {
  CsgResult r;
  const unsigned long exponent = 1ul << box.k();
  r.integral = integrate_product(box, fs);
  r.lhs_pow = ipow(abs(r.integral), exponent);
  r.rhs_pow = 1;
  for (std::uint32_t e = 0; e < fs.width(); ++e) {
    if (const Observable* f = fs.get(e)) r.rhs_pow *= seminorm_pow(box, *f);
  }
  r.holds = r.lhs_pow <= r.rhs_pow;
  return r;
}

CsgResult csg_check(const FiniteSystem& sys, std::span<const std::size_t> order,
                    const VertexFunctions& fs, const ComputeOptions& opts) {
  return csg_check(build_box_measure(sys, order, opts), fs);
}

TriangleResult triangle_check(const SparseCubeMeasure& box, const Observable& f, const Observable& g) {
  const unsigned d = box.k();
  TriangleResult r;
  r.lhs = root_of_power(seminorm_pow(box, f + g), d);
  r.rhs = root_of_power(seminorm_pow(box, f), d) + root_of_power(seminorm_pow(box, g), d);
  r.holds = r.lhs <= r.rhs + kTriangleTolerance;
  return r;
}

TriangleResult triangle_check(const FiniteSystem& sys, std::span<const std::size_t> order,
                              const Observable& f, const Observable& g, const ComputeOptions& opts) {
  return triangle_check(build_box_measure(sys, order, opts), f, g);
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

Partition zed_partition(const SparseCubeMeasure& box) {
  const std::size_t n = box.base_n();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  // Each x_sharp value links every x_0 it occurs with.
  std::map<std::vector<PointId>, PointId> first_partner;
  for (std::size_t i = 0; i < box.size(); ++i) {
    auto t = box.tuple(i);
    std::vector<PointId> sharp(t.begin() + 1, t.end());
    auto [it, fresh] = first_partner.try_emplace(std::move(sharp), t[0]);
    if (!fresh) {
      auto a = find_root(parent, it->second), b = find_root(parent, t[0]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> label(n);
  for (std::size_t x = 0; x < n; ++x) label[x] = find_root(parent, x);
  return Partition::from_labels(label);
}

Partition zed_partition(const FiniteSystem& sys, std::span<const std::size_t> order,
                        const ComputeOptions& opts) {
  return zed_partition(build_box_measure(sys, order, opts));
}

bool zed_equivalence_check(const SparseCubeMeasure& box, const Partition& zed,
                           std::span<const Rational> weights, const Observable& f) {
  const bool norm_zero = seminorm_pow(box, f) == 0;
  const bool expectation_zero = conditional_expectation(f, zed, weights).is_zero();
  return norm_zero == expectation_zero;
}

bool zed_equivalence_check(const FiniteSystem& sys, std::span<const std::size_t> order,
                           const Observable& f, const ComputeOptions& opts) {
  auto box = build_box_measure(sys, order, opts);
  return zed_equivalence_check(box, zed_partition(box), sys.weights(), f);
}

Rational gowers_norm_pow(std::size_t modulus, unsigned d, const Observable& f) {
  if (modulus == 0 || d == 0) throw PreconditionError("gowers norm needs N >= 1 and d >= 1");
  if (f.size() != modulus) throw StructuralError("observable size does not match the modulus");
  const std::size_t w = std::size_t{1} << d;
  std::size_t count = 1;
  for (unsigned i = 0; i < d; ++i) count *= modulus;
  std::vector<std::size_t> h(d);
  Rational total = 0, term;
  for (std::size_t x = 0; x < modulus; ++x) {
    for (std::size_t r = 0; r < count; ++r) {
      std::size_t rest = r;
      for (unsigned i = 0; i < d; ++i) {
        h[i] = rest % modulus;
        rest /= modulus;
      }
      term = 1;
      for (std::size_t e = 0; e < w && term != 0; ++e) {
        std::size_t y = x;
        for (unsigned i = 0; i < d; ++i) {
          if ((e >> i) & 1u) y += h[i];
        }
        term *= f[y % modulus];
      }
      total += term;
    }
  }
  return total / Rational(mpz_class(std::to_string(count * modulus)));
}

}  // namespace boxlab
