#include "boxlab/averages.hpp"

#include <algorithm>
#include <string>

#include "boxlab/errors.hpp"

namespace boxlab {

namespace {

Rational from_u64(std::uint64_t v) { return Rational(mpz_class(std::to_string(v))); }
Rational from_i64(std::int64_t v) { return Rational(mpz_class(std::to_string(v))); }

void check_observables(const FiniteSystem& sys, std::span<const Observable> fs) {
  if (fs.size() != sys.dimension()) {
    throw PreconditionError("expected one observable per transform (" + std::to_string(sys.dimension()) +
                            "), got " + std::to_string(fs.size()));
  }
  for (const auto& f : fs) {
    if (f.size() != sys.size()) throw StructuralError("observable size does not match the system");
  }
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Interval::Interval(std::int64_t start_, std::int64_t length_) : start(start_), length(length_) {
  if (length < 1) throw PreconditionError("interval length must be at least 1");
}

std::vector<Permutation> derive_T_from_S(const FiniteSystem& sys) {
  std::vector<Permutation> out;
  if (sys.dimension() == 0) return out;
  const Permutation& s1 = sys.transform(0);
  const Permutation s1_inv = s1.inverse();
  out.push_back(s1);
  for (std::size_t i = 1; i < sys.dimension(); ++i) out.push_back(sys.transform(i) * s1_inv);
  return out;
}

AverageResult multi_average(const FiniteSystem& sys, std::span<const Observable> fs, Interval interval) {
  check_observables(sys, fs);
  const std::size_t n = sys.size();
  const std::size_t d = sys.dimension();
  std::vector<Permutation> current;
  for (std::size_t i = 0; i < d; ++i) current.push_back(sys.transform(i).pow(interval.start));

  std::vector<Rational> acc(n, 0);
  Rational term;
  for (std::int64_t step = 0; step < interval.length; ++step) {
    for (PointId x = 0; x < n; ++x) {
      term = 1;
      for (std::size_t i = 0; i < d && term != 0; ++i) term *= fs[i][current[i](x)];
      acc[x] += term;
    }
    for (std::size_t i = 0; i < d; ++i) current[i] = sys.transform(i) * current[i];
  }
  const Rational len = from_i64(interval.length);
  for (auto& v : acc) v /= len;
  Observable values(std::move(acc));
  Rational norm = l2_norm_sq(values, sys.weights());
  return {std::move(values), interval, std::move(norm)};
}

AverageResult multi_average_limit(const FiniteSystem& sys, std::span<const Observable> fs) {
  const auto period = common_period(sys.transforms());
  return multi_average(sys, fs, Interval(0, static_cast<std::int64_t>(period)));
}

ConvergenceCheck convergence_check(const FiniteSystem& sys, std::span<const Observable> fs,
                                   Interval interval) {
  auto limit = multi_average_limit(sys, fs);
  auto avg = multi_average(sys, fs, interval);
  ConvergenceCheck c;
  c.distance_sq = l2_norm_sq(avg.values - limit.values, sys.weights());
  Rational sup_product = 1;
  for (const auto& f : fs) sup_product *= f.sup_norm();
  c.bound = 2 * from_u64(common_period(sys.transforms())) * sup_product / from_i64(interval.length);
  c.holds = c.distance_sq <= c.bound * c.bound;
  return c;
}

CharacteristicBound characteristic_bound_check(const FiniteSystem& sys, std::span<const Observable> fs,
                                               const ComputeOptions& opts) {
  check_observables(sys, fs);
  for (std::size_t i = 1; i < fs.size(); ++i) {
    if (fs[i].sup_norm() > 1) {
      throw PreconditionError("characteristic bound needs |f_" + std::to_string(i + 1) + "| <= 1");
    }
  }
  const std::size_t d = sys.dimension();
  auto derived = sys.with_transforms(derive_T_from_S(sys));
  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = d - 1 - i;

  CharacteristicBound r;
  auto limit = multi_average_limit(sys, fs);
  r.lhs = limit.l2_norm_sq;
  r.limit = std::move(limit.values);
  r.rhs = seminorm_pow(derived, order, fs[0], opts);
  r.holds = ipow(r.lhs, 1ul << (d - 1)) <= r.rhs.pow;
  return r;
}

Rational multilinear_average_J(const FiniteSystem& sys, std::span<const std::size_t> order,
                               const VertexFunctions& fs, std::span<const Interval> intervals) {
  check_order(sys, order);
  const std::size_t d = order.size();
  if (intervals.size() != d) throw PreconditionError("expected one interval per transform");
  if (fs.width() != (std::size_t{1} << d)) throw PreconditionError("vertex functions do not match d");
  const std::size_t n = sys.size();

  // The integrand depends on n_i only through n_i mod L_i.
  std::vector<std::vector<Permutation>> powers(d);
  std::vector<std::vector<std::int64_t>> counts(d);
  std::size_t residues = 1;
  Rational denominator = 1;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& t = sys.transform(order[i]);
    const auto period = static_cast<std::int64_t>(transform_period(t));
    Permutation p(n);
    for (std::int64_t e = 0; e < period; ++e, p = t * p) powers[i].push_back(p);
    counts[i].assign(static_cast<std::size_t>(period), intervals[i].length / period);
    const std::int64_t extra = intervals[i].length % period;
    for (std::int64_t j = 0; j < extra; ++j) {
      ++counts[i][static_cast<std::size_t>(floor_mod(intervals[i].start + j, period))];
    }
    residues *= static_cast<std::size_t>(period);
    denominator *= from_i64(intervals[i].length);
  }

  std::vector<std::size_t> r(d);
  Rational total = 0, term;
  for (std::size_t lin = 0; lin < residues; ++lin) {
    std::size_t rest = lin;
    std::int64_t multiplicity = 1;
    for (std::size_t i = 0; i < d; ++i) {
      r[i] = rest % powers[i].size();
      rest /= powers[i].size();
      multiplicity *= counts[i][r[i]];
    }
    if (multiplicity == 0) continue;
    Rational corner = 0;
    for (PointId x = 0; x < n; ++x) {
      if (sys.weight(x) == 0) continue;
      term = sys.weight(x);
      for (std::uint32_t e = 0; e < fs.width() && term != 0; ++e) {
        const Observable* f = fs.get(e);
        if (!f) continue;
        PointId y = x;
        for (std::size_t i = 0; i < d; ++i) {
          if (!((e >> i) & 1u)) y = powers[i][r[i]](y);
        }
        term *= (*f)[y];
      }
      corner += term;
    }
    total += from_i64(multiplicity) * corner;
  }
  return total / denominator;
}

UniformityReport uniformity_scan(const FiniteSystem& sys, std::span<const std::size_t> order,
                                 const VertexFunctions& fs, std::int64_t length,
                                 std::span<const std::int64_t> starts, double delta,
                                 const ComputeOptions& opts) {
  const std::size_t d = order.size();
  for (std::uint32_t e = 1; e < fs.width(); ++e) {
    if (const Observable* f = fs.get(e); f && f->sup_norm() > 1) {
      throw PreconditionError("uniformity scan needs |f_eps| <= 1 off the empty vertex");
    }
  }
  if (starts.empty()) throw PreconditionError("uniformity scan needs at least one start");

  UniformityReport report;
  const Observable one = Observable::constant(sys.size(), 1);
  const Observable& f0 = fs.get(0) ? *fs.get(0) : one;
  report.seminorm = seminorm_pow(sys, order, f0, opts);
  report.seminorm_root = report.seminorm.root();

  std::size_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= starts.size();
  std::vector<Interval> intervals(d);
  report.max_abs_J = 0;
  for (std::size_t lin = 0; lin < combos; ++lin) {
    UniformityRow row;
    std::size_t rest = lin;
    for (std::size_t i = 0; i < d; ++i) {
      const auto s = starts[rest % starts.size()];
      rest /= starts.size();
      row.starts.push_back(s);
      intervals[i] = Interval(s, length);
    }
    row.value = multilinear_average_J(sys, order, fs, intervals);
    Rational a = abs(row.value);
    if (a > report.max_abs_J) report.max_abs_J = a;
    report.rows.push_back(std::move(row));
  }
  report.margin = report.max_abs_J.get_d() - report.seminorm_root;
  report.within_delta = report.max_abs_J.get_d() < report.seminorm_root + delta;
  report.power_bound = ipow(report.max_abs_J, 1ul << d) <= report.seminorm.pow;
  return report;
}

VanDerCorputResult van_der_corput_bound(std::span<const Observable> u, std::span<const Rational> weights,
                                        std::int64_t H) {
  const auto N = static_cast<std::int64_t>(u.size());
  if (N == 0) throw PreconditionError("van der Corput needs a non-empty sequence");
  if (H < 1 || H > N) throw PreconditionError("van der Corput needs 1 <= H <= |I|");
  for (std::int64_t i = 0; i < N; ++i) {
    if (u[static_cast<std::size_t>(i)].size() != weights.size()) {
      throw StructuralError("sequence vector size does not match the weights");
    }
    if (l2_norm_sq(u[static_cast<std::size_t>(i)], weights) > 1) {
      throw PreconditionError("van der Corput needs ||u_n|| <= 1 (violated at n = " + std::to_string(i) + ")");
    }
  }
  const Rational len = from_i64(N);
  const Rational h_big = from_i64(H);

  Observable sum = Observable::constant(weights.size(), 0);
  for (const auto& v : u) sum = sum + v;
  VanDerCorputResult r;
  r.lhs = l2_norm_sq(sum, weights) / (len * len);

  Rational corr_total = 0;
  for (std::int64_t h = -H; h <= H; ++h) {
    const std::int64_t weight = H - (h < 0 ? -h : h);
    if (weight == 0) continue;
    Rational acc = 0;
    for (std::int64_t n = std::max<std::int64_t>(0, -h); n < N && n + h < N; ++n) {
      acc += inner_product(u[static_cast<std::size_t>(n + h)], u[static_cast<std::size_t>(n)], weights);
    }
    corr_total += from_i64(weight) * acc / len;
  }
  corr_total /= h_big * h_big;
  r.rhs = 4 * h_big / len + abs(corr_total);
  r.holds = r.lhs <= r.rhs;
  return r;
}

DecomposableReduction reduce_decomposable(const FiniteSystem& sys, std::span<const Observable> gs,
                                          std::span<const Observable> rest) {
  const std::size_t d = sys.dimension();
  if (d < 2) throw PreconditionError("decomposable reduction needs d >= 2");
  if (gs.size() != d - 1 || rest.size() != d - 1) {
    throw PreconditionError("expected d - 1 invariant factors and d - 1 remaining observables");
  }
  const auto ts = derive_T_from_S(sys);
  Observable f1 = Observable::constant(sys.size(), 1);
  std::vector<Permutation> reduced_transforms;
  std::vector<Observable> reduced_fs;
  for (std::size_t i = 1; i < d; ++i) {
    const Observable& g = gs[i - 1];
    if (!(compose(g, ts[i]) == g)) {
      throw PreconditionError("g_" + std::to_string(i + 1) + " is not invariant under T_" + std::to_string(i + 1));
    }
    f1 = f1 * g;
    reduced_transforms.push_back(sys.transform(i));
    reduced_fs.push_back(g * rest[i - 1]);
  }
  return {std::move(f1), sys.with_transforms(std::move(reduced_transforms)), std::move(reduced_fs)};
}

}  // namespace boxlab
