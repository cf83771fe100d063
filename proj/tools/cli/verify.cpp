#include "verify.hpp"

#include <algorithm>
#include <functional>
#include <memory>

#include "boxlab/averages.hpp"
#include "boxlab/box_measure.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/magic.hpp"
#include "boxlab/parallel.hpp"
#include "boxlab/random.hpp"
#include "boxlab/seminorm.hpp"

namespace boxlab::cli {

namespace {

using io::json;

const std::vector<std::string> kProperties = {
    "box.marginals",
    "box.invariance",
    "box.digit_flip",
    "box.permutation_law",
    "seminorm.routes",
    "seminorm.permutation_invariance",
    "seminorm.csg",
    "seminorm.triangle",
    "zed.characterization",
    "zed.route_equivalence",
    "averages.limit_periodicity",
    "averages.convergence",
    "averages.characteristic",
    "averages.decomposable",
    "averages.uniformity",
    "averages.van_der_corput",
    "magic.extension",
    "magic.side_orthogonal",
    "magic.span0",
    "magic.normstar",
};

json rationals(std::span<const Rational> v) {
  json arr = json::array();
  for (const auto& q : v) arr.push_back(to_string(q));
  return arr;
}

json observables(std::span<const Observable> fs) {
  json arr = json::array();
  for (const auto& f : fs) arr.push_back(rationals(f.values()));
  return arr;
}

json vertex_json(const VertexFunctions& fs, std::size_t n) {
  json arr = json::array();
  for (std::uint32_t v = 0; v < fs.width(); ++v) {
    const Observable* f = fs.get(v);
    arr.push_back(f ? rationals(f->values()) : rationals(Observable::constant(n, Rational(1)).values()));
  }
  return arr;
}

VertexFunctions random_vertex_functions(Rng& rng, unsigned k, std::size_t n) {
  VertexFunctions fs(k);
  for (std::uint32_t v = 0; v < fs.width(); ++v) fs.set(v, random_observable(rng, n));
  return fs;
}

std::vector<Observable> random_observables(Rng& rng, std::size_t count, std::size_t n) {
  std::vector<Observable> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_observable(rng, n));
  return out;
}

struct Check {
  bool holds = true;
  json details;
};

class Runner {
 public:
  Runner(const VerifyConfig& config) : config_(config) {}

  PropertyOutcome single(const std::string& name, const std::function<Check()>& check) const {
    Check c = check();
    return finish(name, 1, {std::move(c)});
  }

  template <typename Input>
  PropertyOutcome draws(const std::string& name, const std::function<Input(Rng&)>& gen,
                        const std::function<Check(const Input&)>& check) const {
    Rng rng(seed_for(name));
    std::vector<Input> inputs;
    inputs.reserve(config_.draws);
    for (std::size_t i = 0; i < config_.draws; ++i) inputs.push_back(gen(rng));
    std::vector<Check> results(inputs.size());
    parallel_chunks(inputs.size(), config_.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) results[i] = check(inputs[i]);
    });
    return finish(name, inputs.size(), std::move(results));
  }

  static PropertyOutcome skip(const std::string& name, std::string note) {
    PropertyOutcome out;
    out.name = name;
    out.status = "SKIP";
    out.note = std::move(note);
    return out;
  }

 private:
  std::uint64_t seed_for(const std::string& name) const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
    return config_.seed ^ h;
  }

  PropertyOutcome finish(const std::string& name, std::size_t count, std::vector<Check> results) const {
    PropertyOutcome out;
    out.name = name;
    out.draws = count;
    out.status = "PASS";
    const bool inverted = config_.inject_fault == name;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const bool holds = inverted ? !results[i].holds : results[i].holds;
      if (!holds) {
        out.status = "FAIL";
        out.failing_draw = i;
        json cx = std::move(results[i].details);
        if (!cx.is_object()) cx = json::object();
        cx["property"] = name;
        cx["draw"] = i;
        cx["seed"] = config_.seed;
        if (inverted) cx["injected_fault"] = true;
        out.counterexample = std::move(cx);
        break;
      }
    }
    return out;
  }

  const VerifyConfig& config_;
};

}  // namespace

const std::vector<std::string>& verify_property_names() { return kProperties; }

std::vector<PropertyOutcome> run_verify(const FiniteSystem& sys, const VerifyConfig& config) {
  check_order(sys, config.order);
  if (config.draws == 0) throw PreconditionError("draws must be positive");
  if (!config.inject_fault.empty() &&
      std::find(kProperties.begin(), kProperties.end(), config.inject_fault) == kProperties.end()) {
    throw PreconditionError("unknown property for fault injection: " + config.inject_fault);
  }

  const std::size_t n = sys.size();
  const unsigned d = static_cast<unsigned>(config.order.size());
  const std::span<const std::size_t> order = config.order;
  const ComputeOptions opts{config.cap, config.threads};
  const ComputeOptions serial{config.cap, 1};
  const Runner run(config);
  std::vector<PropertyOutcome> report;

  const SparseCubeMeasure box = build_box_measure(sys, order, opts);
  const Partition zed = zed_partition(box);
  const auto weights = sys.weights();

  report.push_back(run.single("box.marginals", [&] {
    Check c;
    for (std::uint32_t v = 0; v < box.width(); ++v) {
      const auto m = marginal(box, Vertex(d, v));
      if (!std::equal(m.begin(), m.end(), weights.begin(), weights.end())) {
        c.holds = false;
        c.details = {{"vertex", v}, {"marginal", rationals(m)}};
        break;
      }
    }
    return c;
  }));

  report.push_back(run.single("box.invariance", [&] {
    Check c;
    for (unsigned i = 0; i < d && c.holds; ++i) {
      const Permutation& t = sys.transform(order[i]);
      if (push_forward(box, diagonal_transform(d, t)) != box) {
        c.holds = false;
        c.details = {{"map", "diagonal"}, {"digit", i}};
      }
      for (Direction dir : {Direction::forward, Direction::inverse}) {
        if (c.holds && push_forward(box, side_transform(d, i, t, dir)) != box) {
          c.holds = false;
          c.details = {{"map", dir == Direction::forward ? "side" : "side_inverse"}, {"digit", i}};
        }
      }
    }
    return c;
  }));

  report.push_back(run.single("box.digit_flip", [&] {
    Check c;
    for (unsigned i = 0; i < d; ++i) {
      if (apply_digit_flip(box, i) != box) {
        c.holds = false;
        c.details = {{"digit", i}};
        break;
      }
    }
    return c;
  }));

  const auto sigmas = all_permutations(d);
  std::vector<std::vector<std::size_t>> permuted_orders;
  std::vector<SparseCubeMeasure> permuted_boxes;
  for (const auto& sigma : sigmas) {
    std::vector<std::size_t> o(d);
    for (unsigned i = 0; i < d; ++i) o[sigma[i]] = order[i];
    permuted_boxes.push_back(build_box_measure(sys, o, opts));
    permuted_orders.push_back(std::move(o));
  }

  report.push_back(run.single("box.permutation_law", [&] {
    Check c;
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
      if (apply_index_permutation(box, sigmas[s]) != permuted_boxes[s]) {
        c.holds = false;
        c.details = {{"sigma", sigmas[s]}, {"permuted_order", io::order_to_json(permuted_orders[s])}};
        break;
      }
    }
    return c;
  }));

  const auto gen_f = [&](Rng& rng) { return random_observable(rng, n); };

  report.push_back(run.draws<Observable>("seminorm.routes", gen_f, [&](const Observable& f) {
    const Rational a = seminorm_pow(box, f);
    const Rational b = seminorm_oracle_pow(sys, order, f).pow;
    const Rational r = seminorm_recursion_pow(sys, order, f).pow;
    Check c;
    c.holds = a == b && b == r;
    c.details = {{"f", rationals(f.values())},
                 {"measure", to_string(a)},
                 {"oracle", to_string(b)},
                 {"recursion", to_string(r)}};
    return c;
  }));

  report.push_back(run.draws<Observable>("seminorm.permutation_invariance", gen_f, [&](const Observable& f) {
    const Rational a = seminorm_pow(box, f);
    Check c;
    c.details = {{"f", rationals(f.values())}, {"pow", to_string(a)}};
    for (std::size_t s = 0; s < permuted_boxes.size(); ++s) {
      const Rational b = seminorm_pow(permuted_boxes[s], f);
      if (a != b) {
        c.holds = false;
        c.details["permuted_order"] = io::order_to_json(permuted_orders[s]);
        c.details["permuted_pow"] = to_string(b);
        break;
      }
    }
    return c;
  }));

  struct CsgInput {
    VertexFunctions fs;
    bool coincide;
  };
  std::size_t csg_index = 0;
  report.push_back(run.draws<CsgInput>(
      "seminorm.csg",
      [&](Rng& rng) {
        const bool coincide = csg_index++ % 4 == 3;
        if (coincide) return CsgInput{VertexFunctions::uniform(d, random_observable(rng, n)), true};
        return CsgInput{random_vertex_functions(rng, d, n), false};
      },
      [&](const CsgInput& in) {
        const CsgResult r = csg_check(box, in.fs);
        Check c;
        c.holds = r.holds && (!in.coincide || r.lhs_pow == r.rhs_pow);
        c.details = {{"fs", vertex_json(in.fs, n)},
                     {"lhs_pow", to_string(r.lhs_pow)},
                     {"rhs_pow", to_string(r.rhs_pow)},
                     {"equality_case", in.coincide}};
        return c;
      }));

  using Pair = std::pair<Observable, Observable>;
  report.push_back(run.draws<Pair>(
      "seminorm.triangle", [&](Rng& rng) { return Pair{random_observable(rng, n), random_observable(rng, n)}; },
      [&](const Pair& p) {
        const TriangleResult r = triangle_check(box, p.first, p.second);
        Check c;
        c.holds = r.holds;
        c.details = {{"f", rationals(p.first.values())},
                     {"g", rationals(p.second.values())},
                     {"lhs", to_decimal(r.lhs)},
                     {"rhs", to_decimal(r.rhs)}};
        return c;
      }));

  report.push_back(run.draws<Observable>("zed.characterization", gen_f, [&](const Observable& f) {
    const Observable ez = conditional_expectation(f, zed, weights);
    const Observable residual = f - ez;
    Check c;
    c.holds = zed_equivalence_check(box, zed, weights, f) && zed_equivalence_check(box, zed, weights, ez) &&
              zed_equivalence_check(box, zed, weights, residual) && seminorm_pow(box, residual) == 0;
    c.details = {{"f", rationals(f.values())}, {"zed", io::to_json(zed)}};
    return c;
  }));

  std::unique_ptr<StarSystem> star;
  auto need_star = [&]() -> const StarSystem& {
    if (!star) star = std::make_unique<StarSystem>(build_star_system(sys, order, opts));
    return *star;
  };

  report.push_back(run.single("zed.route_equivalence", [&] {
    const Partition via_sharp = zed_from_sharp(need_star());
    Check c;
    c.holds = via_sharp == zed;
    c.details = {{"components", io::to_json(zed)}, {"sharp", io::to_json(via_sharp)}};
    return c;
  }));

  const std::size_t D = sys.dimension();
  const std::uint64_t L = common_period(sys.transforms());
  const auto gen_fs = [&](Rng& rng) { return random_observables(rng, D, n); };

  struct AvgInput {
    std::vector<Observable> fs;
    Interval interval;
  };
  report.push_back(run.draws<AvgInput>(
      "averages.limit_periodicity",
      [&](Rng& rng) {
        auto fs = gen_fs(rng);
        const auto li = static_cast<std::int64_t>(L);
        const std::int64_t start = rng.uniform(-2 * li, 2 * li);
        const std::int64_t m = rng.uniform(1, 2);
        return AvgInput{std::move(fs), Interval(start, m * li)};
      },
      [&](const AvgInput& in) {
        const AverageResult a = multi_average(sys, in.fs, in.interval);
        const AverageResult lim = multi_average_limit(sys, in.fs);
        Check c;
        c.holds = a.values == lim.values;
        c.details = {{"fs", observables(in.fs)},
                     {"start", in.interval.start},
                     {"length", in.interval.length},
                     {"average", rationals(a.values.values())},
                     {"limit", rationals(lim.values.values())}};
        return c;
      }));

  report.push_back(run.draws<AvgInput>(
      "averages.convergence",
      [&](Rng& rng) {
        auto fs = gen_fs(rng);
        const std::int64_t start = rng.uniform(-20, 20);
        const std::int64_t len = rng.uniform(1, 3 * static_cast<std::int64_t>(L) + 1);
        return AvgInput{std::move(fs), Interval(start, len)};
      },
      [&](const AvgInput& in) {
        const ConvergenceCheck r = convergence_check(sys, in.fs, in.interval);
        Check c;
        c.holds = r.holds;
        c.details = {{"fs", observables(in.fs)},
                     {"start", in.interval.start},
                     {"length", in.interval.length},
                     {"distance_sq", to_string(r.distance_sq)},
                     {"bound", to_string(r.bound)}};
        return c;
      }));

  const FiniteSystem derived = sys.with_transforms(derive_T_from_S(sys));
  std::vector<std::size_t> reversed(D);
  for (std::size_t i = 0; i < D; ++i) reversed[i] = D - 1 - i;
  const Partition derived_zed = zed_partition(derived, reversed, opts);
  std::size_t char_index = 0;
  report.push_back(run.draws<std::vector<Observable>>(
      "averages.characteristic",
      [&](Rng& rng) {
        auto fs = gen_fs(rng);
        if (char_index++ % 2 == 1) fs[0] = fs[0] - conditional_expectation(fs[0], derived_zed, weights);
        return fs;
      },
      [&](const std::vector<Observable>& fs) {
        const CharacteristicBound r = characteristic_bound_check(sys, fs, serial);
        Check c;
        bool null_limit = true;
        for (PointId x = 0; x < sys.size(); ++x) {
          if (weights[x] > 0 && r.limit[x] != 0) null_limit = false;
        }
        c.holds = r.holds && (r.rhs.pow != 0 || null_limit);
        c.details = {{"fs", observables(fs)},
                     {"limit_norm_sq", to_string(r.lhs)},
                     {"seminorm_pow", to_string(r.rhs.pow)},
                     {"limit", rationals(r.limit.values())}};
        return c;
      }));

  if (D < 2) {
    report.push_back(Runner::skip("averages.decomposable", "needs at least two transforms"));
  } else {
    const auto ts = derive_T_from_S(sys);
    struct DecInput {
      std::vector<Observable> gs, rest;
    };
    report.push_back(run.draws<DecInput>(
        "averages.decomposable",
        [&](Rng& rng) {
          DecInput in;
          for (std::size_t i = 1; i < D; ++i) in.gs.push_back(random_invariant_observable(rng, ts[i]));
          in.rest = random_observables(rng, D - 1, n);
          return in;
        },
        [&](const DecInput& in) {
          const DecomposableReduction red = reduce_decomposable(sys, in.gs, in.rest);
          std::vector<Observable> full{red.f1};
          full.insert(full.end(), in.rest.begin(), in.rest.end());
          const AverageResult lhs = multi_average_limit(sys, full);
          const AverageResult rhs = multi_average_limit(red.reduced, red.fs);
          Check c;
          c.holds = lhs.values == rhs.values;
          c.details = {{"gs", observables(in.gs)},
                       {"fs", observables(in.rest)},
                       {"full", rationals(lhs.values.values())},
                       {"reduced", rationals(rhs.values.values())}};
          return c;
        }));
  }

  std::vector<Permutation> ordered;
  for (auto i : order) ordered.push_back(sys.transform(i));
  const auto period = static_cast<std::int64_t>(common_period(ordered));
  struct UniInput {
    VertexFunctions fs;
    std::vector<std::int64_t> starts;
  };
  report.push_back(run.draws<UniInput>(
      "averages.uniformity",
      [&](Rng& rng) {
        UniInput in{random_vertex_functions(rng, d, n), {0, rng.uniform(-period, 2 * period)}};
        return in;
      },
      [&](const UniInput& in) {
        const UniformityReport r = uniformity_scan(sys, order, in.fs, period, in.starts, 1e-9, serial);
        Check c;
        c.holds = r.power_bound && r.within_delta;
        c.details = {{"fs", vertex_json(in.fs, n)},
                     {"starts", in.starts},
                     {"length", period},
                     {"max_abs_J", to_string(r.max_abs_J)},
                     {"seminorm_pow", to_string(r.seminorm.pow)}};
        return c;
      }));

  struct VdcInput {
    std::vector<Observable> u;
    std::int64_t H;
  };
  report.push_back(run.draws<VdcInput>(
      "averages.van_der_corput",
      [&](Rng& rng) {
        const std::int64_t N = rng.uniform(1, 64);
        VdcInput in{random_observables(rng, static_cast<std::size_t>(N), n), rng.uniform(1, N)};
        return in;
      },
      [&](const VdcInput& in) {
        const VanDerCorputResult r = van_der_corput_bound(in.u, weights, in.H);
        Check c;
        c.holds = r.holds;
        c.details = {{"u", observables(in.u)}, {"H", in.H}, {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)}};
        return c;
      }));

  const StarSystem& st = need_star();
  report.push_back(run.single("magic.extension", [&] {
    Check c;
    const bool factor = factor_map_check(st);
    const bool commute = extension_commutation_check(st);
    const bool descent = invariant_descent_check(st);
    bool s_factor = true;
    if (st.order().size() == D) {
      const auto s_star = derive_S_star(st);
      const Permutation& t1 = sys.transform(0);
      for (std::size_t i = 0; i < D && s_factor; ++i) {
        const Permutation s_i = i == 0 ? t1 : sys.transform(i) * t1;
        for (std::size_t x = 0; x < st.size(); ++x) {
          if (st.tuple(s_star[i](static_cast<PointId>(x)))[0] != s_i(st.tuple(x)[0])) {
            s_factor = false;
            break;
          }
        }
      }
    }
    c.holds = factor && commute && descent && s_factor;
    c.details = {{"factor_map", factor},
                 {"extension_commutation", commute},
                 {"invariant_descent", descent},
                 {"s_star_factor", s_factor}};
    return c;
  }));

  const SparseCubeMeasure star_box = star_box_measure(st, opts);
  const Partition wstar = wstar_partition(st);
  report.push_back(run.draws<Observable>(
      "magic.side_orthogonal", [&](Rng& rng) { return random_observable(rng, st.size()); },
      [&](const Observable& G) {
        const Observable F = G - star_conditional_expectation(st, G, wstar);
        const MagicResult r = magic_check(st, star_box, F);
        Check c;
        c.holds = r.holds && r.expectation_is_zero && r.star_pow == 0;
        c.details = {{"G", rationals(G.values())}, {"star_pow", to_string(r.star_pow)}};
        return c;
      }));

  const auto gen_null_f0 = [&](Rng& rng) {
    VertexFunctions fs = random_vertex_functions(rng, d, n);
    const Observable h = *fs.get(0);
    fs.set(0, h - conditional_expectation(h, zed, weights));
    return fs;
  };

  report.push_back(run.draws<VertexFunctions>("magic.span0", gen_null_f0, [&](const VertexFunctions& fs) {
    Check c;
    c.holds = span0_orthogonality_check(st, zed, fs);
    c.details = {{"fs", vertex_json(fs, n)}};
    return c;
  }));

  report.push_back(run.draws<VertexFunctions>("magic.normstar", gen_null_f0, [&](const VertexFunctions& fs) {
    Check c;
    c.holds = normstar_check(st, star_box, fs);
    c.details = {{"fs", vertex_json(fs, n)}};
    return c;
  }));

  return report;
}

}  // namespace boxlab::cli
