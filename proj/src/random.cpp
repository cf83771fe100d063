#include "boxlab/random.hpp"

#include <algorithm>
#include <numeric>

#include "boxlab/errors.hpp"

namespace boxlab {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw PreconditionError("empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

Rational Rng::rational(std::int64_t max_den, std::int64_t bound) {
  const std::int64_t q = uniform(1, max_den);
  const std::int64_t p = uniform(-bound * q, bound * q);
  Rational r(static_cast<long>(p), static_cast<unsigned long>(q));
  r.canonicalize();
  return r;
}

std::vector<unsigned> random_permutation(Rng& rng, std::size_t n) {
  std::vector<unsigned> p(n);
  std::iota(p.begin(), p.end(), 0u);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(p[i - 1], p[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);
  }
  return p;
}

std::vector<std::vector<unsigned>> all_permutations(std::size_t k) {
  std::vector<unsigned> p(k);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<std::vector<unsigned>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

FiniteSystem random_system(Rng& rng, const SystemShape& shape) {
  const auto n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(shape.max_points)));

  struct Block {
    std::size_t offset, a, b;
  };
  std::vector<Block> blocks;
  for (std::size_t used = 0; used < n;) {
    const auto m = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(n - used)));
    std::vector<std::size_t> divisors;
    for (std::size_t a = 1; a <= m; ++a) {
      if (m % a == 0) divisors.push_back(a);
    }
    const std::size_t a = divisors[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(divisors.size()) - 1))];
    blocks.push_back({used, a, m / a});
    used += m;
  }

  const auto relabel = random_permutation(rng, n);
  std::vector<Permutation> transforms;
  for (std::size_t i = 0; i < shape.transforms; ++i) {
    std::vector<PointId> img(n);
    for (const auto& blk : blocks) {
      const auto ca = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(blk.a) - 1));
      const auto cb = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(blk.b) - 1));
      for (std::size_t u = 0; u < blk.a; ++u) {
        for (std::size_t v = 0; v < blk.b; ++v) {
          const std::size_t from = blk.offset + u * blk.b + v;
          const std::size_t to = blk.offset + ((u + ca) % blk.a) * blk.b + (v + cb) % blk.b;
          img[relabel[from]] = relabel[to];
        }
      }
    }
    transforms.emplace_back(std::move(img));
  }

  std::vector<std::int64_t> mult(blocks.size(), 1);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::int64_t total = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      mult[k] = rng.uniform(shape.allow_zero_weights ? 0 : 1, 2);
      total += mult[k] * static_cast<std::int64_t>(blocks[k].a * blocks[k].b);
    }
    if (total >= 1 && total <= shape.max_denominator) break;
    std::fill(mult.begin(), mult.end(), 1);
  }
  std::int64_t total = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) total += mult[k] * static_cast<std::int64_t>(blocks[k].a * blocks[k].b);
  std::vector<Rational> weights(n);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (std::size_t j = 0; j < blocks[k].a * blocks[k].b; ++j) {
      Rational w(static_cast<long>(mult[k]), static_cast<unsigned long>(total));
      w.canonicalize();
      weights[relabel[blocks[k].offset + j]] = w;
    }
  }
  return FiniteSystem(std::move(weights), std::move(transforms));
}

Observable random_observable(Rng& rng, std::size_t n, std::int64_t bound, std::int64_t max_den) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = rng.rational(max_den, bound);
  return Observable(std::move(v), Rational(static_cast<long>(bound)));
}

Observable random_invariant_observable(Rng& rng, const Permutation& t, std::int64_t max_den) {
  std::vector<Rational> v(t.size());
  for (const auto& cycle : t.cycles()) {
    const Rational value = rng.rational(max_den, 1);
    for (PointId x : cycle) v[x] = value;
  }
  return Observable(std::move(v), Rational(1));
}

}  // namespace boxlab
