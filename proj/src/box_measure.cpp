#include "boxlab/box_measure.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "boxlab/errors.hpp"
#include "boxlab/parallel.hpp"

namespace boxlab {

Vertex::Vertex(unsigned k_, std::uint32_t bits_) : k(k_), bits(bits_) {
  if (k >= 32 || bits >= (std::uint32_t{1} << k)) {
    throw PreconditionError("vertex " + std::to_string(bits) + " out of range for k = " +
                            std::to_string(k));
  }
}

namespace {

bool tuple_less(std::span<const PointId> a, std::span<const PointId> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool tuple_equal(std::span<const PointId> a, std::span<const PointId> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

SparseCubeMeasure::SparseCubeMeasure(Trusted, unsigned k, std::size_t base_n,
                                     std::vector<PointId> tuples, std::vector<Rational> masses)
    : k_(k), base_n_(base_n), tuples_(std::move(tuples)), masses_(std::move(masses)) {}

SparseCubeMeasure::SparseCubeMeasure(unsigned k, std::size_t base_n, std::vector<PointId> flat_tuples,
                                     std::vector<Rational> masses)
    : k_(k), base_n_(base_n) {
  if (k >= 31) throw StructuralError("cube dimension too large");
  const std::size_t w = width();
  if (flat_tuples.size() != masses.size() * w) {
    throw StructuralError("tuple array does not match entry count times 2^k");
  }
  for (PointId id : flat_tuples) {
    if (id >= base_n) throw StructuralError("tuple entry out of range of the base point set");
  }
  const std::size_t count = masses.size();
  auto at = [&](std::size_t i) { return std::span<const PointId>(flat_tuples.data() + i * w, w); };
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return tuple_less(at(a), at(b)); });

  Rational total = 0;
  for (std::size_t pos = 0; pos < count;) {
    std::size_t end = pos;
    Rational acc = 0;
    while (end < count && tuple_equal(at(idx[end]), at(idx[pos]))) acc += masses[idx[end++]];
    if (acc < 0) throw InvariantViolation("negative mass in cube measure");
    if (acc > 0) {
      auto t = at(idx[pos]);
      tuples_.insert(tuples_.end(), t.begin(), t.end());
      total += acc;
      masses_.push_back(std::move(acc));
    }
    pos = end;
  }
  if (total != 1) throw InvariantViolation("cube measure masses sum to " + to_string(total) + ", not 1");
}

SparseCubeMeasure SparseCubeMeasure::from_weights(std::span<const Rational> weights) {
  std::vector<PointId> tuples;
  std::vector<Rational> masses;
  for (std::size_t x = 0; x < weights.size(); ++x) {
    if (weights[x] > 0) {
      tuples.push_back(static_cast<PointId>(x));
      masses.push_back(weights[x]);
    }
  }
  return SparseCubeMeasure(0, weights.size(), std::move(tuples), std::move(masses));
}

std::optional<std::size_t> SparseCubeMeasure::find(std::span<const PointId> t) const {
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (tuple_less(tuple(mid), t)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && tuple_equal(tuple(lo), t)) return lo;
  return std::nullopt;
}

Rational SparseCubeMeasure::total_mass() const {
  Rational s = 0;
  for (const auto& m : masses_) s += m;
  return s;
}

SparseCubeMeasure relative_self_product(const SparseCubeMeasure& nu, const Permutation& s,
                                        const ComputeOptions& opts) {
  if (s.size() != nu.base_n()) throw StructuralError("transform size does not match the base point set");
  if (nu.k() >= 30) throw StructuralError("cube dimension too large");
  const std::size_t count = nu.size();
  const std::size_t w = nu.width();

  // Action of s on support indices.
  std::vector<std::size_t> next(count);
  {
    std::vector<PointId> image(w);
    for (std::size_t i = 0; i < count; ++i) {
      auto t = nu.tuple(i);
      for (std::size_t e = 0; e < w; ++e) image[e] = s(t[e]);
      auto j = nu.find(image);
      if (!j || nu.mass(*j) != nu.mass(i)) {
        throw InvariantViolation("transform does not preserve the measure being squared");
      }
      next[i] = *j;
    }
  }

  std::vector<std::size_t> cell_of(count, SIZE_MAX);
  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < count; ++i) {
    if (cell_of[i] != SIZE_MAX) continue;
    std::vector<std::size_t> cell;
    for (std::size_t j = i; cell_of[j] == SIZE_MAX; j = next[j]) {
      cell_of[j] = cells.size();
      cell.push_back(j);
    }
    std::sort(cell.begin(), cell.end());
    cells.push_back(std::move(cell));
  }

  std::size_t total = 0;
  for (const auto& c : cells) {
    if (c.size() > opts.support_cap / c.size() || total > opts.support_cap - c.size() * c.size()) {
      throw ResourceError("box measure support would exceed the cap of " +
                              std::to_string(opts.support_cap) + " entries",
                          opts.support_cap);
    }
    total += c.size() * c.size();
  }

  std::vector<Rational> scaled(count);
  for (const auto& c : cells) {
    Rational cell_mass = 0;
    for (auto i : c) cell_mass += nu.mass(i);
    for (auto i : c) scaled[i] = nu.mass(i) / cell_mass;
  }

  std::vector<std::size_t> offset(count + 1, 0);
  for (std::size_t i = 0; i < count; ++i) offset[i + 1] = offset[i] + cells[cell_of[i]].size();

  // Rows ordered by the first factor, columns by the second: lexicographic.
  std::vector<PointId> tuples(total * 2 * w);
  std::vector<Rational> masses(total);
  parallel_chunks(count, opts.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto left = nu.tuple(i);
      std::size_t pos = offset[i];
      for (auto j : cells[cell_of[i]]) {
        PointId* out = tuples.data() + pos * 2 * w;
        std::copy(left.begin(), left.end(), out);
        auto right = nu.tuple(j);
        std::copy(right.begin(), right.end(), out + w);
        masses[pos] = scaled[i] * nu.mass(j);
        ++pos;
      }
    }
  });
  return SparseCubeMeasure(SparseCubeMeasure::Trusted{}, nu.k() + 1, nu.base_n(), std::move(tuples),
                           std::move(masses));
}

SparseCubeMeasure build_box_measure(const FiniteSystem& sys, std::span<const std::size_t> order,
                                    const ComputeOptions& opts) {
  check_order(sys, order);
  SparseCubeMeasure m = SparseCubeMeasure::from_weights(sys.weights());
  for (auto t : order) m = relative_self_product(m, sys.transform(t), opts);
  return m;
}

TupleMap diagonal_transform(unsigned k, const Permutation& t) {
  const std::size_t w = std::size_t{1} << k;
  return [w, t](std::span<const PointId> in, std::span<PointId> out) {
    for (std::size_t e = 0; e < w; ++e) out[e] = t(in[e]);
  };
}

TupleMap side_transform(unsigned k, unsigned digit, const Permutation& t, Direction direction) {
  if (digit >= k) throw PreconditionError("side transform digit out of range");
  const std::size_t w = std::size_t{1} << k;
  Permutation p = direction == Direction::forward ? t : t.inverse();
  return [w, digit, p](std::span<const PointId> in, std::span<PointId> out) {
    for (std::size_t e = 0; e < w; ++e) out[e] = ((e >> digit) & 1u) ? in[e] : p(in[e]);
  };
}

SparseCubeMeasure push_forward(const SparseCubeMeasure& m, const TupleMap& f) {
  const std::size_t w = m.width();
  std::vector<PointId> tuples(m.size() * w);
  for (std::size_t i = 0; i < m.size(); ++i) {
    f(m.tuple(i), std::span<PointId>(tuples.data() + i * w, w));
  }
  return SparseCubeMeasure(m.k(), m.base_n(), std::move(tuples),
                           std::vector<Rational>(m.masses().begin(), m.masses().end()));
}

std::vector<Rational> marginal(const SparseCubeMeasure& m, Vertex eps) {
  if (eps.k != m.k()) throw PreconditionError("vertex dimension does not match the measure");
  std::vector<Rational> out(m.base_n(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) out[m.tuple(i)[eps.bits]] += m.mass(i);
  return out;
}

SparseCubeMeasure apply_digit_flip(const SparseCubeMeasure& m, unsigned digit) {
  if (digit >= m.k()) throw PreconditionError("digit out of range");
  const std::size_t w = m.width();
  return push_forward(m, [w, digit](std::span<const PointId> in, std::span<PointId> out) {
    for (std::size_t e = 0; e < w; ++e) out[e] = in[e ^ (std::size_t{1} << digit)];
  });
}

SparseCubeMeasure apply_index_permutation(const SparseCubeMeasure& m,
                                          std::span<const unsigned> sigma) {
  const unsigned k = m.k();
  if (sigma.size() != k) throw PreconditionError("digit permutation has the wrong length");
  std::vector<bool> seen(k, false);
  for (unsigned s : sigma) {
    if (s >= k || seen[s]) throw PreconditionError("not a permutation of the digits");
    seen[s] = true;
  }
  const std::size_t w = m.width();
  std::vector<std::size_t> source(w);
  for (std::size_t e = 0; e < w; ++e) {
    std::size_t s = 0;
    for (unsigned i = 0; i < k; ++i) s |= ((e >> sigma[i]) & 1u) << i;
    source[e] = s;
  }
  return push_forward(m, [w, source](std::span<const PointId> in, std::span<PointId> out) {
    for (std::size_t e = 0; e < w; ++e) out[e] = in[source[e]];
  });
}

VertexFunctions VertexFunctions::uniform(unsigned k, const Observable& f) {
  VertexFunctions fs(k);
  for (std::uint32_t e = 0; e < fs.width(); ++e) fs.set(e, f);
  return fs;
}

unsigned VertexFunctions::k() const {
  unsigned k = 0;
  while ((std::size_t{1} << k) < fs_.size()) ++k;
  return k;
}

Rational integrate_product(const SparseCubeMeasure& m, const VertexFunctions& fs) {
  if (fs.width() != m.width()) throw PreconditionError("vertex functions do not match the cube dimension");
  std::vector<const Observable*> f(m.width());
  for (std::uint32_t e = 0; e < m.width(); ++e) {
    f[e] = fs.get(e);
    if (f[e] && f[e]->size() != m.base_n()) {
      throw StructuralError("vertex observable size does not match the base point set");
    }
  }
  Rational total = 0, term;
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto t = m.tuple(i);
    term = m.mass(i);
    for (std::size_t e = 0; e < t.size() && term != 0; ++e) {
      if (f[e]) term *= (*f[e])[t[e]];
    }
    total += term;
  }
  return total;
}

}  // namespace boxlab
