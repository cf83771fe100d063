#include "boxlab/permutation.hpp"

#include <numeric>
#include <string>

#include "boxlab/errors.hpp"

namespace boxlab {

Permutation::Permutation(std::size_t n) : images_(n) {
  std::iota(images_.begin(), images_.end(), PointId{0});
}

Permutation::Permutation(std::vector<PointId> images) : images_(std::move(images)) {
  std::vector<bool> hit(images_.size(), false);
  for (PointId y : images_) {
    if (y >= images_.size() || hit[y]) throw StructuralError("array is not a bijection");
    hit[y] = true;
  }
}

Permutation Permutation::shift(std::size_t n, std::int64_t step) {
  Permutation p(n);
  if (n == 0) return p;
  const auto m = static_cast<std::int64_t>(n);
  const std::int64_t s = ((step % m) + m) % m;
  for (std::size_t x = 0; x < n; ++x) {
    p.images_[x] = static_cast<PointId>((static_cast<std::int64_t>(x) + s) % m);
  }
  return p;
}

Permutation Permutation::inverse() const {
  Permutation inv(size());
  for (std::size_t x = 0; x < size(); ++x) inv.images_[images_[x]] = static_cast<PointId>(x);
  return inv;
}

Permutation Permutation::pow(std::int64_t exponent) const {
  const std::uint64_t period = transform_period(*this);
  std::int64_t e = exponent % static_cast<std::int64_t>(period);
  if (e < 0) e += static_cast<std::int64_t>(period);
  // Walk each cycle once instead of repeated squaring.
  Permutation out(size());
  for (const auto& cycle : cycles()) {
    const std::size_t len = cycle.size();
    const std::size_t step = static_cast<std::size_t>(e) % len;
    for (std::size_t i = 0; i < len; ++i) out.images_[cycle[i]] = cycle[(i + step) % len];
  }
  return out;
}

std::vector<std::vector<PointId>> Permutation::cycles() const {
  std::vector<std::vector<PointId>> out;
  std::vector<bool> seen(size(), false);
  for (PointId start = 0; start < size(); ++start) {
    if (seen[start]) continue;
    std::vector<PointId> cycle;
    for (PointId x = start; !seen[x]; x = images_[x]) {
      seen[x] = true;
      cycle.push_back(x);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

bool Permutation::is_identity() const {
  for (std::size_t x = 0; x < size(); ++x) {
    if (images_[x] != x) return false;
  }
  return true;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw StructuralError("composing permutations of different sizes");
  std::vector<PointId> img(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) img[x] = a(b(static_cast<PointId>(x)));
  return Permutation(std::move(img));
}

std::uint64_t transform_period(const Permutation& t) {
  std::uint64_t period = 1;
  for (const auto& cycle : t.cycles()) period = std::lcm(period, cycle.size());
  return period;
}

std::uint64_t common_period(std::span<const Permutation> ts) {
  std::uint64_t period = 1;
  for (const auto& t : ts) period = std::lcm(period, transform_period(t));
  return period;
}

}  // namespace boxlab
