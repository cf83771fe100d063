#include "boxlab/system.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "boxlab/errors.hpp"

namespace boxlab {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "; ";
    out += l;
  }
  return out;
}

void check_system(std::span<const Rational> weights, std::span<const Permutation> transforms,
                  ValidationReport& report) {
  const std::size_t n = weights.size();
  Rational total = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (weights[x] < 0) report.violations.push_back("negative weight at point " + std::to_string(x));
    total += weights[x];
  }
  if (total != 1) report.violations.push_back("weights sum to " + to_string(total) + ", not 1");

  for (std::size_t i = 0; i < transforms.size(); ++i) {
    for (PointId x = 0; x < n; ++x) {
      if (weights[transforms[i](x)] != weights[x]) {
        report.violations.push_back("measure preservation: transform " + std::to_string(i + 1) +
                                    " maps point " + std::to_string(x) + " to a point of different weight");
        break;
      }
    }
  }
  for (std::size_t i = 0; i < transforms.size(); ++i) {
    for (std::size_t j = i + 1; j < transforms.size(); ++j) {
      for (PointId x = 0; x < n; ++x) {
        if (transforms[i](transforms[j](x)) != transforms[j](transforms[i](x))) {
          report.violations.push_back("commutation: transforms " + std::to_string(i + 1) + " and " +
                                      std::to_string(j + 1) + " do not commute");
          break;
        }
      }
    }
  }
}

std::vector<Permutation> structural_transforms(const RawSystem& raw) {
  if (raw.points <= 0) throw StructuralError("point count must be positive");
  const auto n = static_cast<std::size_t>(raw.points);
  if (raw.weights.size() != n) {
    throw StructuralError("expected " + std::to_string(n) + " weights, got " +
                          std::to_string(raw.weights.size()));
  }
  if (!raw.labels.empty() && raw.labels.size() != n) {
    throw StructuralError("expected " + std::to_string(n) + " labels, got " +
                          std::to_string(raw.labels.size()));
  }
  std::vector<Permutation> out;
  out.reserve(raw.transforms.size());
  for (std::size_t i = 0; i < raw.transforms.size(); ++i) {
    const auto& arr = raw.transforms[i];
    const std::string name = "transform " + std::to_string(i + 1);
    if (arr.size() != n) {
      throw StructuralError(name + " has length " + std::to_string(arr.size()) + ", expected " +
                            std::to_string(n));
    }
    std::vector<PointId> img(n);
    std::vector<bool> hit(n, false);
    for (std::size_t x = 0; x < n; ++x) {
      if (arr[x] < 0 || static_cast<std::size_t>(arr[x]) >= n || hit[static_cast<std::size_t>(arr[x])]) {
        throw StructuralError(name + " not a bijection");
      }
      hit[static_cast<std::size_t>(arr[x])] = true;
      img[x] = static_cast<PointId>(arr[x]);
    }
    out.emplace_back(std::move(img));
  }
  return out;
}

}  // namespace

ValidationReport validate_system(const RawSystem& raw) {
  const auto transforms = structural_transforms(raw);
  ValidationReport report;
  check_system(raw.weights, transforms, report);
  return report;
}

FiniteSystem::FiniteSystem(std::vector<Rational> weights, std::vector<Permutation> transforms,
                           std::vector<std::string> labels)
    : weights_(std::move(weights)), transforms_(std::move(transforms)), labels_(std::move(labels)) {
  if (weights_.empty()) throw StructuralError("point count must be positive");
  for (const auto& t : transforms_) {
    if (t.size() != weights_.size()) throw StructuralError("transform size does not match point count");
  }
  if (!labels_.empty() && labels_.size() != weights_.size()) {
    throw StructuralError("label count does not match point count");
  }
  ValidationReport report;
  check_system(weights_, transforms_, report);
  if (!report.ok()) throw InvariantViolation(join_lines(report.violations));
}

FiniteSystem FiniteSystem::from_raw(const RawSystem& raw) {
  auto transforms = structural_transforms(raw);
  return FiniteSystem(raw.weights, std::move(transforms), raw.labels);
}

FiniteSystem FiniteSystem::cyclic(std::size_t n, std::span<const std::int64_t> steps) {
  std::vector<Rational> w(n, Rational(1, n));
  std::vector<Permutation> ts;
  for (auto s : steps) ts.push_back(Permutation::shift(n, s));
  return FiniteSystem(std::move(w), std::move(ts));
}

FiniteSystem FiniteSystem::with_transforms(std::vector<Permutation> transforms) const {
  return FiniteSystem(weights_, std::move(transforms), labels_);
}

void check_order(const FiniteSystem& sys, std::span<const std::size_t> order) {
  if (order.empty()) throw PreconditionError("transform order must be non-empty");
  std::vector<bool> used(sys.dimension(), false);
  for (auto t : order) {
    if (t >= sys.dimension()) {
      throw PreconditionError("transform index " + std::to_string(t + 1) + " out of range");
    }
    if (used[t]) throw PreconditionError("transform index " + std::to_string(t + 1) + " repeated");
    used[t] = true;
  }
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::size_t n, std::vector<std::vector<PointId>> cells)
    : cells_(std::move(cells)), cell_of_(n, SIZE_MAX) {
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].empty()) throw StructuralError("partition has an empty cell");
    for (PointId x : cells_[c]) {
      if (x >= n) throw StructuralError("partition cell contains an out-of-range point");
      if (cell_of_[x] != SIZE_MAX) throw StructuralError("partition cells overlap");
      cell_of_[x] = c;
    }
  }
  for (auto c : cell_of_) {
    if (c == SIZE_MAX) throw StructuralError("partition cells do not cover the index set");
  }
  canonicalize();
}

void Partition::canonicalize() {
  for (auto& c : cells_) std::sort(c.begin(), c.end());
  std::sort(cells_.begin(), cells_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (PointId x : cells_[c]) cell_of_[x] = c;
  }
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  std::map<std::size_t, std::vector<PointId>> groups;
  for (std::size_t x = 0; x < labels.size(); ++x) groups[labels[x]].push_back(static_cast<PointId>(x));
  std::vector<std::vector<PointId>> cells;
  cells.reserve(groups.size());
  for (auto& [_, c] : groups) cells.push_back(std::move(c));
  return Partition(labels.size(), std::move(cells));
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::vector<PointId>> cells(n);
  for (std::size_t x = 0; x < n; ++x) cells[x] = {static_cast<PointId>(x)};
  return Partition(n, std::move(cells));
}

Partition Partition::trivial(std::size_t n) {
  std::vector<PointId> all(n);
  std::iota(all.begin(), all.end(), PointId{0});
  return Partition(n, {std::move(all)});
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.size() != size()) return false;
  for (const auto& c : cells_) {
    for (PointId x : c) {
      if (coarser.cell_of(x) != coarser.cell_of(c.front())) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Observable

Observable::Observable(std::vector<Rational> values, std::optional<Rational> sup_bound)
    : values_(std::move(values)), sup_bound_(std::move(sup_bound)) {
  if (sup_bound_) {
    for (std::size_t x = 0; x < values_.size(); ++x) {
      if (abs(values_[x]) > *sup_bound_) {
        throw InvariantViolation("observable value at point " + std::to_string(x) +
                                 " exceeds its sup bound " + to_string(*sup_bound_));
      }
    }
  }
}

Observable Observable::constant(std::size_t n, const Rational& c) {
  return Observable(std::vector<Rational>(n, c));
}

Observable Observable::indicator(std::size_t n, std::span<const PointId> set) {
  std::vector<Rational> v(n, 0);
  for (PointId x : set) v.at(x) = 1;
  return Observable(std::move(v), Rational(1));
}

Rational Observable::sup_norm() const {
  Rational m = 0;
  for (const auto& v : values_) {
    Rational a = abs(v);
    if (a > m) m = a;
  }
  return m;
}

bool Observable::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v == 0; });
}

namespace {

void require_same_size(const Observable& f, const Observable& g) {
  if (f.size() != g.size()) throw StructuralError("observables live on different point sets");
}

}  // namespace

Observable operator+(const Observable& f, const Observable& g) {
  require_same_size(f, g);
  std::vector<Rational> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = f[x] + g[x];
  return Observable(std::move(v));
}

Observable operator-(const Observable& f, const Observable& g) {
  require_same_size(f, g);
  std::vector<Rational> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = f[x] - g[x];
  return Observable(std::move(v));
}

Observable operator*(const Observable& f, const Observable& g) {
  require_same_size(f, g);
  std::vector<Rational> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = f[x] * g[x];
  return Observable(std::move(v));
}

Observable operator*(const Rational& c, const Observable& f) {
  std::vector<Rational> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = c * f[x];
  return Observable(std::move(v));
}

Observable compose(const Observable& f, const Permutation& t) {
  if (f.size() != t.size()) throw StructuralError("observable and transform sizes differ");
  std::vector<Rational> v(f.size());
  for (PointId x = 0; x < v.size(); ++x) v[x] = f[t(x)];
  return Observable(std::move(v), f.sup_bound());
}

Rational inner_product(const Observable& f, const Observable& g, std::span<const Rational> weights) {
  require_same_size(f, g);
  if (weights.size() != f.size()) throw StructuralError("weights and observable sizes differ");
  Rational s = 0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (weights[x] != 0) s += weights[x] * f[x] * g[x];
  }
  return s;
}

Rational integral(const Observable& f, std::span<const Rational> weights) {
  if (weights.size() != f.size()) throw StructuralError("weights and observable sizes differ");
  Rational s = 0;
  for (std::size_t x = 0; x < f.size(); ++x) s += weights[x] * f[x];
  return s;
}

Rational l2_norm_sq(const Observable& f, std::span<const Rational> weights) {
  return inner_product(f, f, weights);
}

// ---------------------------------------------------------------------------
// Partitions from transforms

Partition orbit_partition(const Permutation& t) { return Partition(t.size(), t.cycles()); }

Partition orbit_partition(const FiniteSystem& sys, const Permutation& t) {
  if (t.size() != sys.size()) throw StructuralError("transform size does not match the system");
  return orbit_partition(t);
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

Partition orbit_components(std::size_t n, std::span<const Permutation> ts) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (const auto& t : ts) {
    if (t.size() != n) throw StructuralError("transform size does not match the index set");
    for (PointId x = 0; x < n; ++x) {
      auto a = find_root(parent, x), b = find_root(parent, t(x));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> label(n);
  for (std::size_t x = 0; x < n; ++x) label[x] = find_root(parent, x);
  return Partition::from_labels(label);
}

Partition join_partitions(std::span<const Partition> parts) {
  if (parts.empty()) throw StructuralError("join of an empty list of partitions");
  const std::size_t n = parts.front().size();
  for (const auto& p : parts) {
    if (p.size() != n) throw StructuralError("joining partitions of different index sets");
  }
  std::map<std::vector<std::size_t>, std::size_t> ids;
  std::vector<std::size_t> label(n);
  std::vector<std::size_t> key(parts.size());
  for (PointId x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < parts.size(); ++i) key[i] = parts[i].cell_of(x);
    label[x] = ids.try_emplace(key, ids.size()).first->second;
  }
  return Partition::from_labels(label);
}

Observable conditional_expectation(const Observable& f, const Partition& p,
                                   std::span<const Rational> weights) {
  if (f.size() != p.size() || weights.size() != p.size()) {
    throw StructuralError("observable, partition and weights must share an index set");
  }
  std::vector<Rational> out(f.size());
  for (const auto& cell : p.cells()) {
    Rational mass = 0, acc = 0;
    for (PointId x : cell) {
      mass += weights[x];
      acc += weights[x] * f[x];
    }
    Rational value = mass > 0 ? Rational(acc / mass) : Rational(0);
    for (PointId x : cell) out[x] = value;
  }
  return Observable(std::move(out));
}

}  // namespace boxlab
