#include "latticerec/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "latticerec/error.hpp"

namespace latticerec {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::kOverflow, "lattice coordinate overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) fail(ErrorKind::kOverflow, "lattice coordinate overflow");
  return r;
}

void require_nonempty(const std::vector<std::int64_t>& coords) {
  if (coords.empty()) fail(ErrorKind::kDimensionMismatch, "lattice dimension must be at least 1");
}

}  // namespace

MultiIndex::MultiIndex(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {
  require_nonempty(coords_);
}

MultiIndex::MultiIndex(std::initializer_list<std::int64_t> coords) : coords_(coords) {
  require_nonempty(coords_);
}

MultiIndex MultiIndex::zero(std::size_t m) { return MultiIndex(std::vector<std::int64_t>(m, 0)); }
MultiIndex MultiIndex::ones(std::size_t m) { return MultiIndex(std::vector<std::int64_t>(m, 1)); }

std::int64_t MultiIndex::coord(int axis) const {
  require_axis(axis, dimension());
  return coords_[static_cast<std::size_t>(axis - 1)];
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  require_same_dimension(*this, o);
  std::vector<std::int64_t> r(coords_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_add(coords_[i], o.coords_[i]);
  return MultiIndex(std::move(r));
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  require_same_dimension(*this, o);
  std::vector<std::int64_t> r(coords_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_sub(coords_[i], o.coords_[i]);
  return MultiIndex(std::move(r));
}

MultiIndex MultiIndex::shifted(int axis, std::int64_t delta) const {
  require_axis(axis, dimension());
  std::vector<std::int64_t> r = coords_;
  auto& c = r[static_cast<std::size_t>(axis - 1)];
  c = checked_add(c, delta);
  return MultiIndex(std::move(r));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i];
  os << ')';
  return os.str();
}

void require_same_dimension(const MultiIndex& a, const MultiIndex& b) {
  if (a.dimension() != b.dimension()) {
    fail(ErrorKind::kDimensionMismatch, "multi-index dimensions differ: " + a.to_string() +
                                            " vs " + b.to_string());
  }
}

void require_axis(int axis, std::size_t m) {
  if (axis < 1 || static_cast<std::size_t>(axis) > m) {
    fail(ErrorKind::kAxisOutOfRange,
         "axis " + std::to_string(axis) + " outside 1.." + std::to_string(m));
  }
}

bool leq(const MultiIndex& s, const MultiIndex& t) {
  require_same_dimension(s, t);
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    if (s[i] > t[i]) return false;
  }
  return true;
}

MultiIndex unit(int axis, std::size_t m) {
  if (m == 0) fail(ErrorKind::kDimensionMismatch, "lattice dimension must be at least 1");
  require_axis(axis, m);
  std::vector<std::int64_t> c(m, 0);
  c[static_cast<std::size_t>(axis - 1)] = 1;
  return MultiIndex(std::move(c));
}

MultiIndex MonotonePath::endpoint() const {
  std::vector<std::int64_t> c = start.coords();
  for (int a : steps) {
    require_axis(a, c.size());
    c[static_cast<std::size_t>(a - 1)] = checked_add(c[static_cast<std::size_t>(a - 1)], 1);
  }
  return MultiIndex(std::move(c));
}

std::vector<MultiIndex> MonotonePath::visited() const {
  std::vector<MultiIndex> out;
  out.reserve(steps.size() + 1);
  out.push_back(start);
  for (int a : steps) out.push_back(out.back().shifted(a, 1));
  return out;
}

namespace {

std::vector<std::int64_t> step_counts(const MultiIndex& t0, const MultiIndex& t) {
  require_same_dimension(t0, t);
  if (!leq(t0, t)) {
    fail(ErrorKind::kNotComparable, t0.to_string() + " is not <= " + t.to_string());
  }
  return (t - t0).coords();
}

}  // namespace

MonotonePath canonical_path(const MultiIndex& t0, const MultiIndex& t) {
  auto delta = step_counts(t0, t);
  MonotonePath p{t0, {}};
  for (std::size_t a = 0; a < delta.size(); ++a) {
    p.steps.insert(p.steps.end(), static_cast<std::size_t>(delta[a]), static_cast<int>(a + 1));
  }
  return p;
}

std::uint64_t monotone_path_count(const MultiIndex& t0, const MultiIndex& t,
                                  std::uint64_t saturate_at) {
  auto delta = step_counts(t0, t);
  // Product of binomials C(d1+..+dk, dk), each computed incrementally.
  unsigned __int128 count = 1;
  std::uint64_t total = 0;
  for (std::int64_t d : delta) {
    for (std::int64_t i = 1; i <= d; ++i) {
      ++total;
      count = count * total / static_cast<std::uint64_t>(i);
      if (count > saturate_at) return saturate_at;
    }
  }
  return static_cast<std::uint64_t>(count);
}

std::vector<MonotonePath> enumerate_monotone_paths(const MultiIndex& t0, const MultiIndex& t,
                                                   std::size_t cap) {
  if (monotone_path_count(t0, t, static_cast<std::uint64_t>(cap) + 1) > cap) {
    fail(ErrorKind::kCapExceeded, "more than " + std::to_string(cap) + " monotone paths from " +
                                      t0.to_string() + " to " + t.to_string());
  }
  // Ascending multiset permutations give lexicographic order directly.
  MonotonePath first = canonical_path(t0, t);
  std::vector<int> steps = first.steps;
  std::vector<MonotonePath> out;
  do {
    out.push_back(MonotonePath{t0, steps});
  } while (std::next_permutation(steps.begin(), steps.end()));
  return out;
}

std::uint64_t box_volume(const MultiIndex& lo, const MultiIndex& hi, std::uint64_t saturate_at) {
  auto delta = step_counts(lo, hi);
  unsigned __int128 v = 1;
  for (std::int64_t d : delta) {
    v *= static_cast<std::uint64_t>(d) + 1;
    if (v > saturate_at) return saturate_at;
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<MultiIndex> box_points(const MultiIndex& lo, const MultiIndex& hi) {
  step_counts(lo, hi);
  std::vector<MultiIndex> out;
  std::vector<std::int64_t> cur = lo.coords();
  const std::size_t m = cur.size();
  while (true) {
    out.emplace_back(cur);
    std::size_t i = m;
    while (i > 0) {
      --i;
      if (cur[i] < hi[i]) {
        ++cur[i];
        break;
      }
      cur[i] = lo[i];
      if (i == 0) return out;
    }
  }
}

}  // namespace latticerec
