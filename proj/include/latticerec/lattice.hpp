#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace latticerec {

/// A point of Z^m. Arithmetic is componentwise and overflow-checked.
///
/// Axes are 1-based wherever they cross the public API (`unit`, path step
/// labels, `coord`); `operator[]` is the raw 0-based accessor.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::int64_t> coords);
  MultiIndex(std::initializer_list<std::int64_t> coords);

  static MultiIndex zero(std::size_t m);
  static MultiIndex ones(std::size_t m);

  std::size_t dimension() const { return coords_.size(); }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t coord(int axis) const;

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  MultiIndex shifted(int axis, std::int64_t delta) const;

  bool operator==(const MultiIndex& o) const = default;

  std::string to_string() const;

 private:
  std::vector<std::int64_t> coords_;
};

/// Componentwise partial order: s <= t iff s^a <= t^a for every axis.
bool leq(const MultiIndex& s, const MultiIndex& t);

/// 1_axis in Z^m; axis is 1-based.
MultiIndex unit(int axis, std::size_t m);

void require_same_dimension(const MultiIndex& a, const MultiIndex& b);
void require_axis(int axis, std::size_t m);

/// A monotone lattice path: unit steps along 1-based axis labels.
struct MonotonePath {
  MultiIndex start;
  std::vector<int> steps;

  MultiIndex endpoint() const;
  // start followed by every prefix endpoint; size() == steps.size() + 1.
  std::vector<MultiIndex> visited() const;
};

/// Axis-1 steps first, then axis 2, and so on.
MonotonePath canonical_path(const MultiIndex& t0, const MultiIndex& t);

inline constexpr std::size_t kDefaultPathCap = 10000;

/// Multinomial (sum d)! / prod(d!) of the per-axis step counts, saturating
/// at `saturate_at` so callers can test a cap without overflow.
std::uint64_t monotone_path_count(const MultiIndex& t0, const MultiIndex& t,
                                  std::uint64_t saturate_at = UINT64_MAX);

/// Every monotone path from t0 to t, lexicographic in the step labels.
/// Throws kNotComparable unless t0 <= t and kCapExceeded when the count
/// would exceed `cap`.
std::vector<MonotonePath> enumerate_monotone_paths(const MultiIndex& t0, const MultiIndex& t,
                                                   std::size_t cap = kDefaultPathCap);

/// Lattice points of the box [lo, hi] in row-major order (axis m fastest).
std::vector<MultiIndex> box_points(const MultiIndex& lo, const MultiIndex& hi);
std::uint64_t box_volume(const MultiIndex& lo, const MultiIndex& hi,
                         std::uint64_t saturate_at = UINT64_MAX);

}  // namespace latticerec
