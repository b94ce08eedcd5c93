#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumset_lab/common.hpp"

namespace sumset_lab {

using PointIndex = std::uint64_t;

/// Sorted set of 1-based coordinate positions.
class CoordinateSet {
 public:
  CoordinateSet() = default;
  explicit CoordinateSet(std::vector<std::size_t> coords) : coords_(std::move(coords)) {
    std::sort(coords_.begin(), coords_.end());
    require(std::adjacent_find(coords_.begin(), coords_.end()) == coords_.end(), ErrorKind::invalid_input,
            "coordinate set has repeated entries");
    require(coords_.empty() || coords_.front() >= 1, ErrorKind::invalid_input, "coordinates are 1-based");
  }
  CoordinateSet(std::initializer_list<std::size_t> coords) : CoordinateSet(std::vector<std::size_t>(coords)) {}

  static CoordinateSet prefix(std::size_t k) {
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i + 1;
    return CoordinateSet(std::move(c));
  }
  static CoordinateSet all(std::size_t n) { return prefix(n); }

  const std::vector<std::size_t>& elements() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }
  bool contains(std::size_t c) const { return std::binary_search(coords_.begin(), coords_.end(), c); }
  std::size_t max() const { return coords_.empty() ? 0 : coords_.back(); }

  bool fits(std::size_t n) const { return max() <= n; }

  CoordinateSet complement(std::size_t n) const {
    std::vector<std::size_t> out;
    for (std::size_t c = 1; c <= n; ++c)
      if (!contains(c)) out.push_back(c);
    return CoordinateSet(std::move(out));
  }

  CoordinateSet unite(const CoordinateSet& other) const {
    std::vector<std::size_t> out;
    std::set_union(coords_.begin(), coords_.end(), other.coords_.begin(), other.coords_.end(), std::back_inserter(out));
    return CoordinateSet(std::move(out));
  }

  std::string describe() const {
    std::string out = "{";
    for (std::size_t i = 0; i < coords_.size(); ++i) out += (i ? "," : "") + std::to_string(coords_[i]);
    return out + "}";
  }

  friend bool operator==(const CoordinateSet&, const CoordinateSet&) = default;

 private:
  std::vector<std::size_t> coords_;
};

/// Subset of X^n, X = {0, ..., q-1}, as a bitset over q^n points.
///
/// A point's index is the base-q number whose most significant digit is
/// coordinate 1, so fixing a prefix of coordinates selects a contiguous block.
/// The number of points is capped at 2^30. A 0-dimensional set lives on the
/// single point of X^0; such sets arise as fibers when every coordinate is fixed.
class TensorSet {
 public:
  static constexpr unsigned kMaxIndexBits = 30;

  TensorSet() : TensorSet(2, 0) {}

  TensorSet(std::uint32_t alphabet, std::size_t n) : alphabet_(alphabet), n_(n) {
    require(alphabet >= 1, ErrorKind::shape, "alphabet must be non-empty");
    PointIndex points = 1;
    for (std::size_t i = 0; i < n; ++i) {
      points *= alphabet;
      require(points <= (PointIndex{1} << kMaxIndexBits), ErrorKind::shape,
              "|X|^n exceeds 2^30 points (|X|=" + std::to_string(alphabet) + ", n=" + std::to_string(n) + ")");
    }
    points_ = points;
    bits_ = Bitset(static_cast<std::size_t>(points));
  }

  static TensorSet full(std::uint32_t alphabet, std::size_t n) {
    TensorSet s(alphabet, n);
    s.bits_.set_all();
    return s;
  }

  static TensorSet from_indices(std::uint32_t alphabet, std::size_t n, std::span<const PointIndex> indices) {
    TensorSet s(alphabet, n);
    for (auto i : indices) s.insert(i);
    return s;
  }

  /// Materializes {x : keep(digits of x)}; digits are passed coordinate 1 first.
  template <typename Pred>
  static TensorSet from_predicate(std::uint32_t alphabet, std::size_t n, Pred&& keep) {
    TensorSet s(alphabet, n);
    std::vector<std::uint32_t> digits(n, 0);
    for (PointIndex i = 0; i < s.points_; ++i) {
      if (keep(std::span<const std::uint32_t>(digits))) s.bits_.set(static_cast<std::size_t>(i));
      for (std::size_t c = n; c-- > 0;) {
        if (++digits[c] < alphabet) break;
        digits[c] = 0;
      }
    }
    return s;
  }

  std::uint32_t alphabet() const noexcept { return alphabet_; }
  std::size_t dimension() const noexcept { return n_; }
  PointIndex points() const noexcept { return points_; }
  const Bitset& bits() const noexcept { return bits_; }
  Bitset& mutable_bits() noexcept { return bits_; }
  std::uint64_t count() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }

  bool contains(PointIndex i) const { return i < points_ && bits_.test(static_cast<std::size_t>(i)); }

  void insert(PointIndex i) {
    require(i < points_, ErrorKind::invalid_input,
            "point index " + std::to_string(i) + " out of range [0, " + std::to_string(points_) + ")");
    bits_.set(static_cast<std::size_t>(i));
  }

  std::vector<std::uint32_t> decode(PointIndex i) const {
    std::vector<std::uint32_t> digits(n_);
    for (std::size_t c = n_; c-- > 0;) {
      digits[c] = static_cast<std::uint32_t>(i % alphabet_);
      i /= alphabet_;
    }
    return digits;
  }

  PointIndex encode(std::span<const std::uint32_t> digits) const {
    require(digits.size() == n_, ErrorKind::invalid_input, "digit tuple has wrong length");
    PointIndex i = 0;
    for (auto d : digits) {
      require(d < alphabet_, ErrorKind::invalid_input, "symbol out of range");
      i = i * alphabet_ + d;
    }
    return i;
  }

  bool same_shape(const TensorSet& other) const { return alphabet_ == other.alphabet_ && n_ == other.n_; }

  friend bool operator==(const TensorSet& a, const TensorSet& b) { return a.same_shape(b) && a.bits_ == b.bits_; }

 private:
  std::uint32_t alphabet_;
  std::size_t n_;
  PointIndex points_ = 1;
  Bitset bits_;
};

inline PointIndex ipow(PointIndex base, std::size_t exponent) {
  PointIndex r = 1;
  for (std::size_t i = 0; i < exponent; ++i) r *= base;
  return r;
}

/// |E| / |X|^n
inline Rational density(const TensorSet& e) {
  return Rational(BigInt(e.count()), BigInt(e.points()));
}

/// Splits point indices of X^n into (index on I, index on I^c), both in the
/// induced coordinate order.
class FiberLayout {
 public:
  FiberLayout(std::uint32_t alphabet, std::size_t n, const CoordinateSet& fixed)
      : alphabet_(alphabet), n_(n), fixed_(fixed), free_(fixed.complement(n)) {
    require(fixed.fits(n), ErrorKind::invalid_input,
            "coordinate set " + fixed.describe() + " exceeds dimension " + std::to_string(n));
    weight_.resize(n + 1);
    for (std::size_t c = 1; c <= n; ++c) weight_[c] = ipow(alphabet, n - c);
    fixed_points_ = ipow(alphabet, fixed_.size());
    free_points_ = ipow(alphabet, free_.size());
  }

  const CoordinateSet& fixed() const noexcept { return fixed_; }
  const CoordinateSet& free() const noexcept { return free_; }
  PointIndex fixed_points() const noexcept { return fixed_points_; }
  PointIndex free_points() const noexcept { return free_points_; }

  PointIndex fixed_index(PointIndex point) const { return project(point, fixed_); }
  PointIndex free_index(PointIndex point) const { return project(point, free_); }

  /// Point of X^n with the given fixed-part and free-part indices.
  PointIndex merge(PointIndex fixed_index, PointIndex free_index) const {
    return embed(fixed_index, fixed_) + embed(free_index, free_);
  }

  /// Contribution of a sub-index over `coords` to the full point index.
  PointIndex embed(PointIndex sub, const CoordinateSet& coords) const {
    PointIndex point = 0;
    const auto& c = coords.elements();
    for (std::size_t k = c.size(); k-- > 0;) {
      point += (sub % alphabet_) * weight_[c[k]];
      sub /= alphabet_;
    }
    return point;
  }

 private:
  PointIndex project(PointIndex point, const CoordinateSet& coords) const {
    PointIndex out = 0;
    for (auto c : coords.elements()) out = out * alphabet_ + (point / weight_[c]) % alphabet_;
    return out;
  }

  std::uint32_t alphabet_;
  std::size_t n_;
  CoordinateSet fixed_;
  CoordinateSet free_;
  std::vector<PointIndex> weight_;
  PointIndex fixed_points_ = 1;
  PointIndex free_points_ = 1;
};

/// |E_{I→y}| for every y ∈ X^I, indexed by y in the induced order on I.
inline std::vector<std::uint64_t> fiber_counts(const TensorSet& e, const CoordinateSet& fixed) {
  FiberLayout layout(e.alphabet(), e.dimension(), fixed);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(layout.fixed_points()), 0);
  e.bits().for_each_set([&](std::size_t p) { ++counts[static_cast<std::size_t>(layout.fixed_index(p))]; });
  return counts;
}

/// E_{I→y} viewed as a subset of X^{I^c}; y is given by its index over X^I.
inline TensorSet restrict_index(const TensorSet& e, const FiberLayout& layout, PointIndex y) {
  TensorSet out(e.alphabet(), layout.free().size());
  const PointIndex base = layout.embed(y, layout.fixed());
  for (PointIndex z = 0; z < layout.free_points(); ++z)
    if (e.contains(base + layout.embed(z, layout.free()))) out.insert(z);
  return out;
}

/// E_{I→y}; y lists the symbols for the coordinates of I in increasing order.
inline TensorSet restrict(const TensorSet& e, const CoordinateSet& fixed, std::span<const std::uint32_t> y) {
  require(y.size() == fixed.size(), ErrorKind::invalid_input, "assignment length does not match |I|");
  FiberLayout layout(e.alphabet(), e.dimension(), fixed);
  PointIndex yi = 0;
  for (auto s : y) {
    require(s < e.alphabet(), ErrorKind::invalid_input, "assignment symbol out of range");
    yi = yi * e.alphabet() + s;
  }
  return restrict_index(e, layout, yi);
}

/// E' × X^{I^c} as a subset of X^n.
inline TensorSet cylinder(const TensorSet& base, const CoordinateSet& coords, std::size_t n) {
  require(base.dimension() == coords.size(), ErrorKind::shape,
          "base set has dimension " + std::to_string(base.dimension()) + " but |I| = " + std::to_string(coords.size()));
  require(coords.fits(n), ErrorKind::shape, "coordinate set exceeds dimension");
  TensorSet out(base.alphabet(), n);
  FiberLayout layout(base.alphabet(), n, coords);
  base.bits().for_each_set([&](std::size_t y) {
    const PointIndex anchor = layout.embed(y, coords);
    for (PointIndex z = 0; z < layout.free_points(); ++z) out.insert(anchor + layout.embed(z, layout.free()));
  });
  return out;
}

/// f: X × Y → Z as a lookup table.
class CombinerTable {
 public:
  CombinerTable(std::uint32_t x_size, std::uint32_t y_size, std::uint32_t z_size, std::vector<std::uint32_t> table)
      : x_(x_size), y_(y_size), z_(z_size), table_(std::move(table)) {
    require(x_ >= 1 && y_ >= 1 && z_ >= 1, ErrorKind::invalid_input, "combiner domains must be non-empty");
    require(table_.size() == static_cast<std::size_t>(x_) * y_, ErrorKind::invalid_input, "combiner table size mismatch");
    for (auto v : table_) require(v < z_, ErrorKind::invalid_input, "combiner output out of range");
  }

  template <typename F>
  static CombinerTable from_function(std::uint32_t x_size, std::uint32_t y_size, std::uint32_t z_size, F&& f) {
    std::vector<std::uint32_t> t(static_cast<std::size_t>(x_size) * y_size);
    for (std::uint32_t x = 0; x < x_size; ++x)
      for (std::uint32_t y = 0; y < y_size; ++y) t[static_cast<std::size_t>(x) * y_size + y] = f(x, y);
    return CombinerTable(x_size, y_size, z_size, std::move(t));
  }

  /// min on {0..k-1}²
  static CombinerTable minimum(std::uint32_t k) {
    return from_function(k, k, k, [](std::uint32_t x, std::uint32_t y) { return std::min(x, y); });
  }

  std::uint32_t x_size() const noexcept { return x_; }
  std::uint32_t y_size() const noexcept { return y_; }
  std::uint32_t z_size() const noexcept { return z_; }
  std::uint32_t operator()(std::uint32_t x, std::uint32_t y) const {
    return table_[static_cast<std::size_t>(x) * y_ + y];
  }
  const std::vector<std::uint32_t>& table() const noexcept { return table_; }

 private:
  std::uint32_t x_, y_, z_;
  std::vector<std::uint32_t> table_;
};

}  // namespace sumset_lab
