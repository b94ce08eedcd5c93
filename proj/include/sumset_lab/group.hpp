#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sumset_lab/common.hpp"

namespace sumset_lab {

using Element = std::uint32_t;

/// Direct product Z_{m_1} x ... x Z_{m_t} with elements stored as dense indices.
///
/// An element index is the mixed-radix number whose digits are the components
/// (g_1, ..., g_t), first factor most significant. Groups are not canonicalized:
/// [2,3] and [6] are different representations of isomorphic groups.
///
/// Copies share one immutable implementation, so passing groups by value is cheap.
class FiniteAbelianGroup {
 public:
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 30;

  FiniteAbelianGroup() : FiniteAbelianGroup(trivial()) {}

  static FiniteAbelianGroup make(std::vector<std::uint32_t> orders) {
    require(!orders.empty(), ErrorKind::invalid_group, "a group needs at least one cyclic factor");
    std::uint64_t total = 1;
    for (auto m : orders) {
      require(m >= 2, ErrorKind::invalid_group, "cyclic factor orders must be at least 2, got " + std::to_string(m));
      total *= m;
      require(total <= kMaxOrder, ErrorKind::invalid_group, "group order exceeds 2^30");
    }
    return FiniteAbelianGroup(std::move(orders));
  }

  /// The group of order 1 (no cyclic factors); only produced by full quotients.
  static FiniteAbelianGroup trivial() { return FiniteAbelianGroup(std::vector<std::uint32_t>{}); }

  const std::vector<std::uint32_t>& orders() const noexcept { return impl_->orders; }
  std::uint32_t order() const noexcept { return impl_->order; }
  std::size_t rank() const noexcept { return impl_->orders.size(); }
  Element zero() const noexcept { return 0; }

  bool contains(Element a) const noexcept { return a < order(); }

  std::vector<std::uint32_t> decode(Element a) const {
    check(a);
    std::vector<std::uint32_t> digits(rank());
    for (std::size_t i = rank(); i-- > 0;) {
      digits[i] = a % impl_->orders[i];
      a /= impl_->orders[i];
    }
    return digits;
  }

  Element encode(std::span<const std::uint32_t> digits) const {
    require(digits.size() == rank(), ErrorKind::invalid_element, "digit tuple has wrong length");
    Element a = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      require(digits[i] < impl_->orders[i], ErrorKind::invalid_element, "digit out of range for its factor");
      a = a * impl_->orders[i] + digits[i];
    }
    return a;
  }

  Element add(Element a, Element b) const {
    check(a);
    check(b);
    return add_unchecked(a, b);
  }

  Element neg(Element a) const {
    check(a);
    return neg_unchecked(a);
  }

  Element sub(Element a, Element b) const {
    check(a);
    check(b);
    return add_unchecked(a, neg_unchecked(b));
  }

  /// k·a
  Element multiple(Element a, std::uint64_t k) const {
    check(a);
    Element acc = 0;
    Element base = a;
    while (k) {
      if (k & 1) acc = add_unchecked(acc, base);
      base = add_unchecked(base, base);
      k >>= 1;
    }
    return acc;
  }

  Element add_unchecked(Element a, Element b) const noexcept {
    if (!impl_->add_table.empty()) return impl_->add_table[static_cast<std::size_t>(a) * order() + b];
    Element out = 0;
    Element weight = 1;
    for (std::size_t i = rank(); i-- > 0;) {
      const auto m = impl_->orders[i];
      const auto s = (a % m + b % m) % m;
      out += s * weight;
      weight *= m;
      a /= m;
      b /= m;
    }
    return out;
  }

  Element neg_unchecked(Element a) const noexcept {
    if (!impl_->neg_table.empty()) return impl_->neg_table[a];
    Element out = 0;
    Element weight = 1;
    for (std::size_t i = rank(); i-- > 0;) {
      const auto m = impl_->orders[i];
      out += ((m - a % m) % m) * weight;
      weight *= m;
      a /= m;
    }
    return out;
  }

  std::string describe() const {
    if (rank() == 0) return "trivial";
    std::ostringstream os;
    for (std::size_t i = 0; i < rank(); ++i) os << (i ? " x " : "") << "Z_" << impl_->orders[i];
    return os.str();
  }

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.impl_ == b.impl_ || a.orders() == b.orders();
  }

 private:
  static constexpr std::uint32_t kTableLimit = 64;

  struct Impl {
    std::vector<std::uint32_t> orders;
    std::uint32_t order = 1;
    std::vector<Element> add_table;
    std::vector<Element> neg_table;
  };

  explicit FiniteAbelianGroup(std::vector<std::uint32_t> orders) {
    auto impl = std::make_shared<Impl>();
    impl->orders = std::move(orders);
    impl->order = std::accumulate(impl->orders.begin(), impl->orders.end(), std::uint32_t{1},
                                  [](std::uint32_t a, std::uint32_t b) { return a * b; });
    impl_ = impl;
    if (impl->order <= kTableLimit) {
      const auto n = impl->order;
      std::vector<Element> add(static_cast<std::size_t>(n) * n);
      std::vector<Element> neg(n);
      for (Element a = 0; a < n; ++a) {
        neg[a] = neg_unchecked(a);
        for (Element b = 0; b < n; ++b) add[static_cast<std::size_t>(a) * n + b] = add_unchecked(a, b);
      }
      impl->add_table = std::move(add);
      impl->neg_table = std::move(neg);
    }
  }

  void check(Element a) const {
    if (!contains(a))
      fail(ErrorKind::invalid_element,
           "element " + std::to_string(a) + " out of range for group of order " + std::to_string(order()));
  }

  std::shared_ptr<const Impl> impl_;
};

inline FiniteAbelianGroup make_group(std::vector<std::uint32_t> orders) {
  return FiniteAbelianGroup::make(std::move(orders));
}

/// Subset of a group as a membership bitset.
class GroupSubset {
 public:
  GroupSubset() = default;
  explicit GroupSubset(FiniteAbelianGroup group) : group_(std::move(group)), members_(group_.order()) {}

  static GroupSubset of(const FiniteAbelianGroup& group, std::span<const Element> elements) {
    GroupSubset s(group);
    for (auto e : elements) s.insert(e);
    return s;
  }
  static GroupSubset of(const FiniteAbelianGroup& group, std::initializer_list<Element> elements) {
    return of(group, std::span<const Element>(elements.begin(), elements.size()));
  }
  static GroupSubset full(const FiniteAbelianGroup& group) {
    GroupSubset s(group);
    s.members_.set_all();
    return s;
  }

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  const Bitset& members() const noexcept { return members_; }

  void insert(Element e) {
    require(group_.contains(e), ErrorKind::invalid_element,
            "element " + std::to_string(e) + " not in group of order " + std::to_string(group_.order()));
    members_.set(e);
  }
  bool contains(Element e) const { return group_.contains(e) && members_.test(e); }
  std::size_t size() const { return static_cast<std::size_t>(members_.count()); }
  bool empty() const { return members_.none(); }
  bool is_full() const { return members_.all(); }

  std::vector<Element> elements() const {
    std::vector<Element> out;
    members_.for_each_set([&](std::size_t i) { out.push_back(static_cast<Element>(i)); });
    return out;
  }

  /// Smallest member; the set must be non-empty.
  Element min() const {
    require(!empty(), ErrorKind::invalid_input, "min of empty subset");
    Element m = 0;
    while (!members_.test(m)) ++m;
    return m;
  }

  /// {s + t : s in this}
  GroupSubset translate(Element t) const {
    GroupSubset out(group_);
    members_.for_each_set([&](std::size_t s) { out.members_.set(group_.add(static_cast<Element>(s), t)); });
    return out;
  }

  bool is_subset_of(const GroupSubset& other) const { return members_.is_subset_of(other.members_); }

  std::string describe() const {
    std::string out = "{";
    bool first = true;
    for (auto e : elements()) {
      out += (first ? "" : ",") + std::to_string(e);
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const GroupSubset& a, const GroupSubset& b) {
    return a.group_ == b.group_ && a.members_ == b.members_;
  }

 private:
  FiniteAbelianGroup group_;
  Bitset members_;
};

/// Closure of {0} ∪ S under addition. In a finite group this is also closed
/// under negation, so it is the subgroup generated by S.
inline GroupSubset subgroup_generated(const FiniteAbelianGroup& g, const GroupSubset& s) {
  require(s.group() == g, ErrorKind::invalid_input, "subset belongs to a different group");
  const auto gens = s.elements();
  GroupSubset h(g);
  std::vector<Element> frontier{g.zero()};
  h.insert(g.zero());
  while (!frontier.empty()) {
    const Element x = frontier.back();
    frontier.pop_back();
    for (auto gen : gens) {
      const Element y = g.add_unchecked(x, gen);
      if (!h.contains(y)) {
        h.insert(y);
        frontier.push_back(y);
      }
    }
  }
  return h;
}

inline bool is_subgroup(const GroupSubset& h) {
  const auto& g = h.group();
  if (!h.contains(g.zero())) return false;
  const auto elems = h.elements();
  for (auto a : elems)
    for (auto b : elems)
      if (!h.contains(g.add_unchecked(a, b))) return false;
  return true;
}

struct StrictCosetVerdict {
  bool in_strict_coset = false;
  /// Subgroup generated by Z0 - {shift}; equals the whole group when the verdict is false.
  GroupSubset subgroup;
  Element shift = 0;
};

/// Decides whether Z0 lies in some H + {x} with H a proper subgroup.
/// Uses x = min(Z0); the answer does not depend on which member is used.
inline StrictCosetVerdict is_in_strict_coset(const FiniteAbelianGroup& g, const GroupSubset& z0) {
  require(z0.group() == g, ErrorKind::invalid_input, "Z0 belongs to a different group");
  require(!z0.empty(), ErrorKind::invalid_input, "Z0 must be non-empty");
  const Element z = z0.min();
  GroupSubset h = subgroup_generated(g, z0.translate(g.neg(z)));
  const bool strict = !h.is_full();
  return {strict, std::move(h), z};
}

/// Projection G -> K = G/H realised as an explicit index table.
struct QuotientMap {
  FiniteAbelianGroup group;
  GroupSubset subgroup;
  FiniteAbelianGroup image;
  std::vector<Element> table;

  Element operator()(Element a) const {
    require(group.contains(a), ErrorKind::invalid_element, "element outside the quotient's domain");
    return table[a];
  }
};

namespace detail {

/// Row transform U (unimodular) with U·R·V diagonal for the integer matrix R
/// (rows x cols, row-major). Returns U and the diagonal.
inline std::pair<std::vector<std::vector<std::int64_t>>, std::vector<std::int64_t>> smith_rows(
    std::vector<std::vector<std::int64_t>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::vector<std::int64_t>> u(rows, std::vector<std::int64_t>(rows, 0));
  for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;

  auto row_axpy = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t j = 0; j < cols; ++j) a[dst][j] -= q * a[src][j];
    for (std::size_t j = 0; j < rows; ++j) u[dst][j] -= q * u[src][j];
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t i = 0; i < rows; ++i) a[i][dst] -= q * a[i][src];
  };

  std::vector<std::int64_t> diag(rows, 0);
  for (std::size_t p = 0; p < rows && p < cols; ++p) {
    while (true) {
      // Bring the smallest nonzero entry of the trailing block to (p, p).
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = p; i < rows; ++i)
        for (std::size_t j = p; j < cols; ++j)
          if (a[i][j] != 0 && (bi == rows || std::llabs(a[i][j]) < std::llabs(a[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == rows) break;
      std::swap(a[p], a[bi]);
      std::swap(u[p], u[bi]);
      for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][p], a[i][bj]);

      bool clean = true;
      for (std::size_t i = p + 1; i < rows; ++i) {
        if (a[i][p] == 0) continue;
        row_axpy(i, p, a[i][p] / a[p][p]);
        if (a[i][p] != 0) clean = false;
      }
      for (std::size_t j = p + 1; j < cols; ++j) {
        if (a[p][j] == 0) continue;
        col_axpy(j, p, a[p][j] / a[p][p]);
        if (a[p][j] != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = p + 1; i < rows && divides; ++i)
        for (std::size_t j = p + 1; j < cols; ++j)
          if (a[i][j] % a[p][p] != 0) {
            // Fold the offending row into the pivot row and retry.
            for (std::size_t k = 0; k < cols; ++k) a[p][k] += a[i][k];
            for (std::size_t k = 0; k < rows; ++k) u[p][k] += u[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag[p] = std::llabs(a[p][p]);
  }
  return {std::move(u), std::move(diag)};
}

}  // namespace detail

/// Builds π: G -> G/H. The image is presented as a product of cyclic groups
/// obtained from the Smith normal form of the relation lattice.
inline QuotientMap quotient(const FiniteAbelianGroup& g, const GroupSubset& h) {
  require(h.group() == g, ErrorKind::invalid_subgroup, "subgroup belongs to a different group");
  require(is_subgroup(h), ErrorKind::invalid_subgroup, "set " + h.describe() + " is not a subgroup");

  // Small generating set for H.
  std::vector<Element> gens;
  GroupSubset span = subgroup_generated(g, GroupSubset(g));
  for (auto e : h.elements()) {
    if (span.contains(e)) continue;
    gens.push_back(e);
    span = subgroup_generated(g, GroupSubset::of(g, gens));
  }

  const std::size_t t = g.rank();
  std::vector<std::vector<std::int64_t>> rel(t, std::vector<std::int64_t>(t + gens.size(), 0));
  for (std::size_t i = 0; i < t; ++i) rel[i][i] = g.orders()[i];
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const auto digits = g.decode(gens[k]);
    for (std::size_t i = 0; i < t; ++i) rel[i][t + k] = digits[i];
  }
  auto [u, diag] = detail::smith_rows(std::move(rel));

  std::vector<std::size_t> kept;
  std::vector<std::uint32_t> image_orders;
  for (std::size_t i = 0; i < t; ++i)
    if (diag[i] > 1) {
      kept.push_back(i);
      image_orders.push_back(static_cast<std::uint32_t>(diag[i]));
    }
  FiniteAbelianGroup image = image_orders.empty() ? FiniteAbelianGroup::trivial() : make_group(image_orders);

  std::vector<Element> table(g.order());
  std::vector<std::uint32_t> out(kept.size());
  for (Element a = 0; a < g.order(); ++a) {
    const auto digits = g.decode(a);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const auto row = kept[k];
      std::int64_t v = 0;
      for (std::size_t j = 0; j < t; ++j) v += u[row][j] * static_cast<std::int64_t>(digits[j]);
      const auto d = diag[row];
      out[k] = static_cast<std::uint32_t>(((v % d) + d) % d);
    }
    table[a] = image.rank() == 0 ? 0 : image.encode(out);
  }
  require(static_cast<std::uint64_t>(image.order()) * h.size() == g.order(), ErrorKind::invariant_violation,
          "quotient order mismatch");
  return {g, h, std::move(image), std::move(table)};
}

}  // namespace sumset_lab
