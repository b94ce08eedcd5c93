#pragma once

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sumset_lab/counting.hpp"
#include "sumset_lab/group.hpp"
#include "sumset_lab/structure.hpp"
#include "sumset_lab/tensor_set.hpp"

namespace sumset_lab {

/// AND over s blocks of (OR over the block's r coordinates of x_i ∈ A).
struct TribesAnd {
  std::vector<char> in_a;
  std::size_t r, s;
};

/// OR over s blocks of (AND over the block's r coordinates of y_i ∈ B).
struct TribesOr {
  std::vector<char> in_b;
  std::size_t r, s;
};

/// {x ∈ G^n : π(x_1) + ... + π(x_n) = level} for π: G → K.
struct LevelSet {
  QuotientMap projection;
  Element level;
};

/// base × X^{I^c}
struct CylinderPredicate {
  TensorSet base;
  CoordinateSet coords;
};

/// (Z_p^k \ {0,1}^k) × Z_p^{n-k}, or {0}^k × Z_p^{n-k} when `point_side`.
struct OptimalityPredicate {
  std::uint32_t p;
  std::size_t k;
  bool point_side;
};

using SetPredicate = std::variant<TribesAnd, TribesOr, LevelSet, CylinderPredicate, OptimalityPredicate>;

/// A subset of X^n given by a membership predicate and its exact density, so
/// it can be reasoned about at sizes too large to materialize.
class ImplicitSet {
 public:
  ImplicitSet(std::uint32_t alphabet, std::size_t n, SetPredicate predicate, Rational closed_form_density)
      : alphabet_(alphabet), n_(n), predicate_(std::move(predicate)), density_(std::move(closed_form_density)) {}

  std::uint32_t alphabet() const noexcept { return alphabet_; }
  std::size_t dimension() const noexcept { return n_; }
  const SetPredicate& predicate() const noexcept { return predicate_; }
  const Rational& closed_form_density() const noexcept { return density_; }

  std::string tag() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, TribesAnd>) return "tribes-and";
          else if constexpr (std::is_same_v<P, TribesOr>) return "tribes-or";
          else if constexpr (std::is_same_v<P, LevelSet>) return "level-set";
          else if constexpr (std::is_same_v<P, CylinderPredicate>) return "cylinder";
          else return "optimality";
        },
        predicate_);
  }

  bool contains(std::span<const std::uint32_t> x) const {
    require(x.size() == n_, ErrorKind::invalid_input, "point has wrong dimension");
    return std::visit([&](const auto& p) { return test(p, x); }, predicate_);
  }

  TensorSet materialize() const {
    return TensorSet::from_predicate(alphabet_, n_, [&](std::span<const std::uint32_t> x) {
      return std::visit([&](const auto& p) { return test(p, x); }, predicate_);
    });
  }

 private:
  static bool test(const TribesAnd& p, std::span<const std::uint32_t> x) {
    for (std::size_t b = 0; b < p.s; ++b) {
      bool any = false;
      for (std::size_t i = b * p.r; i < (b + 1) * p.r && !any; ++i) any = p.in_a[x[i]];
      if (!any) return false;
    }
    return true;
  }
  static bool test(const TribesOr& p, std::span<const std::uint32_t> x) {
    for (std::size_t b = 0; b < p.s; ++b) {
      bool all = true;
      for (std::size_t i = b * p.r; i < (b + 1) * p.r && all; ++i) all = p.in_b[x[i]];
      if (all) return true;
    }
    return false;
  }
  static bool test(const LevelSet& p, std::span<const std::uint32_t> x) {
    Element sum = 0;
    for (auto xi : x) sum = p.projection.image.add_unchecked(sum, p.projection.table[xi]);
    return sum == p.level;
  }
  static bool test(const CylinderPredicate& p, std::span<const std::uint32_t> x) {
    PointIndex idx = 0;
    for (auto c : p.coords.elements()) idx = idx * p.base.alphabet() + x[c - 1];
    return p.base.contains(idx);
  }
  static bool test(const OptimalityPredicate& p, std::span<const std::uint32_t> x) {
    if (p.point_side) {
      for (std::size_t i = 0; i < p.k; ++i)
        if (x[i] != 0) return false;
      return true;
    }
    for (std::size_t i = 0; i < p.k; ++i)
      if (x[i] > 1) return true;
    return false;
  }

  std::uint32_t alphabet_;
  std::size_t n_;
  SetPredicate predicate_;
  Rational density_;
};

namespace detail {

/// Checks Z0 ⊆ H + {x} and returns the single image κ = π(Z0).
inline Element coset_image(const QuotientMap& pi, const GroupSubset& z0, Element x) {
  require(!z0.empty(), ErrorKind::invalid_construction, "Z0 must be non-empty");
  for (auto z : z0.elements())
    require(pi.subgroup.contains(pi.group.sub(z, x)), ErrorKind::invalid_construction,
            "Z0 is not contained in the coset H + {" + std::to_string(x) + "}");
  return pi.table[z0.min()];
}

inline QuotientMap strict_quotient(const FiniteAbelianGroup& g, const GroupSubset& h) {
  require(h.group() == g, ErrorKind::invalid_construction, "H belongs to a different group");
  require(is_subgroup(h), ErrorKind::invalid_construction, "H is not a subgroup");
  require(!h.is_full(), ErrorKind::invalid_construction, "H must be a strict subgroup (H != G)");
  return quotient(g, h);
}

inline TensorSet preimage(const QuotientMap& pi, const TensorSet& in_k) {
  const auto& g = pi.group;
  return TensorSet::from_predicate(g.order(), in_k.dimension(), [&](std::span<const std::uint32_t> x) {
    PointIndex idx = 0;
    for (auto xi : x) idx = idx * pi.image.order() + pi.table[xi];
    return in_k.contains(idx);
  });
}

}  // namespace detail

/// Full preimages under π^{⊗n} of E_K, F_K ⊂ K^n with E_K + F_K missing {κ}^n,
/// where K = G/H and κ is the image of Z0 ⊆ H + {x}.
inline std::pair<TensorSet, TensorSet> coset_counterexample(const FiniteAbelianGroup& g, const GroupSubset& h,
                                                            Element x, const GroupSubset& z0, const TensorSet& e_k,
                                                            const TensorSet& f_k) {
  const QuotientMap pi = detail::strict_quotient(g, h);
  const Element kappa = detail::coset_image(pi, z0, x);
  require(e_k.alphabet() == pi.image.order() && f_k.alphabet() == pi.image.order(), ErrorKind::invalid_construction,
          "E_K and F_K must live over K^n with |K| = " + std::to_string(pi.image.order()));
  require(e_k.dimension() == f_k.dimension(), ErrorKind::invalid_construction, "E_K and F_K dimensions differ");
  const std::vector<TensorSet> quotient_sets{e_k, f_k};
  require(avoids(pi.image, quotient_sets, GroupSubset::of(pi.image, {kappa})), ErrorKind::invalid_construction,
          "E_K + F_K meets {kappa}^n");

  auto e = detail::preimage(pi, e_k);
  auto f = detail::preimage(pi, f_k);
  const std::vector<TensorSet> lifted{e, f};
  require(avoids(g, lifted, z0), ErrorKind::invariant_violation, "lifted sets fail to avoid Z0^n");
  return {std::move(e), std::move(f)};
}

/// E_i = {x : Σ_t π(x_t) = a_i}, each of density 1/|K|; their sumset avoids Z0^n
/// whenever a_1 + ... + a_d ≠ n·κ.
inline std::vector<ImplicitSet> level_set_family(const FiniteAbelianGroup& g, const GroupSubset& h, Element x,
                                                 const GroupSubset& z0, std::span<const Element> levels,
                                                 std::size_t n) {
  const QuotientMap pi = detail::strict_quotient(g, h);
  const Element kappa = detail::coset_image(pi, z0, x);
  require(!levels.empty(), ErrorKind::invalid_construction, "need at least one level");
  Element total = 0;
  for (auto a : levels) {
    require(pi.image.contains(a), ErrorKind::invalid_construction, "level outside K");
    total = pi.image.add(total, a);
  }
  require(total != pi.image.multiple(kappa, n), ErrorKind::invalid_construction,
          "levels sum to n*kappa, so the family would meet Z0^n");
  std::vector<ImplicitSet> out;
  for (auto a : levels)
    out.emplace_back(g.order(), n, LevelSet{pi, a}, Rational(BigInt(1), BigInt(pi.image.order())));
  return out;
}

/// Planted instance E_j = C_j × G^{I^c}; the bases must avoid Z0^I.
inline std::vector<ImplicitSet> cylinder_family(const FiniteAbelianGroup& g, const GroupSubset& z0,
                                                const CoordinateSet& coords, std::span<const TensorSet> bases,
                                                std::size_t n) {
  require(coords.fits(n) && !coords.empty(), ErrorKind::invalid_construction, "coordinate set must be non-empty in [1,n]");
  for (const auto& b : bases)
    require(b.alphabet() == g.order() && b.dimension() == coords.size(), ErrorKind::invalid_construction,
            "cylinder bases must live over G^I");
  require(avoids(g, bases, z0), ErrorKind::invalid_construction, "cylinder bases do not avoid Z0^I");
  std::vector<ImplicitSet> out;
  for (const auto& b : bases) out.emplace_back(g.order(), n, CylinderPredicate{b, coords}, density(b));
  return out;
}

struct TribesParameters {
  std::size_t r;
  std::size_t s;
};

/// (1 − (1 − a)^r)^s and 1 − (1 − b^r)^s
inline std::pair<Rational, Rational> tribes_densities(const Rational& a, const Rational& b, std::size_t r,
                                                      std::size_t s) {
  const Rational e = rational_pow(1 - rational_pow(1 - a, static_cast<unsigned>(r)), static_cast<unsigned>(s));
  const Rational f = 1 - rational_pow(1 - rational_pow(b, static_cast<unsigned>(r)), static_cast<unsigned>(s));
  return {e, f};
}

/// The tribe-like pair (E_n, F_n) over X^n × Y^n with n = r·s; block t
/// covers coordinates r(t−1)+1 .. rt.
inline std::pair<ImplicitSet, ImplicitSet> tribes(const CombinerTable& f, std::span<const std::uint32_t> a_set,
                                                  std::span<const std::uint32_t> b_set,
                                                  std::span<const std::uint32_t> z0, std::size_t r, std::size_t s) {
  require(r >= 1 && s >= 1, ErrorKind::invalid_construction, "r and s must be positive");
  std::vector<char> in_a(f.x_size(), 0), in_b(f.y_size(), 0), in_z(f.z_size(), 0);
  for (auto v : a_set) {
    require(v < f.x_size(), ErrorKind::invalid_construction, "A element outside X");
    in_a[v] = 1;
  }
  for (auto v : b_set) {
    require(v < f.y_size(), ErrorKind::invalid_construction, "B element outside Y");
    in_b[v] = 1;
  }
  for (auto v : z0) {
    require(v < f.z_size(), ErrorKind::invalid_construction, "Z0 element outside Z");
    in_z[v] = 1;
  }
  for (std::uint32_t x = 0; x < f.x_size(); ++x)
    for (std::uint32_t y = 0; y < f.y_size(); ++y)
      require(!(in_a[x] && in_b[y] && in_z[f(x, y)]), ErrorKind::invalid_construction, "f(A x B) meets Z0");
  const auto count = [](const std::vector<char>& v) { return static_cast<long>(std::count(v.begin(), v.end(), 1)); };
  const Rational a(count(in_a), static_cast<long>(f.x_size()));
  const Rational b(count(in_b), static_cast<long>(f.y_size()));
  require(a + b > 1, ErrorKind::invalid_construction, "need |A|/|X| + |B|/|Y| > 1");

  const auto [de, df] = tribes_densities(a, b, r, s);
  return {ImplicitSet(f.x_size(), r * s, TribesAnd{in_a, r, s}, de),
          ImplicitSet(f.y_size(), r * s, TribesOr{in_b, r, s}, df)};
}

/// r is the least integer with ((1 − a)/b)^r < ε, and s = ⌈b^{−r} ln(1/ε)⌉.
inline TribesParameters tribes_parameters(const Rational& a, const Rational& b, const Rational& epsilon) {
  require(a > 0 && a <= 1 && b > 0 && b <= 1, ErrorKind::hypothesis, "a and b must lie in (0, 1]");
  require(a + b > 1, ErrorKind::hypothesis, "need a + b > 1");
  require(epsilon > 0 && epsilon < 1, ErrorKind::hypothesis, "epsilon must lie in (0, 1)");
  const Rational ratio = (1 - a) / b;
  std::size_t r = 1;
  Rational power = ratio;
  while (!(power < epsilon)) {
    power *= ratio;
    ++r;
  }
  const long double scale = std::pow(1.0L / b.convert_to<long double>(), static_cast<long double>(r));
  const long double s = std::ceil(scale * std::log(1.0L / epsilon.convert_to<long double>()));
  return {r, static_cast<std::size_t>(std::max<long double>(1, s))};
}

/// E = (Z_p^k \ {0,1}^k) × Z_p^{n−k} and F = {0}^k × Z_p^{n−k}, with Z0 = {0,1}.
inline std::pair<ImplicitSet, ImplicitSet> optimality_example(std::uint32_t p, std::size_t k, std::size_t n) {
  require(p >= 3 && detail::is_prime_small(p), ErrorKind::invalid_construction, "p must be a prime >= 3");
  require(k >= 1, ErrorKind::invalid_construction, "k must be at least 1");
  require(k <= n, ErrorKind::shape, "k must not exceed n");
  const Rational de = 1 - rational_pow(Rational(2, static_cast<long>(p)), static_cast<unsigned>(k));
  const Rational df = rational_pow(Rational(1, static_cast<long>(p)), static_cast<unsigned>(k));
  return {ImplicitSet(p, n, OptimalityPredicate{p, k, false}, de),
          ImplicitSet(p, n, OptimalityPredicate{p, k, true}, df)};
}

struct OptimalityDiagnostic {
  std::size_t structured_coordinates = 0;
  Rational lower_bound;   // p^{−|I|} − (2/p)^k
  Rational error_mass;    // recorded mass for E
  bool applies = false;   // F' ≠ ∅ and E' ≠ Z_p^I
  bool consistent = true; // error_mass ≥ lower_bound whenever the bound applies
};

/// Compares a certificate for the optimality pair against the forced loss:
/// any valid certificate pays at least p^{−|I|} − (2/p)^k in E's error mass.
inline OptimalityDiagnostic optimality_diagnostic(const StructureCertificate& cert, std::uint32_t p, std::size_t k) {
  require(cert.primes.size() == 2, ErrorKind::invalid_input, "optimality diagnostic expects a two-set certificate");
  OptimalityDiagnostic diag;
  diag.structured_coordinates = cert.coords.size();
  diag.lower_bound = rational_pow(Rational(1, static_cast<long>(p)), static_cast<unsigned>(cert.coords.size())) -
                     rational_pow(Rational(2, static_cast<long>(p)), static_cast<unsigned>(k));
  diag.error_mass = cert.error_masses[0];
  diag.applies = !cert.primes[1].empty() && cert.primes[0].count() != cert.primes[0].points();
  diag.consistent = !diag.applies || diag.error_mass >= diag.lower_bound;
  return diag;
}

/// Independent Bernoulli(density) membership for every point.
template <typename Rng>
TensorSet random_set(std::uint32_t alphabet, std::size_t n, double point_density, Rng& rng) {
  std::bernoulli_distribution keep(point_density);
  TensorSet e(alphabet, n);
  for (PointIndex i = 0; i < e.points(); ++i)
    if (keep(rng)) e.insert(i);
  return e;
}

}  // namespace sumset_lab
