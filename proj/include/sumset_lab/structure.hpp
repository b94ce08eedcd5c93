#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sumset_lab/counting.hpp"
#include "sumset_lab/regularity.hpp"

namespace sumset_lab {

struct StructureParams {
  Rational epsilon;
  std::size_t r = 1;
  Rational beta;
  std::optional<Rational> alpha;  // defaults to ε/2

  Rational effective_alpha() const { return alpha ? *alpha : epsilon / 2; }

  void validate() const {
    require(epsilon > 0 && epsilon <= 1, ErrorKind::invalid_input, "epsilon must lie in (0, 1]");
    require(beta > 0, ErrorKind::invalid_input, "beta must be positive");
    require(effective_alpha() > 0, ErrorKind::invalid_input, "alpha must be positive");
  }
};

struct StructureCertificate {
  CoordinateSet coords;
  std::vector<TensorSet> primes;      // E'_j ⊂ G^I
  std::vector<Rational> error_masses; // |E_j \ (E'_j × G^{I^c})| / |G|^n
  bool avoidance_on_I = false;
  bool sparse_branch = false;
  StructureParams params;
};

/// |S ∩ ∏E_i| / |S| with S the d-tuples summing into Z0^n.
inline Rational empirical_count_ratio(const FiniteAbelianGroup& g, const GroupSubset& z0,
                                      std::span<const TensorSet> sets, CountOptions options = {}) {
  detail::check_family(g, sets);
  const BigInt space = tuple_space_size(g, z0, sets[0].dimension(), sets.size());
  require(space > 0, ErrorKind::invalid_input, "Z0 must be non-empty");
  return Rational(exact_tuple_count(g, sets, z0, options), space);
}

namespace detail {

inline Rational uncovered_mass(const TensorSet& e, const TensorSet& prime, const CoordinateSet& coords) {
  const TensorSet cyl = cylinder(prime, coords, e.dimension());
  return Rational(BigInt(e.bits().minus(cyl.bits()).count()), BigInt(e.points()));
}

}  // namespace detail

/// Decomposes, keeps the pseudorandom fibers of density above ε/2, and
/// records exact error masses and whether the kept fibers avoid Z0^I.
/// Global avoidance of the inputs is not assumed.
inline StructureCertificate extract_structure(const FiniteAbelianGroup& g, const GroupSubset& z0,
                                              std::span<const TensorSet> sets, const StructureParams& params,
                                              CountOptions options = {}) {
  params.validate();
  detail::check_family(g, sets);
  require(z0.group() == g && !z0.empty(), ErrorKind::invalid_input, "Z0 must be a non-empty subset of G");
  const std::size_t n = sets[0].dimension();
  require(n >= 1, ErrorKind::shape, "sets must have n >= 1");

  StructureCertificate cert;
  cert.params = params;

  for (std::size_t j = 0; j < sets.size(); ++j) {
    if (density(sets[j]) > params.epsilon) continue;
    cert.sparse_branch = true;
    cert.coords = CoordinateSet{1};
    for (std::size_t k = 0; k < sets.size(); ++k) {
      cert.primes.push_back(k == j ? TensorSet(g.order(), 1) : TensorSet::full(g.order(), 1));
      cert.error_masses.push_back(detail::uncovered_mass(sets[k], cert.primes.back(), cert.coords));
    }
    cert.avoidance_on_I = avoids(g, cert.primes, z0, options);
    return cert;
  }

  const auto decomposition = decompose(sets, {params.r, params.beta, params.effective_alpha()});
  cert.coords = decomposition.coords;
  FiberLayout layout(g.order(), n, cert.coords);
  const Rational half_eps = params.epsilon / 2;
  // d(fiber) > ε/2  <=>  count > ε/2 · |G|^{|I^c|}; count is an integer.
  const std::uint64_t keep_above = detail::floor_to_u64(half_eps * Rational(BigInt(layout.free_points())));

  for (const auto& e : sets) {
    const auto counts = fiber_counts(e, cert.coords);
    std::vector<char> bad(counts.size(), 0);
    for (const auto& f : bad_fibers(e, cert.coords, params.r, params.beta)) bad[f.y] = 1;
    TensorSet prime(g.order(), cert.coords.size());
    std::uint64_t dropped = 0;
    for (std::size_t y = 0; y < counts.size(); ++y) {
      if (!bad[y] && counts[y] > keep_above) prime.insert(y);
      else dropped += counts[y];
    }
    cert.primes.push_back(std::move(prime));
    cert.error_masses.push_back(Rational(BigInt(dropped), BigInt(e.points())));
  }
  cert.avoidance_on_I = avoids(g, cert.primes, z0, options);
  return cert;
}

struct CertificateReport {
  std::vector<Rational> error_masses;  // recomputed
  std::vector<bool> error_mass_ok;     // recomputed mass ≤ ε
  bool avoidance = false;              // recomputed
  bool consistent = false;             // recorded fields agree with the recomputation
  bool passed = false;                 // all conclusions hold
};

/// Re-checks a certificate's conclusions from the inputs with tensor-set primitives only.
inline CertificateReport verify_certificate(const FiniteAbelianGroup& g, const GroupSubset& z0,
                                            std::span<const TensorSet> sets, const StructureCertificate& cert,
                                            const Rational& epsilon) {
  detail::check_family(g, sets);
  require(cert.primes.size() == sets.size(), ErrorKind::shape, "certificate has the wrong number of sets");
  CertificateReport report;
  bool shape_ok = !cert.coords.empty() && cert.coords.fits(sets[0].dimension());
  for (const auto& p : cert.primes)
    shape_ok = shape_ok && p.alphabet() == g.order() && p.dimension() == cert.coords.size();
  if (!shape_ok) return report;

  bool masses_ok = true;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    report.error_masses.push_back(detail::uncovered_mass(sets[j], cert.primes[j], cert.coords));
    report.error_mass_ok.push_back(report.error_masses.back() <= epsilon);
    masses_ok = masses_ok && report.error_mass_ok.back();
  }
  report.avoidance = avoids(g, cert.primes, z0);
  report.consistent = report.avoidance == cert.avoidance_on_I && report.error_masses == cert.error_masses;
  report.passed = masses_ok && report.avoidance;
  return report;
}

struct ContradictionReplay {
  std::vector<PointIndex> kept;  // x'_j ∈ E'_j with Σ x'_j ∈ Z0^I
  Rational fiber_ratio;          // empirical ratio of the fibers (E_j)_{I→x'_j} over G^{I^c}
  bool global_violation = false; // fiber_ratio > 0, i.e. the inputs do not avoid Z0^n
};

/// When the kept fibers fail to avoid Z0^I, locates one offending tuple of
/// kept fibers and measures how many completions of it land in Z0^n.
inline std::optional<ContradictionReplay> locate_contradiction(const FiniteAbelianGroup& g, const GroupSubset& z0,
                                                               std::span<const TensorSet> sets,
                                                               const StructureCertificate& cert) {
  detail::check_family(g, sets);
  if (cert.primes.empty() || avoids(g, cert.primes, z0)) return std::nullopt;
  const std::size_t d = sets.size();
  GroupPower power(g, cert.coords.size());
  const auto targets = power.power_points(z0);

  std::vector<PointIndex> chosen(d);
  std::function<bool(std::size_t, PointIndex)> search = [&](std::size_t j, PointIndex partial) -> bool {
    if (j + 1 == d) {
      for (auto z : targets) {
        const PointIndex last = power.sub(z, partial);
        if (cert.primes[j].contains(last)) {
          chosen[j] = last;
          return true;
        }
      }
      return false;
    }
    for (auto x : cert.primes[j].bits().indices()) {
      chosen[j] = x;
      if (search(j + 1, power.add(partial, x))) return true;
    }
    return false;
  };
  require(search(0, 0), ErrorKind::invariant_violation, "count reported a hit but no kept tuple was found");

  FiberLayout layout(g.order(), sets[0].dimension(), cert.coords);
  std::vector<TensorSet> fibers;
  for (std::size_t j = 0; j < d; ++j) fibers.push_back(restrict_index(sets[j], layout, chosen[j]));
  ContradictionReplay replay;
  replay.kept = chosen;
  replay.fiber_ratio = empirical_count_ratio(g, z0, fibers);
  replay.global_violation = replay.fiber_ratio > 0;
  return replay;
}

}  // namespace sumset_lab
