#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumset_lab/tensor_set.hpp"

namespace sumset_lab {

struct RegularityParams {
  std::size_t r = 1;
  Rational beta;
  Rational alpha;

  void validate() const {
    require(beta > 0, ErrorKind::invalid_input, "beta must be positive");
    require(alpha > 0, ErrorKind::invalid_input, "alpha must be positive");
  }
};

struct PseudorandomnessWitness {
  CoordinateSet coords;
  std::vector<std::uint32_t> assignment;
  Rational deviation;
};

struct PseudorandomnessVerdict {
  bool pseudorandom = true;
  std::optional<PseudorandomnessWitness> witness;
};

namespace detail {

/// Calls visit(subset) for every k-subset of {1..n} in lexicographic order
/// until visit returns true.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return false;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i + 1;
  while (true) {
    if (visit(CoordinateSet(c))) return true;
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i) --i;
    if (i == 0) return false;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

inline std::uint64_t floor_to_u64(const Rational& q) {
  const BigInt f = boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
  if (f < 0) return 0;
  if (f > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(f);
}

/// A set is unchanged in density by every restriction when it is empty or full.
inline bool trivially_pseudorandom(const TensorSet& e) { return e.count() == 0 || e.count() == e.points(); }

}  // namespace detail

/// Tests every I with |I| ≤ r and every y ∈ X^I; reports the first
/// (|I|, I, y)-lexicographic restriction with |d(E_{I→y}) − d(E)| > β.
inline PseudorandomnessVerdict is_pseudorandom(const TensorSet& e, std::size_t r, const Rational& beta) {
  if (detail::trivially_pseudorandom(e)) return {};
  const std::size_t n = e.dimension();
  const std::uint64_t total = e.count();
  const PointIndex points = e.points();
  // For integer D: D > β·|X|^n  <=>  D > floor(β·|X|^n).
  const std::uint64_t threshold = detail::floor_to_u64(beta * Rational(BigInt(points)));

  PseudorandomnessVerdict verdict;
  for (std::size_t k = 1; k <= std::min(r, n) && verdict.pseudorandom; ++k) {
    const PointIndex scale = ipow(e.alphabet(), k);
    detail::for_each_subset(n, k, [&](const CoordinateSet& coords) {
      const auto counts = fiber_counts(e, coords);
      for (std::size_t y = 0; y < counts.size(); ++y) {
        const std::uint64_t scaled = counts[y] * scale;
        const std::uint64_t diff = scaled > total ? scaled - total : total - scaled;
        if (diff > threshold) {
          std::vector<std::uint32_t> assignment(k);
          std::size_t rest = y;
          for (std::size_t i = k; i-- > 0;) {
            assignment[i] = static_cast<std::uint32_t>(rest % e.alphabet());
            rest /= e.alphabet();
          }
          verdict.pseudorandom = false;
          verdict.witness = PseudorandomnessWitness{coords, std::move(assignment),
                                                    Rational(BigInt(diff), BigInt(points))};
          return true;
        }
      }
      return false;
    });
  }
  return verdict;
}

/// E_{y ∈ X^I} d(E_{I→y})²
inline Rational energy(const TensorSet& e, const CoordinateSet& coords) {
  const auto counts = fiber_counts(e, coords);
  BigInt sum = 0;
  for (auto c : counts) sum += BigInt(c) * c;
  const BigInt fiber_size = ipow(e.alphabet(), e.dimension() - coords.size());
  return Rational(sum, BigInt(counts.size()) * fiber_size * fiber_size);
}

struct BadFiber {
  PointIndex y;
  PseudorandomnessWitness witness;  // coordinates are relative to X^{I^c}
};

/// Fibers E_{I→y} that fail (r, β)-pseudorandomness inside X^{I^c}.
inline std::vector<BadFiber> bad_fibers(const TensorSet& e, const CoordinateSet& coords, std::size_t r,
                                        const Rational& beta) {
  FiberLayout layout(e.alphabet(), e.dimension(), coords);
  const auto counts = fiber_counts(e, coords);
  std::vector<BadFiber> out;
  for (PointIndex y = 0; y < layout.fixed_points(); ++y) {
    if (counts[y] == 0 || counts[y] == layout.free_points()) continue;
    auto verdict = is_pseudorandom(restrict_index(e, layout, y), r, beta);
    if (!verdict.pseudorandom) out.push_back({y, std::move(*verdict.witness)});
  }
  return out;
}

/// P_{y ∈ X^I}(E_{I→y} not (r, β)-pseudorandom)
inline Rational fiber_psr_fraction(const TensorSet& e, const CoordinateSet& coords, std::size_t r,
                                   const Rational& beta) {
  const auto bad = bad_fibers(e, coords, r, beta);
  return Rational(BigInt(bad.size()), BigInt(ipow(e.alphabet(), coords.size())));
}

struct RegularityStep {
  CoordinateSet coords;                 // I_s
  std::vector<Rational> energies;       // per input set, at I_s
  std::vector<Rational> bad_fractions;  // per input set, at I_s
  std::optional<std::size_t> trigger;   // 0-based set whose fiber bound failed
  bool forced = false;                  // first iteration, run regardless of the bounds
  CoordinateSet added;                  // I_{s+1} \ I_s
};

struct DecompositionResult {
  CoordinateSet coords;
  std::vector<RegularityStep> trace;
  std::vector<Rational> final_energies;
  std::vector<Rational> fiber_report;  // final bad-fiber fraction per set
  bool exhausted = false;              // every coordinate ended up in I
};

/// Refinement steps permitted by the energy-increment argument: the energy
/// sum is at most d and every triggered step adds at least |X|^{-r}·α·β².
inline Rational regularity_step_bound(std::uint32_t alphabet, std::size_t d, const RegularityParams& params) {
  return Rational(BigInt(std::max<std::size_t>(d, 2))) * Rational(BigInt(ipow(alphabet, params.r))) /
         (params.alpha * params.beta * params.beta);
}

/// Simultaneous energy-increment decomposition of E_1..E_d.
///
/// Starting from I = ∅, while some set has a bad-fiber fraction above α, every
/// bad fiber of the first such set contributes the coordinates of its first
/// violating restriction to I. The first iteration always refines, so I is
/// never empty; if nothing is violated then it adds the smallest coordinate.
inline DecompositionResult decompose(std::span<const TensorSet> sets, const RegularityParams& params) {
  params.validate();
  require(!sets.empty(), ErrorKind::shape, "decompose needs at least one set");
  const std::size_t n = sets[0].dimension();
  for (const auto& s : sets)
    require(s.same_shape(sets[0]), ErrorKind::shape, "all sets must share alphabet and dimension");
  require(n >= 1, ErrorKind::shape, "decompose needs n >= 1");

  const Rational bound = regularity_step_bound(sets[0].alphabet(), sets.size(), params);
  DecompositionResult result;
  CoordinateSet current;
  std::size_t triggered_steps = 0;

  while (true) {
    RegularityStep step;
    step.coords = current;
    std::vector<std::vector<BadFiber>> bad(sets.size());
    for (std::size_t j = 0; j < sets.size(); ++j) {
      step.energies.push_back(energy(sets[j], current));
      bad[j] = bad_fibers(sets[j], current, params.r, params.beta);
      step.bad_fractions.push_back(Rational(BigInt(bad[j].size()), BigInt(ipow(sets[j].alphabet(), current.size()))));
    }
    for (std::size_t j = 0; j < sets.size() && !step.trigger; ++j)
      if (step.bad_fractions[j] > params.alpha) step.trigger = j;

    const bool first = result.trace.empty();
    if ((!step.trigger && !first) || current.size() == n) {
      result.final_energies = step.energies;
      result.fiber_report = step.bad_fractions;
      break;
    }
    step.forced = first;

    std::vector<std::size_t> added;
    if (step.trigger) {
      FiberLayout layout(sets[0].alphabet(), n, current);
      const auto& free = layout.free().elements();
      for (const auto& fiber : bad[*step.trigger])
        for (auto c : fiber.witness.coords.elements()) added.push_back(free[c - 1]);
      std::sort(added.begin(), added.end());
      added.erase(std::unique(added.begin(), added.end()), added.end());
      if (!first) ++triggered_steps;
    } else {
      added.push_back(current.complement(n).elements().front());
    }
    step.added = CoordinateSet(added);
    current = current.unite(step.added);
    result.trace.push_back(std::move(step));

    if (Rational(BigInt(triggered_steps)) > bound)
      fail(ErrorKind::invariant_violation, "regularity iteration exceeded its step bound");
  }
  result.coords = current;
  result.exhausted = current.size() == n;
  return result;
}

}  // namespace sumset_lab
