#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sumset_lab/regularity.hpp"

using namespace sumset_lab;

namespace {

TensorSet first_is_zero(std::uint32_t q, std::size_t n) {
  return TensorSet::from_predicate(q, n, [](std::span<const std::uint32_t> x) { return x[0] == 0; });
}

std::vector<std::size_t> random_coords(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> c;
  for (std::size_t i = 1; i <= n; ++i)
    if (rng() % 2) c.push_back(i);
  return c;
}

}  // namespace

TEST(Pseudorandom, HalfSquareHasWitnessOnFirstCoordinate) {
  const auto e = first_is_zero(2, 2);
  const auto v = is_pseudorandom(e, 1, Rational(2, 5));
  ASSERT_FALSE(v.pseudorandom);
  EXPECT_EQ(v.witness->coords.elements(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(v.witness->assignment, (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(v.witness->deviation, Rational(1, 2));
}

TEST(Pseudorandom, ThresholdIsInclusive) {
  const auto e = first_is_zero(2, 2);
  EXPECT_TRUE(is_pseudorandom(e, 1, Rational(1, 2)).pseudorandom);
  EXPECT_FALSE(is_pseudorandom(e, 1, Rational(49, 100)).pseudorandom);
}

TEST(Pseudorandom, EmptyAndFullSets) {
  EXPECT_TRUE(is_pseudorandom(TensorSet(3, 3), 2, Rational(1, 100)).pseudorandom);
  EXPECT_TRUE(is_pseudorandom(TensorSet::full(3, 3), 2, Rational(1, 100)).pseudorandom);
}

TEST(Pseudorandom, AgreesWithScanningOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const std::uint32_t q = 2 + trial % 2;
    const std::size_t n = 2 + trial % 3;
    const std::size_t r = 1 + trial % 2;
    const Rational beta(1 + trial % 5, 10);
    const auto e = oracle::random_tensor_set(q, n, 0.2 + 0.6 * (trial % 4) / 3.0, rng);
    const auto v = is_pseudorandom(e, r, beta);
    ASSERT_EQ(v.pseudorandom, oracle::max_deviation(e, r) <= beta);
    if (!v.pseudorandom) {
      Rational dev = oracle::fiber_density(e, v.witness->coords.elements(), v.witness->assignment) - density(e);
      if (dev < 0) dev = -dev;
      ASSERT_EQ(dev, v.witness->deviation);
      ASSERT_GT(dev, beta);
      ASSERT_LE(v.witness->coords.size(), r);
    }
  }
}

TEST(Energy, HalfSquare) {
  const auto e = first_is_zero(2, 2);
  EXPECT_EQ(energy(e, CoordinateSet{1}), Rational(1, 2));
  EXPECT_EQ(energy(e, CoordinateSet{}), Rational(1, 4));
  EXPECT_EQ(energy(e, CoordinateSet{2}), Rational(1, 4));
}

TEST(Energy, MatchesOracleAndGrowsUnderRefinement) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t q = 2 + trial % 3;
    const std::size_t n = 1 + trial % 4;
    const auto e = oracle::random_tensor_set(q, n, 0.5, rng);
    const auto small = random_coords(n, rng);
    auto big = small;
    for (auto c : random_coords(n, rng))
      if (std::find(big.begin(), big.end(), c) == big.end()) big.push_back(c);
    std::sort(big.begin(), big.end());
    const auto e_small = energy(e, CoordinateSet(small));
    ASSERT_EQ(e_small, oracle::slow_energy(e, small));
    ASSERT_LE(e_small, energy(e, CoordinateSet(big)));
    ASSERT_GE(e_small, density(e) * density(e));
    ASSERT_LE(energy(e, CoordinateSet::all(n)), density(e));
  }
}

TEST(BadFibers, HalfSquareFibersAreConstant) {
  EXPECT_EQ(fiber_psr_fraction(first_is_zero(2, 2), CoordinateSet{1}, 1, Rational(2, 5)), Rational(0));
}

TEST(BadFibers, FractionMatchesOracle) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint32_t q = 2 + trial % 2;
    const std::size_t n = 3 + trial % 2;
    const auto e = oracle::random_tensor_set(q, n, 0.5, rng);
    auto coords = random_coords(n - 1, rng);
    const Rational beta(1, 5 + trial % 5);
    ASSERT_EQ(fiber_psr_fraction(e, CoordinateSet(coords), 1, beta), oracle::bad_fiber_fraction(e, coords, 1, beta));
  }
}

TEST(Decompose, HalfCubeAndFullCube) {
  const std::vector<TensorSet> sets{first_is_zero(2, 3), TensorSet::full(2, 3)};
  const auto result = decompose(sets, {1, Rational(1, 10), Rational(1, 10)});
  EXPECT_EQ(result.coords.elements(), (std::vector<std::size_t>{1}));
  ASSERT_EQ(result.trace.size(), 1u);
  EXPECT_TRUE(result.trace[0].forced);
  EXPECT_EQ(result.trace[0].trigger, std::optional<std::size_t>(0));
  EXPECT_EQ(result.final_energies, (std::vector<Rational>{Rational(1, 2), Rational(1)}));
  EXPECT_FALSE(result.exhausted);
}

TEST(Decompose, PseudorandomInputsStillRefineOnce) {
  const std::vector<TensorSet> sets{TensorSet::full(2, 3), TensorSet(2, 3)};
  const auto result = decompose(sets, {1, Rational(1, 10), Rational(1, 10)});
  EXPECT_EQ(result.coords.elements(), (std::vector<std::size_t>{1}));
  EXPECT_TRUE(result.trace[0].forced);
  EXPECT_FALSE(result.trace[0].trigger.has_value());
}

TEST(Decompose, RejectsBadInput) {
  const std::vector<TensorSet> mixed{TensorSet(2, 3), TensorSet(2, 2)};
  EXPECT_THROW(decompose(mixed, {1, Rational(1, 10), Rational(1, 10)}), Error);
  const std::vector<TensorSet> one{TensorSet(2, 3)};
  EXPECT_THROW(decompose(one, {1, Rational(0), Rational(1, 10)}), Error);
  EXPECT_THROW(decompose(one, {1, Rational(1, 10), Rational(-1)}), Error);
}

// The loop ends with every set's bad-fiber fraction at most α (or I = [n]),
// energies never decrease, and the step count respects the increment bound.
TEST(Decompose, ContractOnRandomFamilies) {
  std::mt19937_64 rng(34);
  const RegularityParams params{1, Rational(1, 10), Rational(1, 10)};
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t q = trial % 2 ? 2 : 3;
    const std::size_t n = q == 2 ? 5 : 4;
    const std::size_t d = 2 + trial % 2;
    std::vector<TensorSet> sets;
    for (std::size_t k = 0; k < d; ++k) sets.push_back(oracle::random_tensor_set(q, n, 0.3 + 0.1 * k, rng));
    const auto result = decompose(sets, params);
    ASSERT_FALSE(result.coords.empty());
    for (std::size_t s = 1; s < result.trace.size(); ++s)
      for (std::size_t j = 0; j < d; ++j) ASSERT_LE(result.trace[s - 1].energies[j], result.trace[s].energies[j]);
    for (std::size_t j = 0; j < d; ++j) {
      const auto frac = oracle::bad_fiber_fraction(sets[j], result.coords.elements(), params.r, params.beta);
      ASSERT_EQ(frac, result.fiber_report[j]);
      if (!result.exhausted) ASSERT_LE(frac, params.alpha);
    }
    ASSERT_LE(Rational(BigInt(result.trace.size())), regularity_step_bound(q, 2, params));
  }
}
