#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sumset_lab/correlation.hpp"

using namespace sumset_lab;

namespace {

JointDistribution random_full_support(std::uint32_t nu, std::uint32_t nv, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 20);
  std::vector<Rational> mass;
  Rational total = 0;
  for (std::uint32_t i = 0; i < nu * nv; ++i) {
    mass.emplace_back(w(rng));
    total += mass.back();
  }
  for (auto& m : mass) m /= total;
  return JointDistribution({nu, nv}, mass);
}

JointDistribution random_product(std::uint32_t nu, std::uint32_t nv, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 9);
  std::vector<Rational> a, b;
  Rational ta = 0, tb = 0;
  for (std::uint32_t i = 0; i < nu; ++i) ta += a.emplace_back(w(rng));
  for (std::uint32_t i = 0; i < nv; ++i) tb += b.emplace_back(w(rng));
  std::vector<Rational> mass;
  for (std::uint32_t i = 0; i < nu; ++i)
    for (std::uint32_t j = 0; j < nv; ++j) mass.push_back(a[i] * b[j] / (ta * tb));
  return JointDistribution({nu, nv}, mass);
}

double correlation_of(const JointDistribution& p, const std::vector<double>& lambda, const std::vector<double>& sigma) {
  double el = 0, es = 0, ell = 0, ess = 0, els = 0;
  const auto nv = p.sizes()[1];
  for (std::size_t c = 0; c < p.cells(); ++c) {
    const double m = to_double(p.mass()[c]);
    const double l = lambda[c / nv], s = sigma[c % nv];
    el += m * l;
    es += m * s;
    ell += m * l * l;
    ess += m * s * s;
    els += m * l * s;
  }
  return (els - el * es) / std::sqrt((ell - el * el) * (ess - es * es));
}

}  // namespace

TEST(Coupling, Z3WithTwoTargets) {
  auto g = make_group({3});
  const auto p = avoidance_coupling(g, GroupSubset::of(g, {0, 1}), 2);
  std::size_t support = 0;
  for (const auto& m : p.mass())
    if (m != 0) {
      ++support;
      EXPECT_EQ(m, Rational(1, 6));
    }
  EXPECT_EQ(support, 6u);
  for (std::size_t j = 0; j < 2; ++j)
    for (const auto& m : p.marginal(j)) EXPECT_EQ(m, Rational(1, 3));
}

TEST(Coupling, MarginalsAreUniformForAllSmallGroups) {
  for (const auto& orders : oracle::all_group_shapes(6)) {
    auto g = make_group(orders);
    for (std::size_t d = 2; d <= 3; ++d) {
      const auto p = avoidance_coupling(g, GroupSubset::of(g, {0}), d);
      for (std::size_t j = 0; j < d; ++j)
        for (const auto& m : p.marginal(j)) ASSERT_EQ(m, Rational(BigInt(1), BigInt(g.order())));
    }
  }
}

TEST(Distribution, Validation) {
  EXPECT_THROW(JointDistribution({2, 2}, {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(0)}), Error);
  EXPECT_THROW(JointDistribution({2, 2}, {Rational(1), Rational(0)}), Error);
  EXPECT_THROW(JointDistribution({2, 2}, {Rational(3, 2), Rational(-1, 2), Rational(0), Rational(0)}), Error);
}

TEST(Rho, KnownValues) {
  auto z2 = make_group({2});
  EXPECT_NEAR(rho(avoidance_coupling(z2, GroupSubset::full(z2), 2)).value, 0.0, 1e-12);
  EXPECT_NEAR(rho(avoidance_coupling(z2, GroupSubset::of(z2, {0}), 3)).value, 1.0, 1e-12);
  auto z4 = make_group({4});
  EXPECT_NEAR(rho(avoidance_coupling(z4, GroupSubset::of(z4, {0, 2}), 2)).value, 1.0, 1e-12);
  auto z3 = make_group({3});
  const auto w = rho(avoidance_coupling(z3, GroupSubset::of(z3, {0, 1}), 3));
  EXPECT_NEAR(w.value, oracle::fourier_rho(z3, {0, 1}), 1e-12);
  EXPECT_LT(w.index, 3u);
}

// For d = 2 the spectral value equals the largest non-trivial Fourier
// coefficient of the uniform measure on Z0.
TEST(Rho, MatchesCharacterOracle) {
  for (const auto& orders : oracle::all_group_shapes(8)) {
    auto g = make_group(orders);
    for (std::uint32_t mask = 1; mask < (1u << g.order()); ++mask) {
      GroupSubset z0(g);
      for (Element e = 0; e < g.order(); ++e)
        if (mask >> e & 1) z0.insert(e);
      const double value = rho(avoidance_coupling(g, z0, 2)).value;
      ASSERT_NEAR(value, oracle::fourier_rho(g, z0.elements()), 1e-9) << g.describe() << " " << z0.describe();
    }
  }
}

// Splitting U_1 off the rest reduces to the d = 2 coupling of U_1 and U_2 + ... + U_d.
TEST(Rho, HigherArityReducesToPair) {
  for (const auto& orders : oracle::all_group_shapes(5)) {
    auto g = make_group(orders);
    for (std::uint32_t mask = 1; mask < (1u << g.order()); ++mask) {
      GroupSubset z0(g);
      for (Element e = 0; e < g.order(); ++e)
        if (mask >> e & 1) z0.insert(e);
      ASSERT_NEAR(rho(avoidance_coupling(g, z0, 3)).value, oracle::fourier_rho(g, z0.elements()), 1e-9);
    }
  }
}

TEST(Rho, WitnessAchievesTheValue) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_full_support(2 + trial % 4, 2 + (trial / 4) % 4, rng);
    const auto w = maximal_correlation_pair(p);
    ASSERT_NEAR(correlation_of(p, w.lambda, w.sigma), w.value, 1e-9);
  }
}

TEST(Rho, SpectralAgreesWithAlternatingExpectations) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_full_support(2 + trial % 4, 2 + (trial / 4) % 4, rng);
    ASSERT_NEAR(maximal_correlation_pair(p).value, ace_correlation(p, 7), 1e-6);
  }
}

TEST(Rho, ProductDistributionsAreUncorrelated) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_product(2 + trial % 4, 2 + (trial / 4) % 4, rng);
    ASSERT_LE(maximal_correlation_pair(p).value, 1e-9);
  }
}

TEST(RhoOne, SupportComponents) {
  auto z4 = make_group({4});
  const auto v = is_rho_one(avoidance_coupling(z4, GroupSubset::of(z4, {0, 2}), 2));
  ASSERT_TRUE(v.rho_one);
  EXPECT_EQ(v.components, 2u);
  // λ(U) = σ(V) on the support and λ is not constant
  const auto p = avoidance_coupling(z4, GroupSubset::of(z4, {0, 2}), 2);
  for (std::size_t c = 0; c < p.cells(); ++c)
    if (p.mass()[c] != 0) EXPECT_EQ(v.lambda[c / 4], v.sigma[c % 4]);
  EXPECT_NE(*std::min_element(v.lambda.begin(), v.lambda.end()), *std::max_element(v.lambda.begin(), v.lambda.end()));

  auto z3 = make_group({3});
  EXPECT_FALSE(is_rho_one(avoidance_coupling(z3, GroupSubset::of(z3, {0, 1}), 2)).rho_one);
}

TEST(RhoOne, EquivalentToStrictCoset) {
  for (const auto& orders : oracle::all_group_shapes(8)) {
    auto g = make_group(orders);
    for (std::uint32_t mask = 1; mask < (1u << g.order()); ++mask) {
      GroupSubset z0(g);
      for (Element e = 0; e < g.order(); ++e)
        if (mask >> e & 1) z0.insert(e);
      const auto p = avoidance_coupling(g, z0, 2);
      const bool coset = oracle::brute_in_strict_coset(g, z0.elements());
      ASSERT_EQ(is_rho_one(p).rho_one, coset);
      ASSERT_NEAR(rho(p).value, coset ? 1.0 : rho(p).value, 1e-9);
      if (!coset) ASSERT_LT(rho(p).value, 1.0 - 1e-9);
    }
  }
}

TEST(Conditional, FixingThirdCoordinateTranslatesZ0) {
  auto z3 = make_group({3});
  const auto p = avoidance_coupling(z3, GroupSubset::of(z3, {0, 1}), 3);
  const std::vector<std::uint32_t> fixed{1};
  const auto c = conditional_pair(p, fixed);
  const auto expected = avoidance_coupling(z3, GroupSubset::of(z3, {2, 0}), 2);
  EXPECT_EQ(c.mass(), expected.mass());
}

TEST(Conditional, ZeroMassEventIsRejected) {
  std::vector<Rational> mass(8, Rational(0));
  mass[0] = 1;  // all mass at (0,0,0)
  const JointDistribution p({2, 2, 2}, mass);
  const std::vector<std::uint32_t> fixed{1};
  try {
    conditional_pair(p, fixed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_conditioning);
  }
}
