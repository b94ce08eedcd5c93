#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sumset_lab/certificate_json.hpp"
#include "sumset_lab/structure.hpp"

using namespace sumset_lab;

namespace {

TensorSet first_is(std::uint32_t q, std::size_t n, std::uint32_t v) {
  return TensorSet::from_predicate(q, n, [v](std::span<const std::uint32_t> x) { return x[0] == v; });
}

StructureParams default_params() {
  StructureParams p;
  p.epsilon = Rational(1, 10);
  p.r = 1;
  p.beta = Rational(1, 10);
  return p;
}

struct Worked {
  FiniteAbelianGroup g = make_group({3});
  GroupSubset z0 = GroupSubset::of(g, {0, 1});
  std::vector<TensorSet> sets{first_is(3, 2, 2), first_is(3, 2, 0)};
};

const char* kWorkedGolden = R"({
  "I": [
    1
  ],
  "primes": [
    "alphabet 3\nn 1\nhexbits\n4\n",
    "alphabet 3\nn 1\nhexbits\n1\n"
  ],
  "error_masses": [
    "0/1",
    "0/1"
  ],
  "avoidance_on_I": true,
  "sparse_branch": false,
  "params": {
    "epsilon": "1/10",
    "r": 1,
    "beta": "1/10",
    "alpha": "1/20"
  }
})";

}  // namespace

TEST(Extract, WorkedZ3Example) {
  Worked w;
  const auto cert = extract_structure(w.g, w.z0, w.sets, default_params());
  EXPECT_FALSE(cert.sparse_branch);
  EXPECT_EQ(cert.coords.elements(), (std::vector<std::size_t>{1}));
  ASSERT_EQ(cert.primes.size(), 2u);
  EXPECT_EQ(cert.primes[0].bits().indices(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(cert.primes[1].bits().indices(), (std::vector<std::size_t>{0}));
  EXPECT_EQ(cert.error_masses, (std::vector<Rational>{Rational(0), Rational(0)}));
  EXPECT_TRUE(cert.avoidance_on_I);

  const auto report = verify_certificate(w.g, w.z0, w.sets, cert, Rational(1, 10));
  EXPECT_TRUE(report.passed);
  EXPECT_TRUE(report.consistent);
}

TEST(Extract, CertificateJsonGolden) {
  Worked w;
  const auto cert = extract_structure(w.g, w.z0, w.sets, default_params());
  EXPECT_EQ(certificate_to_json(cert).dump(2), kWorkedGolden);
  const auto back = certificate_from_json(Json::parse(kWorkedGolden));
  EXPECT_EQ(certificate_to_json(back).dump(2), kWorkedGolden);
  EXPECT_EQ(back.primes, cert.primes);
}

TEST(Extract, CertificateJsonRejectsMissingFields) {
  auto j = Json::parse(kWorkedGolden);
  j.erase("primes");
  EXPECT_THROW(certificate_from_json(j), Error);
}

TEST(Extract, EmptySetTakesSparseBranch) {
  Worked w;
  w.sets[0] = TensorSet(3, 2);
  const auto cert = extract_structure(w.g, w.z0, w.sets, default_params());
  EXPECT_TRUE(cert.sparse_branch);
  EXPECT_EQ(cert.coords.elements(), (std::vector<std::size_t>{1}));
  EXPECT_TRUE(cert.primes[0].empty());
  EXPECT_EQ(cert.primes[1].count(), 3u);
  EXPECT_EQ(cert.error_masses[0], Rational(0));
  EXPECT_TRUE(cert.avoidance_on_I);
}

TEST(Extract, SparseBranchPicksFirstSparseSet) {
  auto g = make_group({2});
  std::vector<TensorSet> sets{TensorSet::full(2, 4), TensorSet(2, 4), TensorSet(2, 4)};
  sets[1].insert(3);
  sets[2].insert(5);
  auto params = default_params();
  const auto cert = extract_structure(g, GroupSubset::of(g, {0}), sets, params);
  ASSERT_TRUE(cert.sparse_branch);
  EXPECT_TRUE(cert.primes[1].empty());
  EXPECT_EQ(cert.primes[2].count(), 2u);
  EXPECT_EQ(cert.error_masses[1], Rational(1, 16));
  EXPECT_LE(cert.error_masses[1], params.epsilon);
  EXPECT_TRUE(verify_certificate(g, GroupSubset::of(g, {0}), sets, cert, params.epsilon).passed);
}

TEST(Verify, TamperedCertificateFails) {
  Worked w;
  auto cert = extract_structure(w.g, w.z0, w.sets, default_params());
  cert.primes[0] = TensorSet::full(3, 1);
  const auto report = verify_certificate(w.g, w.z0, w.sets, cert, Rational(1, 10));
  EXPECT_FALSE(report.avoidance);
  EXPECT_FALSE(report.passed);
  EXPECT_FALSE(report.consistent);
}

TEST(Verify, EpsilonOneMakesMassesTrivial) {
  Worked w;
  StructureCertificate cert;
  cert.coords = CoordinateSet{1};
  cert.primes = {TensorSet(3, 1), TensorSet(3, 1)};
  const auto report = verify_certificate(w.g, w.z0, w.sets, cert, Rational(1));
  EXPECT_EQ(report.error_mass_ok, (std::vector<bool>{true, true}));
  EXPECT_TRUE(report.passed);
}

TEST(Verify, WrongShapesAreReportedNotThrown) {
  Worked w;
  StructureCertificate cert;
  cert.coords = CoordinateSet{3};
  cert.primes = {TensorSet(3, 1), TensorSet(3, 1)};
  EXPECT_FALSE(verify_certificate(w.g, w.z0, w.sets, cert, Rational(1)).passed);
}

TEST(Extract, RejectsBadParameters) {
  Worked w;
  auto p = default_params();
  p.epsilon = Rational(3, 2);
  EXPECT_THROW(extract_structure(w.g, w.z0, w.sets, p), Error);
  p = default_params();
  p.alpha = Rational(0);
  EXPECT_THROW(extract_structure(w.g, w.z0, w.sets, p), Error);
  EXPECT_THROW(extract_structure(w.g, GroupSubset(w.g), w.sets, default_params()), Error);
}

// Recorded fields always match an independent recomputation.
TEST(Extract, SelfConsistentOnRandomInputs) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = make_group({trial % 2 ? 2u : 3u});
    const std::size_t n = g.order() == 2 ? 4 : 3;
    std::vector<TensorSet> sets;
    for (int k = 0; k < 2; ++k) sets.push_back(oracle::random_tensor_set(g.order(), n, 0.5, rng));
    const auto z0 = GroupSubset::of(g, {0});
    const auto cert = extract_structure(g, z0, sets, default_params());
    const auto report = verify_certificate(g, z0, sets, cert, Rational(1, 10));
    ASSERT_TRUE(report.consistent);
    for (std::size_t j = 0; j < sets.size(); ++j) {
      // the mass is |E_j minus the cylinder| / |G|^n, recomputed by scanning points
      const auto cyl = cylinder(cert.primes[j], cert.coords, n);
      std::uint64_t missing = 0;
      for (PointIndex p = 0; p < sets[j].points(); ++p) missing += sets[j].contains(p) && !cyl.contains(p);
      ASSERT_EQ(cert.error_masses[j], Rational(BigInt(missing), BigInt(sets[j].points())));
    }
  }
}

TEST(Replay, GlobalAvoidanceNeverShowsACompletion) {
  std::mt19937_64 rng(52);
  auto g = make_group({3});
  const auto z0 = GroupSubset::of(g, {0, 1});
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 20; ++trial) {
    std::vector<TensorSet> sets{oracle::random_tensor_set(3, 3, 0.5, rng), oracle::random_tensor_set(3, 3, 0.5, rng)};
    const auto cert = extract_structure(g, z0, sets, default_params());
    const auto replay = locate_contradiction(g, z0, sets, cert);
    if (!replay) continue;
    ++checked;
    ASSERT_EQ(cert.avoidance_on_I, false);
    const bool global = oracle::brute_count(g, sets, z0.elements()) == 0;
    if (global) ASSERT_EQ(replay->fiber_ratio, Rational(0));
    ASSERT_EQ(replay->global_violation, replay->fiber_ratio > 0);
    if (replay->global_violation) ASSERT_FALSE(global);
    for (std::size_t j = 0; j < sets.size(); ++j) ASSERT_TRUE(cert.primes[j].contains(replay->kept[j]));
  }
  EXPECT_GT(checked, 0);
}

TEST(Replay, NothingToLocateWhenKeptFibersAvoid) {
  Worked w;
  const auto cert = extract_structure(w.g, w.z0, w.sets, default_params());
  EXPECT_FALSE(locate_contradiction(w.g, w.z0, w.sets, cert).has_value());
}

TEST(CountRatio, TrivialCases) {
  auto g = make_group({3});
  const auto z0 = GroupSubset::of(g, {0, 1});
  const std::vector<TensorSet> full{TensorSet::full(3, 2), TensorSet::full(3, 2)};
  EXPECT_EQ(empirical_count_ratio(g, z0, full), Rational(1));
  const std::vector<TensorSet> with_empty{TensorSet::full(3, 2), TensorSet(3, 2)};
  EXPECT_EQ(empirical_count_ratio(g, z0, with_empty), Rational(0));
}

// Dense pseudorandom pairs over Z_3^3 always have a pair summing into {0,1}^3.
TEST(CountRatio, DensePseudorandomPairsHit) {
  std::mt19937_64 rng(53);
  auto g = make_group({3});
  const auto z0 = GroupSubset::of(g, {0, 1});
  int found = 0;
  for (int trial = 0; trial < 400 && found < 25; ++trial) {
    const auto e = oracle::random_tensor_set(3, 3, 0.65, rng);
    const auto f = oracle::random_tensor_set(3, 3, 0.65, rng);
    if (density(e) < Rational(1, 2) || density(f) < Rational(1, 2)) continue;
    if (!is_pseudorandom(e, 1, Rational(1, 5)).pseudorandom || !is_pseudorandom(f, 1, Rational(1, 5)).pseudorandom)
      continue;
    ++found;
    const std::vector<TensorSet> sets{e, f};
    const auto ratio = empirical_count_ratio(g, z0, sets);
    ASSERT_GT(ratio, 0);
    ASSERT_EQ(ratio, Rational(BigInt(oracle::brute_count(g, sets, z0.elements())), BigInt(8 * 27)));
  }
  EXPECT_GT(found, 0);
}
