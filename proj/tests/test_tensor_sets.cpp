#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sumset_lab/set_io.hpp"
#include "sumset_lab/tensor_set.hpp"

using namespace sumset_lab;

namespace {

TensorSet first_coordinate_is(std::uint32_t q, std::size_t n, std::uint32_t v) {
  return TensorSet::from_predicate(q, n, [v](std::span<const std::uint32_t> x) { return x[0] == v; });
}

}  // namespace

TEST(TensorSet, CoordinateOneIsMostSignificant) {
  TensorSet e(3, 2);
  const std::vector<std::uint32_t> x{2, 1};
  EXPECT_EQ(e.encode(x), 7u);
  EXPECT_EQ(e.decode(7), x);
}

TEST(TensorSet, DensityOfHalfCube) {
  EXPECT_EQ(density(first_coordinate_is(2, 3, 0)), Rational(1, 2));
  EXPECT_EQ(density(TensorSet(2, 3)), Rational(0));
  EXPECT_EQ(density(TensorSet::full(5, 2)), Rational(1));
}

TEST(TensorSet, RejectsOversizedSpaces) {
  EXPECT_THROW(TensorSet(2, 31), Error);
  EXPECT_THROW(TensorSet(1024, 4), Error);
  EXPECT_NO_THROW(TensorSet(2, 20));
}

TEST(TensorSet, InsertOutOfRange) {
  TensorSet e(2, 2);
  EXPECT_THROW(e.insert(4), Error);
}

TEST(Restrict, FixingFirstCoordinate) {
  const auto e = first_coordinate_is(2, 2, 0);
  const std::vector<std::uint32_t> y0{0}, y1{1};
  // fix coordinate 2: every fiber is {0}
  const auto f = restrict(e, CoordinateSet{2}, y0);
  EXPECT_EQ(f.dimension(), 1u);
  EXPECT_EQ(f.bits().indices(), (std::vector<std::size_t>{0}));
  EXPECT_EQ(density(f), Rational(1, 2));
  const auto full = restrict(e, CoordinateSet{1}, y0);
  EXPECT_EQ(full.count(), full.points());
  EXPECT_TRUE(restrict(e, CoordinateSet{1}, y1).empty());
}

TEST(Restrict, FullCoordinateSetGivesZeroDimensionalFiber) {
  TensorSet e(3, 2);
  e.insert(5);
  const std::vector<std::uint32_t> hit{1, 2}, miss{2, 2};
  EXPECT_EQ(restrict(e, CoordinateSet::all(2), hit).count(), 1u);
  EXPECT_EQ(restrict(e, CoordinateSet::all(2), miss).count(), 0u);
}

TEST(Restrict, RejectsBadAssignments) {
  TensorSet e(3, 2);
  const std::vector<std::uint32_t> too_big{3}, too_long{0, 0};
  EXPECT_THROW(restrict(e, CoordinateSet{1}, too_big), Error);
  EXPECT_THROW(restrict(e, CoordinateSet{1}, too_long), Error);
  const std::vector<std::uint32_t> y{0};
  EXPECT_THROW(restrict(e, CoordinateSet{3}, y), Error);
}

// Average of fiber densities over all y equals the density, exactly.
TEST(Restrict, LawOfTotalProbability) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 120; ++trial) {
    const std::uint32_t q = 2 + trial % 3;
    const std::size_t n = 1 + trial % 4;
    const auto e = oracle::random_tensor_set(q, n, 0.1 + 0.8 * (trial % 7) / 6.0, rng);
    const auto mask = static_cast<unsigned>(rng() % (1u << n));
    std::vector<std::size_t> coords;
    for (std::size_t c = 0; c < n; ++c)
      if (mask >> c & 1) coords.push_back(c + 1);
    const CoordinateSet fixed(coords);
    FiberLayout layout(q, n, fixed);
    Rational sum = 0;
    for (PointIndex y = 0; y < layout.fixed_points(); ++y) sum += density(restrict_index(e, layout, y));
    ASSERT_EQ(sum / Rational(BigInt(layout.fixed_points())), density(e));
    const auto counts = fiber_counts(e, fixed);
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    ASSERT_EQ(total, e.count());
  }
}

// Fibers agree pointwise with a direct digit-based restriction.
TEST(Restrict, MatchesPointwiseDefinition) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t q = 2 + trial % 2;
    const std::size_t n = 3;
    const auto e = oracle::random_tensor_set(q, n, 0.5, rng);
    const CoordinateSet fixed{1, 3};
    const std::vector<std::uint32_t> y{static_cast<std::uint32_t>(rng() % q), static_cast<std::uint32_t>(rng() % q)};
    const auto f = restrict(e, fixed, y);
    for (std::uint32_t free = 0; free < q; ++free) {
      const std::vector<std::uint32_t> x{y[0], free, y[1]};
      ASSERT_EQ(f.contains(free), e.contains(e.encode(x)));
    }
  }
}

TEST(Cylinder, RestrictOnBaseGivesFullFiber) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 120; ++trial) {
    const std::uint32_t q = 2 + trial % 3;
    const std::size_t n = 2 + trial % 3;
    std::vector<std::size_t> coords;
    for (std::size_t c = 1; c <= n; ++c)
      if (rng() % 2) coords.push_back(c);
    if (coords.empty()) coords.push_back(1 + rng() % n);
    const CoordinateSet fixed(coords);
    const auto base = oracle::random_tensor_set(q, fixed.size(), 0.5, rng);
    const auto cyl = cylinder(base, fixed, n);
    ASSERT_EQ(density(cyl), density(base));
    FiberLayout layout(q, n, fixed);
    for (PointIndex y = 0; y < layout.fixed_points(); ++y) {
      const auto fiber = restrict_index(cyl, layout, y);
      if (base.contains(y)) ASSERT_EQ(fiber.count(), fiber.points());
      else ASSERT_TRUE(fiber.empty());
    }
  }
}

TEST(CoordinateSets, Basics) {
  const CoordinateSet c{2, 4};
  EXPECT_EQ(c.complement(5).elements(), (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(c.unite(CoordinateSet{1, 4}).elements(), (std::vector<std::size_t>{1, 2, 4}));
  EXPECT_TRUE(c.fits(4));
  EXPECT_FALSE(c.fits(3));
  EXPECT_THROW(CoordinateSet({0}), Error);
}

TEST(Combiner, MinimumTable) {
  const auto f = CombinerTable::minimum(4);
  EXPECT_EQ(f(3, 1), 1u);
  EXPECT_EQ(f(2, 2), 2u);
  EXPECT_THROW(CombinerTable(2, 2, 2, {0, 1, 1}), Error);
}

TEST(SetFile, HexbitsLayout) {
  TensorSet e(3, 2);
  for (PointIndex i : {6, 7, 8}) e.insert(i);
  EXPECT_EQ(write_set(e, SetEncoding::hexbits), "alphabet 3\nn 2\nhexbits\n0c1\n");
  EXPECT_EQ(write_set(e, SetEncoding::indices), "alphabet 3\nn 2\nindices\n6\n7\n8\n");
}

TEST(SetFile, RoundTripsRandomSets) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t q = 2 + trial % 5;
    const std::size_t n = 1 + trial % 4;
    const auto e = oracle::random_tensor_set(q, n, (trial % 10) / 9.0, rng);
    for (auto enc : {SetEncoding::automatic, SetEncoding::indices, SetEncoding::hexbits}) {
      const auto text = write_set(e, enc);
      ASSERT_EQ(read_set(text), e);
      ASSERT_EQ(write_set(read_set(text), enc), text);
    }
  }
}

TEST(SetFile, RejectsMalformedInput) {
  EXPECT_THROW(read_set("alphabet 3\nn 0\nindices\n"), Error);
  EXPECT_THROW(read_set("alphabet 3\nn 1\nindices\n3\n"), Error);
  EXPECT_THROW(read_set("alphabet 3\nn 1\nindices\n1\n1\n"), Error);
  EXPECT_THROW(read_set("alphabet 3\nn 1\nhexbits\n8\n"), Error);  // padding bit
  EXPECT_THROW(read_set("alphabet 3\nn 1\nhexbits\n10\n"), Error); // length
  EXPECT_THROW(read_set("alphabet 3\nn 1\nhexbits\ng\n"), Error);
  EXPECT_THROW(read_set("alphabet 3\nn 1\nwhatever\n"), Error);
  EXPECT_THROW(read_set("n 1\nalphabet 3\nindices\n"), Error);
  try {
    read_set("alphabet 3\nn 1\nindices\n-1\n");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(Rationals, ParseAndFormat) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(format_rational(Rational(0)), "0/1");
  EXPECT_EQ(format_rational(Rational(6, 8)), "3/4");
  for (const char* bad : {"", "1/0", "a", "1.2.3", "/3", "."}) EXPECT_THROW(parse_rational(bad), Error) << bad;
}

TEST(Rationals, LeadingZerosAreDecimal) {
  EXPECT_EQ(parse_rational("010/08"), Rational(5, 4));
  EXPECT_EQ(parse_rational("00.5"), Rational(1, 2));
  EXPECT_EQ(parse_rational("007"), Rational(7));
  EXPECT_EQ(parse_rational("0"), Rational(0));
}
