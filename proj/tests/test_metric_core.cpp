#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "contractix/maps.hpp"

using namespace contractix;

TEST(Metric, ScalarAbsoluteDifference) {
  EXPECT_EQ(metric(Point::scalar(3), Point::scalar(1)), 2.0);
}

TEST(Metric, VectorSupNorm) {
  EXPECT_EQ(metric(Point::vector({1, -2}), Point::vector({1, -2})), 0.0);
  EXPECT_EQ(metric(Point::vector({0, 3}), Point::vector({1, 1})), 2.0);
}

TEST(Metric, MismatchIsComparabilityError) {
  EXPECT_THROW(metric(Point::scalar(1), Point::vector({1})), ComparabilityError);
  EXPECT_THROW(metric(Point::vector({1, 2}), Point::vector({1, 2, 3})), ComparabilityError);
}

TEST(Point, RejectsNonFinite) {
  EXPECT_THROW(Point::scalar(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(Point::vector({0.0, std::numeric_limits<double>::infinity()}), DomainError);
}

TEST(Metric, TriangleSymmetryIdentityOnRandomTriples) {
  std::mt19937_64 gen(123);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> a(4), b(4), c(4);
    for (int i = 0; i < 4; ++i) a[i] = u(gen), b[i] = u(gen), c[i] = u(gen);
    const auto x = Point::vector(a), y = Point::vector(b), z = Point::vector(c);
    EXPECT_LE(metric(x, z), metric(x, y) + metric(y, z) + 1e-12);
    EXPECT_EQ(metric(x, y), metric(y, x));
    EXPECT_EQ(metric(x, x), 0.0);
    const auto s = Point::scalar(a[0]), t = Point::scalar(b[0]), r = Point::scalar(c[0]);
    EXPECT_LE(metric(s, r), metric(s, t) + metric(t, r) + 1e-12);
  }
}

TEST(Apply, PiecewiseCaseTable) {
  const auto T = MapSpec::piecewise_saturation();
  EXPECT_EQ(apply(T, Point::scalar(1.5)), Point::scalar(0.5));
  EXPECT_EQ(apply(T, Point::scalar(3)), Point::scalar(1));
  EXPECT_EQ(apply(T, Point::scalar(-3)), Point::scalar(-1));
  EXPECT_EQ(apply(T, Point::scalar(-1.25)), Point::scalar(-0.25));
  EXPECT_EQ(apply(T, Point::scalar(0.7)), Point::scalar(0));
}

TEST(Apply, PiecewiseClosedCasesAtBreakpoints) {
  const auto T = MapSpec::piecewise_saturation();
  EXPECT_EQ(apply(T, Point::scalar(1)), Point::scalar(0));
  EXPECT_EQ(apply(T, Point::scalar(-1)), Point::scalar(0));
  EXPECT_EQ(apply(T, Point::scalar(2)), Point::scalar(1));
  EXPECT_EQ(apply(T, Point::scalar(-2)), Point::scalar(-1));
}

TEST(Apply, PiecewiseSquareIsZeroEverywhere) {
  const auto T2 = MapSpec::iterate(MapSpec::piecewise_saturation(), 2);
  for (int i = -5000; i <= 5000; ++i) {
    const double x = i / 1000.0;
    ASSERT_EQ(apply(T2, Point::scalar(x)).value(), 0.0) << x;
  }
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(apply(T2, Point::scalar(u(gen))).value(), 0.0);
}

TEST(Apply, PiecewiseNonexpansiveOnSampledPairs) {
  const auto T = MapSpec::piecewise_saturation();
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 20000; ++i) {
    const auto x = Point::scalar(u(gen)), y = Point::scalar(u(gen));
    ASSERT_LE(metric(apply(T, x), apply(T, y)), metric(x, y) + 1e-12);
  }
}

TEST(Apply, CubicFlatPointAndDomain) {
  const auto T = MapSpec::cubic_mk(1.0);
  EXPECT_EQ(apply(T, Point::scalar(0.5)), Point::scalar(0.5));
  EXPECT_THROW(apply(T, Point::scalar(1.01)), DomainError);
  EXPECT_THROW(apply(T, Point::scalar(-0.01)), DomainError);
}

TEST(Apply, CubicMonotoneAndNonexpansive) {
  for (double c : {0.25, 1.0, 4.0 / 3.0}) {
    const auto T = MapSpec::cubic_mk(c);
    double prev = -1;
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      const double tx = apply(T, Point::scalar(x)).value();
      ASSERT_GT(tx, prev);
      if (i > 0) {
        ASSERT_LE(tx - prev, 1e-4 + 1e-12);
      }
      prev = tx;
    }
  }
}

TEST(MapSpec, ParameterValidation) {
  EXPECT_THROW(MapSpec::cubic_mk(0.0), DomainError);
  EXPECT_THROW(MapSpec::cubic_mk(1.34), DomainError);
  EXPECT_NO_THROW(MapSpec::cubic_mk(4.0 / 3.0));
  EXPECT_THROW(MapSpec::linear(1.1), DomainError);
  EXPECT_THROW(MapSpec::linear(-0.1), DomainError);
  EXPECT_THROW(MapSpec::coord_saturation(0), DomainError);
  EXPECT_THROW(MapSpec::iterate(MapSpec::identity(), 0), DomainError);
}

TEST(MapSpec, NestedIterateCollapses) {
  const auto base = MapSpec::linear(0.5);
  const auto nested = MapSpec::iterate(MapSpec::iterate(base, 2), 3);
  EXPECT_EQ(nested, MapSpec::iterate(base, 6));
  EXPECT_EQ(nested.get_if<maps::Iterate>()->n, 6u);
  EXPECT_EQ(apply(nested, Point::scalar(64)).value(), 1.0);
}

TEST(Apply, CoordSaturation) {
  const auto T = MapSpec::coord_saturation(3);
  EXPECT_EQ(apply(T, Point::vector({0.5, 1.5, 2.5})), Point::vector({0, 0.5, 1}));
  EXPECT_THROW(apply(T, Point::vector({0.5, 1.5})), ComparabilityError);
  EXPECT_THROW(apply(T, Point::scalar(0.5)), ComparabilityError);
  EXPECT_THROW(apply(MapSpec::piecewise_saturation(), Point::vector({1.0})), ComparabilityError);
}

TEST(Apply, CoordSaturationSquareIsZero) {
  const auto T2 = MapSpec::iterate(MapSpec::coord_saturation(8), 2);
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> c(8);
    for (auto& v : c) v = u(gen);
    ASSERT_EQ(apply(T2, Point::vector(c)), Point::zeros(8));
  }
}

TEST(KnownFixedPoint, Table) {
  EXPECT_EQ(known_fixed_point(MapSpec::piecewise_saturation()), Point::scalar(0));
  EXPECT_EQ(known_fixed_point(MapSpec::coord_saturation(4)), Point::vector({0, 0, 0, 0}));
  EXPECT_EQ(known_fixed_point(MapSpec::cubic_mk(1)), Point::scalar(0.5));
  EXPECT_EQ(known_fixed_point(MapSpec::linear(0.3)), Point::scalar(0));
  EXPECT_FALSE(known_fixed_point(MapSpec::identity()));
  EXPECT_FALSE(known_fixed_point(MapSpec::linear(1.0)));
}

TEST(KnownFixedPoint, IsFixed) {
  for (const auto& m : {MapSpec::piecewise_saturation(), MapSpec::coord_saturation(5)}) {
    const auto z = *known_fixed_point(m);
    EXPECT_EQ(apply(m, z), z);
  }
  for (double c : {0.1, 1.0, 4.0 / 3.0}) {
    const auto m = MapSpec::cubic_mk(c);
    const auto z = *known_fixed_point(m);
    EXPECT_LE(metric(apply(m, z), z), 1e-15);
  }
}

TEST(Domain, DefaultsAndValidation) {
  EXPECT_EQ(default_domain(MapSpec::piecewise_saturation()), Domain::interval(-5, 5));
  EXPECT_EQ(default_domain(MapSpec::cubic_mk(1)), Domain::interval(0, 1));
  EXPECT_EQ(default_domain(MapSpec::coord_saturation(8)), Domain::box(8, -5, 5));
  EXPECT_THROW(Domain::interval(1, 1), DomainError);
  EXPECT_THROW(require_domain_fits(MapSpec::coord_saturation(3), Domain::box(2, 0, 1)), ComparabilityError);
  EXPECT_THROW(require_domain_fits(MapSpec::identity(), Domain::box(2, 0, 1)), ComparabilityError);
}
