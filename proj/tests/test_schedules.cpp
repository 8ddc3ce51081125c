#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "contractix/schedules.hpp"

using namespace contractix;

TEST(EventSchedule, Validation) {
  EXPECT_THROW(EventSchedule({1, 1}, {0.5, 0.5}), OutOfRangeError);
  EXPECT_THROW(EventSchedule({2, 1}, {0.5, 0.5}), OutOfRangeError);
  EXPECT_THROW(EventSchedule({0}, {0.5}), OutOfRangeError);
  EXPECT_THROW(EventSchedule({1, 2}, {0.5}), InvalidFactorError);
  EXPECT_THROW(EventSchedule({1}, {1.5}), InvalidFactorError);
  EXPECT_THROW(EventSchedule({1}, {-0.1}), InvalidFactorError);
  EXPECT_THROW(EventSchedule({1, 5}, {0.5, 0.5}, 3), OutOfRangeError);
  EXPECT_NO_THROW(EventSchedule({7, 10}, {0.5, 0.5}, 3));  // n_1 itself is not bounded by M
  EXPECT_NO_THROW(EventSchedule({2, 4}, {0.0, 0.0}, 2));
}

TEST(CanonicalSchedule, Examples) {
  const auto s = canonical_schedule(2, 0.5, 3);
  EXPECT_EQ(s.events(), (std::vector<std::size_t>{2, 4, 6}));
  EXPECT_EQ(s.factors(), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(s.gap_bound(), 2u);

  const auto one = canonical_schedule(1, 0.9, 1);
  EXPECT_EQ(one.events(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(one.gap_bound(), 1u);

  const auto zero = canonical_schedule(2, 0.0, 2);
  EXPECT_EQ(zero.factors(), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(cumulative_factors(zero), (std::vector<double>{0.0, 0.0}));

  EXPECT_THROW(canonical_schedule(2, 1.0, 3), InvalidFactorError);
}

TEST(CumulativeFactors, Examples) {
  EXPECT_EQ(cumulative_factors(EventSchedule({1, 2, 3}, {0.5, 0.5, 0.5})), (std::vector<double>{0.5, 0.25, 0.125}));
  EXPECT_EQ(cumulative_factors(EventSchedule({1, 2, 3}, {1, 1, 0.3})), (std::vector<double>{1, 1, 0.3}));
}

TEST(CumulativeFactors, TelescopingInverseSquare) {
  std::vector<std::size_t> events;
  std::vector<double> factors;
  for (int k = 2; k <= 11; ++k) {
    events.push_back(k);
    factors.push_back(1.0 - 1.0 / (k * k));
  }
  const auto lam = cumulative_factors(EventSchedule(events, factors));
  // oracle 1: telescoping identity (n+1)/(2n) at n = 11
  EXPECT_NEAR(lam.back(), 6.0 / 11.0, 1e-12);
  // oracle 2: plain product loop
  double direct = 1.0;
  for (int k = 2; k <= 11; ++k) direct *= 1.0 - 1.0 / (k * k);
  EXPECT_NEAR(lam.back(), direct, 1e-15);
}

TEST(CumulativeFactors, ConstantFactorsArePowers) {
  for (double l : {0.3, 0.5, 0.9, 0.99}) {
    const auto lam = cumulative_factors(canonical_schedule(1, l, 60));
    for (std::size_t k = 1; k <= 60; ++k) EXPECT_NEAR(lam[k - 1], std::pow(l, k), 1e-13);
  }
}

TEST(LogSum, Examples) {
  EXPECT_NEAR(log_sum(EventSchedule({1, 2}, {0.5, 0.5})), 2 * std::log(2.0), 1e-15);
  EXPECT_EQ(log_sum(EventSchedule({1, 2, 3}, {1, 1, 1})), 0.0);
  const EventSchedule e({1, 2}, {std::exp(-1.0), std::exp(-2.0)});
  EXPECT_NEAR(log_sum(e), 3.0, 1e-14);
  EXPECT_NEAR(cumulative_factors(e).back(), std::exp(-3.0), 1e-15);
  EXPECT_EQ(log_sum(canonical_schedule(2, 0.0, 2)), std::numeric_limits<double>::infinity());
}

TEST(LogSum, ProductSumEquivalenceOnRandomSequences) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t K = 1 + gen() % 80;
    std::vector<std::size_t> ev(K);
    std::vector<double> fa(K);
    for (std::size_t k = 0; k < K; ++k) ev[k] = k + 1, fa[k] = u(gen);
    const EventSchedule s(ev, fa);
    const auto lam = cumulative_factors(s);
    EXPECT_NEAR(lam.back(), std::exp(-log_sum(s)), 1e-12);
    for (std::size_t k = 1; k < K; ++k) EXPECT_LE(lam[k], lam[k - 1]);
  }
}

TEST(RateBoundBoundedGap, Examples) {
  EXPECT_EQ(rate_bound_bounded_gap(10, 2, 2, 0.5).bound_factor, 0.03125);
  EXPECT_EQ(rate_bound_bounded_gap(4, 4, 3, 0.7).bound_factor, 0.7);
  EXPECT_EQ(rate_bound_bounded_gap(7, 2, 3, 0.9).bound_factor, 0.9 * 0.9);
  EXPECT_NEAR(rate_bound_bounded_gap(7, 2, 3, 0.9).bound_factor, 0.81, 1e-15);
  EXPECT_THROW(rate_bound_bounded_gap(1, 2, 2, 0.5), OutOfRangeError);
  EXPECT_EQ(rate_bound_bounded_gap(10, 2, 2, 0.5).rule, RateBound::Rule::BoundedGap);
}

TEST(RateBoundBoundedGap, NonincreasingWithDropsAtGapMultiples) {
  for (std::size_t n1 : {1u, 2u, 5u}) {
    for (std::size_t M : {1u, 2u, 3u}) {
      const double l = 0.8;
      double prev = rate_bound_bounded_gap(n1, n1, M, l).bound_factor;
      for (std::size_t n = n1 + 1; n < n1 + 40; ++n) {
        const double cur = rate_bound_bounded_gap(n, n1, M, l).bound_factor;
        if ((n - n1) % M == 0) EXPECT_NEAR(cur, prev * l, 1e-15);
        else EXPECT_EQ(cur, prev);
        prev = cur;
      }
    }
  }
}

TEST(RateBoundCanonical, Examples) {
  EXPECT_EQ(rate_bound_canonical(0, 2, 0.5).bound_factor, 1.0);
  EXPECT_EQ(rate_bound_canonical(5, 2, 0.5).bound_factor, 0.25);
  EXPECT_EQ(rate_bound_canonical(4, 2, 0.0).bound_factor, 0.0);
  EXPECT_EQ(rate_bound_canonical(1, 2, 0.0).bound_factor, 1.0);  // 0^0
}

TEST(RateBoundVlc, Examples) {
  EXPECT_EQ(rate_bound_vlc(10, canonical_schedule(2, 0.5, 5)).bound_factor, 0.03125);
  EXPECT_EQ(rate_bound_vlc(3, EventSchedule({1, 2, 3}, {1, 1, 0.3}, 1)).bound_factor, 0.3);
  EXPECT_NEAR(rate_bound_vlc(5, EventSchedule({3, 5}, {0.9, 0.8}, 2)).bound_factor, 0.72, 1e-15);
}

TEST(RateBoundVlc, Errors) {
  EXPECT_THROW(rate_bound_vlc(5, EventSchedule({1, 2}, {0.5, 0.5})), ScheduleTooShortError);
  EXPECT_THROW(rate_bound_vlc(12, canonical_schedule(2, 0.5, 5)), ScheduleTooShortError);
  EXPECT_THROW(rate_bound_vlc(1, canonical_schedule(2, 0.5, 5)), OutOfRangeError);
}

TEST(RateBoundVlc, ConstantFactorsMatchBoundedGap) {
  for (double l : {0.2, 0.5, 0.95}) {
    for (std::size_t n1 : {1u, 3u}) {
      const auto s = canonical_schedule(n1, l, 40);
      for (std::size_t n = n1; n <= 40 * n1; ++n) {
        EXPECT_EQ(rate_bound_vlc(n, s).bound_factor, rate_bound_bounded_gap(n, n1, n1, l).bound_factor);
      }
    }
  }
}

TEST(FactorGenerator, Presets) {
  EXPECT_EQ(FactorGenerator::parse("constant:0.25")(7), 0.25);
  EXPECT_EQ(FactorGenerator::parse("one_minus_inv_square")(1), 0.75);
  EXPECT_EQ(FactorGenerator::parse("one_minus_inv")(1), 0.5);
  EXPECT_EQ(FactorGenerator::parse("constant:0.25").name(), "constant:0.25");
  EXPECT_THROW(FactorGenerator::parse("constant:abc"), ParseError);
  EXPECT_THROW(FactorGenerator::parse("constant:0.5x"), ParseError);
  EXPECT_THROW(FactorGenerator::parse("harmonic"), ParseError);
}

TEST(Converges, GeometricTendsToZero) {
  const auto v = converges(EventSchedule({}, {}), FactorGenerator::constant(0.5), 100);
  EXPECT_EQ(v.kind, ConvergenceVerdict::Kind::TendsToZero);
  EXPECT_FALSE(v.log_space);
}

TEST(Converges, InverseSquareBoundedAwayNearHalf) {
  const std::size_t H = 1000000;
  const auto v = converges(EventSchedule({}, {}), FactorGenerator::one_minus_inv_square(), H);
  // oracle: direct partial-product loop over k = 2 .. H+1
  double direct = 1.0;
  for (std::size_t k = 2; k <= H + 1; ++k) direct *= 1.0 - 1.0 / (double(k) * double(k));
  EXPECT_NEAR(direct, (H + 2.0) / (2.0 * (H + 1.0)), 1e-9);
  EXPECT_EQ(v.kind, ConvergenceVerdict::Kind::BoundedAway);
  EXPECT_NEAR(v.limit_estimate, 0.5, 1e-5);
  EXPECT_NEAR(v.limit_estimate, direct, 1e-9);
  EXPECT_TRUE(v.log_space);
}

TEST(Converges, InverseTendsToZero) {
  const std::size_t H = 1000000;
  const auto v = converges(EventSchedule({}, {}), FactorGenerator::one_minus_inv(), H);
  EXPECT_EQ(v.kind, ConvergenceVerdict::Kind::TendsToZero);
  // oracle: telescoping partial product 1/(H+1)
  EXPECT_NEAR(v.limit_estimate * (H + 1.0), 1.0, 1e-6);
}

TEST(Converges, LogAndPlainProductsAgree) {
  for (const auto& gen : {FactorGenerator::one_minus_inv_square(), FactorGenerator::one_minus_inv(),
                          FactorGenerator::constant(0.9999)}) {
    const auto v = converges(EventSchedule({}, {}), gen, 50000);
    ASSERT_GT(v.direct_product, 0.0);
    EXPECT_NEAR(v.limit_estimate / v.direct_product, 1.0, 1e-9) << gen.name();
  }
}

TEST(Converges, StoredPrefixAndThresholds) {
  const auto zero = converges(canonical_schedule(2, 0.0, 3), FactorGenerator::one_minus_inv_square(), 10);
  EXPECT_EQ(zero.kind, ConvergenceVerdict::Kind::TendsToZero);
  EXPECT_EQ(zero.limit_estimate, 0.0);
  EXPECT_EQ(zero.zero_cutoff, 1e-9);
  EXPECT_EQ(zero.bounded_floor, 1e-6);

  const auto ones = converges(EventSchedule({1, 2}, {1, 1}), FactorGenerator::constant(1.0), 1000);
  EXPECT_EQ(ones.kind, ConvergenceVerdict::Kind::BoundedAway);
  EXPECT_EQ(ones.limit_estimate, 1.0);
}

TEST(Converges, Errors) {
  EXPECT_THROW(converges(EventSchedule({}, {}), FactorGenerator::constant(1.5), 10), InvalidFactorError);
  EXPECT_THROW(converges(EventSchedule({}, {}), FactorGenerator::constant(0.0), 10), InvalidFactorError);
  EXPECT_THROW(converges(canonical_schedule(1, 0.5, 5), FactorGenerator::constant(0.5), 3), OutOfRangeError);
}
