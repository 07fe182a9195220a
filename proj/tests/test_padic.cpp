#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "adelic/error.hpp"
#include "adelic/padic.hpp"
#include "oracles/oracles.hpp"

using namespace adelic;

TEST(PAdicArithmetic, CarryInBaseThree) {
  const PAdic s = PAdic::from_integer(3, 1) + PAdic::from_integer(3, 2);
  EXPECT_EQ(s.valuation(), 1);
  EXPECT_EQ(s.digits().front(), 1u);
  EXPECT_DOUBLE_EQ(s.abs(), 1.0 / 3.0);
}

TEST(PAdicArithmetic, AdditiveIdentity) {
  const PAdic x = PAdic::from_integer(5, 1234);
  const PAdic y = x + PAdic::zero(5);
  EXPECT_TRUE(y.congruent(x, y.absolute_precision()));
  EXPECT_EQ(y.absolute_precision(), x.absolute_precision());
}

TEST(PAdicArithmetic, UltrametricStrictDrop) {
  const PAdic s = PAdic::from_integer(2, 1) + PAdic::from_integer(2, 1);
  EXPECT_DOUBLE_EQ(s.abs(), 0.5);
}

TEST(PAdicArithmetic, PrimeMismatchThrows) {
  EXPECT_THROW(PAdic::from_integer(2, 1) + PAdic::from_integer(3, 1), ConfigError);
}

TEST(PAdicArithmetic, NegationAndSubtraction) {
  const PAdic x = PAdic::from_integer(7, 100);
  const PAdic z = x - x;
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(z.is_exact_zero());
  const PAdic m = PAdic::from_integer(7, -100);
  EXPECT_TRUE((x + m).is_zero());
  EXPECT_TRUE((-x).congruent(m, 32));
}

TEST(PAdicArithmetic, MultiplicationMatchesIntegers) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const PAdic a = PAdic::from_integer(p, 12345);
    const PAdic b = PAdic::from_integer(p, -678);
    const PAdic c = PAdic::from_integer(p, 12345LL * -678);
    const PAdic prod = a * b;
    EXPECT_TRUE(prod.congruent(c, prod.absolute_precision())) << p;
  }
}

TEST(PAdicAbs, Examples) {
  EXPECT_DOUBLE_EQ(PAdic::from_integer(3, 9).abs(), 1.0 / 9.0);
  EXPECT_EQ(PAdic::from_integer(3, 9).abs_exact(), Rational(1, 9));
  EXPECT_EQ(PAdic::zero(3).abs(), 0.0);
  EXPECT_DOUBLE_EQ(PAdic::from_integer(2, 3).abs(), 1.0);
}

TEST(PAdicAbs, MultiplicativeOnRandomProducts) {
  RngStream rng(11, 0);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 1000; ++i) {
      const int r1 = static_cast<int>(rng.uniform_below(11)) - 5;
      const int r2 = static_cast<int>(rng.uniform_below(11)) - 5;
      const PAdic a = uniform_sphere(rng, p, r1);
      const PAdic b = uniform_sphere(rng, p, r2);
      EXPECT_EQ((a * b).abs_exact(), a.abs_exact() * b.abs_exact());
    }
  }
}

TEST(PAdicCanonical, LeadingDigitNonzeroAfterOps) {
  RngStream rng(12, 0);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 2000; ++i) {
      const PAdic x = uniform_sphere(rng, p, static_cast<int>(rng.uniform_below(5)));
      const PAdic y = uniform_sphere(rng, p, static_cast<int>(rng.uniform_below(5)));
      for (const PAdic& z : {x + y, x - y, x * y}) {
        if (!z.is_zero()) {
          ASSERT_NE(z.digits().front(), 0u);
          ASSERT_EQ(z.absolute_precision(), z.valuation() + z.significant_digits());
        }
      }
    }
  }
}

TEST(PAdicCanonical, UltrametricInequalityExact) {
  RngStream rng(13, 0);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 10000; ++i) {
      const int r1 = static_cast<int>(rng.uniform_below(7)) - 3;
      const int r2 = static_cast<int>(rng.uniform_below(7)) - 3;
      const PAdic x = uniform_sphere(rng, p, r1);
      const PAdic y = uniform_sphere(rng, p, r2);
      const PAdic s = x + y;
      const Rational mx = std::max(x.abs_exact(), y.abs_exact());
      ASSERT_LE(s.abs_exact(), mx);
      if (r1 != r2) ASSERT_EQ(s.abs_exact(), mx);
    }
  }
}

TEST(PAdicPrecision, RefusesComparisonBeyondModulus) {
  const PAdic x = PAdic::from_digits(3, 0, {1, 2});
  const PAdic y = PAdic::from_digits(3, 0, {1, 2, 0, 1});
  EXPECT_TRUE(x.congruent(y, 2));
  EXPECT_THROW(x.congruent(y, 3), PrecisionError);
  EXPECT_THROW(x.digit(2), PrecisionError);
  EXPECT_FALSE(x.distance_exponent(y).has_value());
}

TEST(PAdicPrecision, ValuationClamp) {
  EXPECT_THROW(PAdic::power_of_p(2, kValuationLimit + 1), NumericError);
  EXPECT_NO_THROW(PAdic::power_of_p(2, kValuationLimit));
}

TEST(Character, RankZeroAndHalf) {
  EXPECT_EQ(character(PAdic::from_integer(5, 17)), std::complex<double>(1.0, 0.0));
  const auto half = character(PAdic::from_digits(2, -1, {1, 0, 0}));
  EXPECT_NEAR(half.real(), -1.0, 1e-15);
  EXPECT_NEAR(half.imag(), 0.0, 1e-15);
}

TEST(Character, AdditiveAndInverse) {
  RngStream rng(14, 0);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 2000; ++i) {
      const PAdic x = uniform_sphere(rng, p, static_cast<int>(rng.uniform_below(6)));
      const PAdic y = uniform_sphere(rng, p, static_cast<int>(rng.uniform_below(6)));
      const auto lhs = character(x + y);
      const auto rhs = character(x) * character(y);
      ASSERT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
      ASSERT_NEAR(std::abs(character(x) * character(-x) - 1.0), 0.0, 1e-12);
      ASSERT_NEAR(std::abs(character(x)), 1.0, 1e-14);
    }
  }
}

TEST(HaarMeasure, BallIsPreviousBallPlusSphere) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (int r = -10; r <= 10; ++r)
      EXPECT_EQ(ball_measure_exact(p, r), ball_measure_exact(p, r - 1) + sphere_measure_exact(p, r));
}

TEST(Balls, NestedOrDisjoint) {
  RngStream rng(15, 0);
  for (int i = 0; i < 2000; ++i) {
    const Ball a(uniform_ball(rng, Ball::unit(3)), -static_cast<int>(rng.uniform_below(3)));
    const Ball b(uniform_ball(rng, Ball::unit(3)), -static_cast<int>(rng.uniform_below(3)));
    const bool nested = a.contains(b) || b.contains(a);
    ASSERT_NE(nested, a.disjoint(b));
  }
}

TEST(Balls, ChildrenPartitionParent) {
  const Ball parent(PAdic::from_integer(5, 3), 1);
  const auto kids = parent.children();
  ASSERT_EQ(kids.size(), 5u);
  Rational total(0);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    EXPECT_TRUE(parent.contains(kids[i]));
    for (std::size_t j = i + 1; j < kids.size(); ++j) EXPECT_TRUE(kids[i].disjoint(kids[j]));
    total += kids[i].measure_exact();
  }
  EXPECT_EQ(total, parent.measure_exact());
}

TEST(Sampling, SphereMembershipAndLeadingDigit) {
  RngStream rng(16, 0);
  std::map<std::uint32_t, long> lead;
  for (int i = 0; i < 30000; ++i) {
    const PAdic x = uniform_sphere(rng, 5, 2);
    ASSERT_EQ(*x.norm_exponent(), 2);
    ++lead[x.digits().front()];
  }
  double chi2 = 0.0;
  for (std::uint32_t d = 1; d < 5; ++d) {
    const double e = 30000.0 / 4.0;
    chi2 += (lead[d] - e) * (lead[d] - e) / e;
  }
  EXPECT_GT(oracle::chi_square_pvalue(chi2, 3), 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const PAdic u = uniform_sphere(rng, 2, 0);
    ASSERT_EQ(u.digit(0), 1u);
  }
}

TEST(Sampling, BallDigitsUniformChiSquare) {
  RngStream rng(17, 0);
  const Ball ball(PAdic::from_integer(7, 40), -1);
  std::vector<std::vector<long>> freq(8, std::vector<long>(7, 0));
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const PAdic x = uniform_ball(rng, ball);
    ASSERT_TRUE(ball.contains(x));
    const PAdic off = x - ball.center().extended(x.absolute_precision());
    for (int k = 0; k < 8; ++k) ++freq[k][off.digit(1 + k)];
  }
  for (int k = 0; k < 8; ++k) {
    double chi2 = 0.0;
    for (long c : freq[k]) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    EXPECT_GT(oracle::chi_square_pvalue(chi2, 6), 1e-6) << "position " << k;
  }
}

TEST(Sampling, BallOffsetLawIndependentOfCentre) {
  RngStream a(18, 0), b(18, 0);
  const Ball b1(PAdic::from_integer(3, 0), 0);
  const Ball b2(PAdic::from_integer(3, 1000), 0);
  for (int i = 0; i < 200; ++i) {
    const PAdic x = uniform_ball(a, b1) - b1.center().extended(32);
    const PAdic y = uniform_ball(b, b2) - b2.center().extended(32);
    ASSERT_TRUE(x.congruent(y, 32));
  }
}
