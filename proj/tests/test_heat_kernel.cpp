#include <gtest/gtest.h>

#include <cmath>

#include "adelic/error.hpp"
#include "adelic/heat_kernel.hpp"
#include "oracles/oracles.hpp"

using namespace adelic;

TEST(Alpha, ClosedFormValues) {
  EXPECT_NEAR(alpha(KernelParams(2, 1, 1)), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(alpha(KernelParams(3, 1, 1)), 0.75, 1e-15);
  EXPECT_NEAR(alpha(KernelParams(5, 1e-9, 1)), 1.0, 1e-8);
  for (std::uint32_t p : {2u, 3u, 97u})
    for (double b : {0.1, 1.0, 8.0}) {
      const double a = alpha(KernelParams(p, b, 1));
      EXPECT_GT(a, 0.0);
      EXPECT_LT(a, 1.0);
    }
}

TEST(KernelParams, RejectsBadInput) {
  EXPECT_THROW(KernelParams(4, 1, 1), ConfigError);
  EXPECT_THROW(KernelParams(2, 0, 1), ConfigError);
  EXPECT_THROW(KernelParams(2, 1, -1), ConfigError);
}

TEST(Density, ReferenceValue) {
  // Frozen from an independent 30-digit evaluation of the shell series.
  const auto d = density(KernelParams(2, 1, 1), 1.0, 0);
  EXPECT_NEAR(d.value, 0.412707508292957797, 1e-14);
  EXPECT_LT(d.tail_bound, 1e-14);
}

TEST(Density, MatchesFourierSideQuadrature) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (double b : {0.5, 1.0, 2.0})
      for (double t : {0.1, 1.0, 10.0})
        for (int m : {-3, 0, 2}) {
          const KernelParams k(p, b, 1.0);
          const double lib = density(k, t, m).value;
          const double ref = oracle::fourier_density(k, t, m);
          EXPECT_NEAR(lib, ref, 1e-12 * std::max(1.0, ref)) << p << " " << b << " " << t << " " << m;
        }
}

TEST(Density, ShellIntegralsVanishBeyondFirstCharacterShell) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const PAdic x = PAdic::from_digits(p, -1, {1, 1, 0, 1});
    EXPECT_NEAR(oracle::shell_integral(x.extended(40), -1 + 1), -std::pow(p, -1.0), 1e-12);
    EXPECT_NEAR(oracle::shell_integral(x.extended(40), 1), 0.0, 1e-12);
    EXPECT_NEAR(oracle::shell_integral(x.extended(40), 2), 0.0, 1e-12);
  }
}

TEST(Density, RadialMonotoneInRadius) {
  const KernelParams k(3, 0.5, 1.0);
  double prev = density_at_origin(k, 1.0).value;
  for (int m = -20; m <= 40; ++m) {
    const double d = density(k, 1.0, m).value;
    EXPECT_LE(d, prev * (1 + 1e-14));
    prev = d;
  }
  EXPECT_LT(prev, 1e-8);
}

TEST(Density, RejectsNonPositiveTime) {
  EXPECT_THROW(density(KernelParams(2, 1, 1), 0.0, 0), ConfigError);
  EXPECT_THROW(ball_mass(KernelParams(2, 1, 1), -1.0, 0), ConfigError);
}

TEST(Density, TruncationFailureReported) {
  SeriesPolicy tight;
  tight.max_terms = 2;
  EXPECT_THROW(density(KernelParams(2, 1, 1), 1.0, 0, tight), NumericError);
}

TEST(BallMass, ReferenceValueAndOracle) {
  const KernelParams k(2, 1, 1);
  const double bm = ball_mass(k, 1.0, 0).value;
  EXPECT_NEAR(bm, 0.548042791529570489, 1e-14);
  EXPECT_NEAR(bm, oracle::fourier_ball_mass(k, 1.0, 0), 1e-12);
  EXPECT_GE(bm, std::exp(-1.0));
}

TEST(BallMass, SumOfSphereMasses) {
  const KernelParams k(5, 2.0, 0.25);
  for (int nu = -2; nu <= 2; ++nu) {
    double s = 0.0;
    for (int m = nu; m > nu - 200; --m) s += sphere_mass(k, 1.0, m).value;
    EXPECT_NEAR(ball_mass(k, 1.0, nu).value, s, 1e-13);
  }
}

TEST(BallMass, MonotoneAndTendsToOne) {
  const KernelParams k(2, 0.5, 1.0);
  double prev = 0.0;
  for (int nu = -40; nu <= 200; ++nu) {
    const double v = ball_mass(k, 1.0, nu).value;
    EXPECT_GE(v, prev);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
  EXPECT_NEAR(prev, 1.0, 1e-12);
}

TEST(BallMass, DiracLimitAndLowerBound) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const KernelParams k(p, 1.0, 1.0);
    for (int e = 0; e <= 6; ++e) {
      const double t = std::pow(10.0, -e);
      EXPECT_GE(ball_mass(k, t, 0).value, std::exp(-t));
    }
    EXPECT_NEAR(ball_mass(k, 1e-6, 0).value, 1.0, 2e-6);
  }
}

TEST(SphereMass, ConsistentWithDensityAndBallDifferences) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (double b : {0.5, 1.0, 2.0})
      for (int m = -5; m <= 5; ++m) {
        const KernelParams k(p, b, 1.0);
        const double sm = sphere_mass(k, 1.0, m).value;
        EXPECT_NEAR(sm, density(k, 1.0, m).value * std::pow(p, m) * (1.0 - 1.0 / p), 1e-12);
        EXPECT_NEAR(sm, ball_mass(k, 1.0, m).value - ball_mass(k, 1.0, m - 1).value, 1e-12);
        EXPECT_GE(sm, 0.0);
      }
}

TEST(SphereMass, NormalisationGrid) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (double b : {0.5, 1.0, 2.0})
      for (double sigma : {0.25, 1.0})
        for (double t : {0.1, 1.0, 10.0}) {
          const KernelParams k(p, b, sigma);
          const RadialLaw law(k, t);
          double s = 0.0;
          for (double m : law.masses()) s += m;
          EXPECT_LT(std::abs(s - 1.0), 1e-10) << p << " " << b << " " << sigma << " " << t;
        }
}

TEST(TailMass, ComplementOfBallMass) {
  const KernelParams k(3, 1.0, 1.0);
  for (int nu = -5; nu <= 5; ++nu)
    EXPECT_NEAR(tail_mass(k, 1.0, nu).value, 1.0 - ball_mass(k, 1.0, nu).value, 1e-13);
  // Far tail is resolved without cancellation.
  const double far = tail_mass(k, 1.0, 30).value;
  EXPECT_GT(far, 0.0);
  EXPECT_NEAR(far / std::pow(3.0, -30.0), 1.0, 0.5);
}

TEST(ExitProb, ValuesAndMonotonicity) {
  const KernelParams k(2, 1, 1);
  EXPECT_EQ(exit_prob(k, 0.0, 0), 1.0);
  EXPECT_NEAR(exit_prob(k, 1.0, 0), std::exp(-2.0 / 3.0), 1e-15);
  EXPECT_NEAR(exit_prob(k, 1.0, 0), 0.51342, 1e-5);
  EXPECT_GT(exit_prob(k, 1.0, 0), exit_prob(k, 2.0, 0));
  EXPECT_LT(exit_prob(k, 1.0, 0), exit_prob(k, 1.0, 1));
  EXPECT_THROW(exit_prob(k, -1.0, 0), ConfigError);
}

TEST(Overshoot, GeometricLaw) {
  const KernelParams k(2, 1, 1);
  EXPECT_DOUBLE_EQ(overshoot_law(k, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(overshoot_law(k, 0, 2), 0.25);
  EXPECT_DOUBLE_EQ(overshoot_law(k, 0, 3), overshoot_law(k, 7, 3));
  double s = 0.0;
  for (int j = 1; j < 200; ++j) s += overshoot_law(KernelParams(3, 0.5, 1), 0, j);
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_THROW(overshoot_law(k, 0, 0), ConfigError);
}

TEST(BallProbability, InsideAndOutside) {
  const KernelParams k(3, 1, 1);
  const Ball unit = Ball::unit(3);
  EXPECT_NEAR(ball_probability(k, 1.0, unit, PAdic::from_integer(3, 5)), ball_mass(k, 1.0, 0).value,
              1e-15);
  const PAdic far = PAdic::from_digits(3, -2, {1, 0, 0, 0});
  EXPECT_NEAR(ball_probability(k, 1.0, unit, far), density(k, 1.0, 2).value, 1e-15);
}

TEST(ChapmanKolmogorov, RadialConvolutionMatchesDirectLaw) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (double b : {0.5, 1.0, 2.0})
      for (double t : {0.1, 1.0, 10.0}) {
        const KernelParams k(p, b, 1.0);
        const RadialLaw half(k, t / 2), full(k, t);
        const RadialConvolution conv = radial_convolution(half, half);
        double sup = 0.0;
        for (int m = conv.lo; m < conv.lo + static_cast<int>(conv.mass.size()); ++m)
          sup = std::max(sup, std::abs(conv.at(m) - sphere_mass(k, t, m).value));
        EXPECT_LT(sup, 1e-8) << p << " " << b << " " << t;
      }
}

TEST(ChapmanKolmogorov, UnequalTimes) {
  const KernelParams k(3, 0.5, 0.25);
  const RadialConvolution conv = radial_convolution(RadialLaw(k, 0.3), RadialLaw(k, 1.7));
  for (int m = -10; m <= 20; ++m) EXPECT_NEAR(conv.at(m), sphere_mass(k, 2.0, m).value, 1e-10);
}
