#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "adelic/error.hpp"
#include "adelic/feynman_kac.hpp"

using namespace adelic;

namespace {

FKRequest base_request() {
  FKRequest req;
  req.sigma = SigmaSequence::inverse_square();
  req.b = 1.0;
  req.t = 0.5;
  req.N = 6;
  req.n_paths = 20000;
  req.seed = 11;
  return req;
}

SBFunction small_ball(std::uint32_t p, std::int64_t c, int r, double coeff = 1.0) {
  return SBFunction::indicator(Ball(PAdic::from_integer(p, c, 12), r), coeff);
}

}  // namespace

TEST(ActionIntegral, ZeroAndConstant) {
  EventPath path;
  path.params = KernelParams(2, 1.0, 1.0);
  path.start = PAdic::zero(2);
  path.horizon = 2.0;
  EXPECT_EQ(action_integral(path, SBFunction(2), 1.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(action_integral(path, SBFunction::vacuum(2), 0.75, 2.0), 1.5);

  AdelicPathBundle bundle;
  bundle.horizon = 2.0;
  bundle.paths.emplace_back(path);
  const PotentialFn c_omega = [](const AdelicPoint& a) {
    for (const auto& [i, x] : a.active())
      if (!x.in_ball(PAdic::zero(x.prime()), 0)) return 0.0;
    return 3.0;
  };
  EXPECT_DOUBLE_EQ(action_integral(bundle, c_omega, 2.0, 0.01), 6.0);
}

TEST(ActionIntegral, QuadratureConvergesToExact) {
  const KernelParams params(3, 1.0, 2.0);
  const SBFunction shape = small_ball(3, 0, -1, 1.0) + small_ball(3, 1, 0, 0.5);
  RngStream rng(31, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const EventPath path = sample_event_path(params, PAdic::zero(3), 1.0, -1, rng);
    const double exact = action_integral(path, shape, 1.0, 1.0, ActionMode::exact);
    const double jumps = static_cast<double>(path.events.size());
    for (double h : {1e-2, 1e-3, 1e-4}) {
      const double q = action_integral(path, shape, 1.0, 1.0, ActionMode::quadrature, h);
      EXPECT_LE(std::abs(q - exact), jumps * h * 1.5 + 1e-12);
    }
  }
}

TEST(ActionIntegral, RefusesCoarseResolution) {
  const KernelParams params(2, 1.0, 1.0);
  RngStream rng(5, 0);
  const EventPath path = sample_event_path(params, PAdic::zero(2), 1.0, 0, rng);
  EXPECT_THROW(action_integral(path, small_ball(2, 0, -2), 1.0, 1.0, ActionMode::exact), ConfigError);
  PathSkeleton sk;
  sk.params = params;
  sk.times = {0.0, 0.5};
  sk.values = {PAdic::zero(2), PAdic::zero(2)};
  EXPECT_THROW(action_integral(sk, SBFunction::vacuum(2), 1.0, 1.0, ActionMode::exact), ConfigError);
  EXPECT_DOUBLE_EQ(action_integral(sk, SBFunction::vacuum(2), 2.0, 1.0), 2.0);
}

TEST(FreePropagate, VacuumAtOriginAndReductions) {
  const SigmaSequence sigma = SigmaSequence::inverse_square();
  const SimpleAdelicSB omega;
  const AdelicPoint origin;
  for (double t : {0.1, 1.0, 5.0}) {
    const ComplexInterval v = free_propagate(sigma, 1.0, t, omega, origin, 50);
    double head = 1.0;
    for (std::size_t i = 0; i < 50; ++i) head *= ball_mass(*sigma.params(i, 1.0), t, 0).value;
    EXPECT_NEAR(v.center.real() + v.radius, head, 1e-14);
    EXPECT_GE(v.center.real() - v.radius, std::exp(-sigma.total_sigma().hi * t));
  }
  const SigmaSequence single = SigmaSequence::explicit_list({1.0});
  const ComplexInterval one = free_propagate(single, 1.0, 1.0, omega, origin, 1);
  EXPECT_DOUBLE_EQ(one.center.real(), ball_mass(KernelParams(2, 1.0, 1.0), 1.0, 0).value);
  EXPECT_EQ(one.radius, 0.0);
}

TEST(FreePropagate, DiracLimit) {
  const SigmaSequence sigma = SigmaSequence::inverse_square();
  SimpleAdelicSB alpha;
  alpha.set(0, small_ball(2, 1, -2, 1.0));
  AdelicPoint inside, outside;
  inside.set(0, PAdic::from_integer(2, 5, 10));
  outside.set(0, PAdic::from_integer(2, 3, 10));
  const double t = 1e-7;
  EXPECT_NEAR(free_propagate(sigma, 1.0, t, alpha, inside, 20).center.real(), 1.0, 1e-5);
  EXPECT_NEAR(free_propagate(sigma, 1.0, t, alpha, outside, 20).center.real(), 0.0, 1e-5);
  EXPECT_THROW(free_propagate(sigma, 1.0, 1.0, alpha, AdelicPoint(), 20), ConfigError);
}

TEST(FKExpectation, FreeReductionAtTestPoints) {
  FKRequest req = base_request();
  req.alpha.set(0, small_ball(2, 0, -1, 1.0) + small_ball(2, 1, 0, 0.5));
  req.alpha.set(1, small_ball(3, 1, 0, 1.0));
  const std::vector<std::pair<std::int64_t, std::int64_t>> points{{0, 1}, {1, 1}, {2, 4}, {3, 7}, {6, 2}};
  for (const auto& [a, c] : points) {
    req.x = AdelicPoint();
    req.x.set(0, PAdic::from_integer(2, a, 10));
    req.x.set(1, PAdic::from_integer(3, c, 10));
    const FKEstimate est = fk_expectation(req);
    const ComplexInterval exact = free_propagate(req.sigma, req.b, req.t, req.alpha, req.x, req.N);
    const double head = exact.center.real() + exact.radius;
    EXPECT_LE(std::abs(est.value.real() - head), 3.0 * est.std_error + 1e-12) << a << " " << c;
    EXPECT_EQ(est.n_paths, req.n_paths);
    EXPECT_GT(est.tail_certificate, 0.9);
  }
}

TEST(FKExpectation, DampingContractionPositivity) {
  FKRequest req = base_request();
  req.t = 1.0;
  const double free = fk_expectation(req).value.real();
  req.v.add(0, 5.0, SBFunction::vacuum(2));
  req.v.add(2, 2.0, SBFunction::vacuum(5));
  const FKEstimate damped = fk_expectation(req);
  EXPECT_LT(damped.value.real(), free);
  EXPECT_LE(std::abs(damped.value), 1.0 + 3.0 * damped.std_error);
  EXPECT_GE(damped.value.real(), -3.0 * damped.std_error);
  // Inside Z_2 x Z_5 the weight is at most e^{-7}.
  EXPECT_LT(damped.value.real(), std::exp(-7.0 * 0.5) + 3 * damped.std_error);
}

TEST(FKExpectation, QuadratureMatchesExactForSimplePotential) {
  FKRequest req = base_request();
  req.n_paths = 4000;
  req.x.set(0, PAdic::from_integer(2, 1, 10));
  req.alpha.set(0, small_ball(2, 1, -1, 1.0));
  req.v.add(0, 1.5, small_ball(2, 1, -2, 1.0));
  const FKEstimate exact = fk_expectation(req);
  req.mode = ActionMode::quadrature;
  req.h = req.t / 4096.0;
  const FKEstimate quad = fk_expectation(req);
  EXPECT_LE(std::abs(exact.value - quad.value), 5.0 * quad.quadrature_bias + 1e-12);
  EXPECT_GT(quad.quadrature_bias, 0.0);
  req.potential = [](const AdelicPoint& a) {
    const PAdic& x = *a.component(0);
    return x.in_ball(PAdic::from_integer(2, 1, 4), -2) ? 1.5 : 0.0;
  };
  req.N = 1;
  req.n_paths = 500;
  req.h = 0.0;
  const FKEstimate callback = fk_expectation(req);
  req.potential = nullptr;
  const FKEstimate simple = fk_expectation(req);
  EXPECT_EQ(callback.value, simple.value);
}

TEST(FKExpectation, Validation) {
  FKRequest req = base_request();
  req.alpha.set(0, small_ball(2, 0, -1));
  EXPECT_THROW(fk_expectation(req), ConfigError);
  req = base_request();
  req.alpha.set(7, SBFunction::vacuum(19));
  EXPECT_THROW(fk_expectation(req), ConfigError);
  req = base_request();
  req.potential = [](const AdelicPoint&) { return 1.0; };
  EXPECT_THROW(fk_expectation(req), ConfigError);
  req = base_request();
  req.t = 0.0;
  EXPECT_THROW(fk_expectation(req), ConfigError);
}

TEST(FKExpectation, WorkerCountDoesNotChangeOutput) {
  FKRequest req = base_request();
  req.n_paths = 5000;
  req.block_size = 256;
  req.x.set(0, PAdic::from_integer(2, 1, 10));
  req.alpha.set(0, small_ball(2, 1, -1, 1.0));
  req.v.add(1, 0.7, small_ball(3, 0, -1, 1.0));
  req.x.set(1, PAdic::zero(3));
  req.workers = 1;
  const FKEstimate a = fk_expectation(req);
  for (unsigned w : {2u, 4u, 8u}) {
    req.workers = w;
    const FKEstimate b = fk_expectation(req);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
  }
}

TEST(FKKernel, FreeKernelIsDensity) {
  FKRequest req = base_request();
  req.N = 3;
  req.x.set(0, PAdic::from_integer(2, 1, 10));
  req.y = AdelicPoint();
  req.y->set(0, PAdic::from_integer(2, 3, 10));
  const FKEstimate k = fk_kernel(req);
  double rho = transition_density(*req.sigma.params(0, 1.0), req.t, PAdic::from_integer(2, 1, 10),
                                  PAdic::from_integer(2, 3, 10));
  for (std::size_t i = 1; i < 3; ++i)
    rho *= density_at_origin(*req.sigma.params(i, 1.0), req.t).value;
  EXPECT_DOUBLE_EQ(k.value.real(), rho);
  EXPECT_EQ(*k.bridge_factor, 1.0);
  req.y.reset();
  EXPECT_THROW(fk_kernel(req), ConfigError);
}

TEST(FKKernel, SymmetryAndDomination) {
  FKRequest req;
  req.sigma = SigmaSequence::explicit_list({1.0});
  req.b = 1.0;
  req.t = 1.0;
  req.N = 1;
  req.n_paths = 20000;
  req.v.add(0, 1.0, small_ball(2, 0, -1, 1.0) + small_ball(2, 1, -2, 2.0));
  const std::vector<std::pair<std::int64_t, std::int64_t>> pairs{{0, 1}, {1, 2}, {0, 4}};
  for (const auto& [a, c] : pairs) {
    const PAdic x = PAdic::from_integer(2, a, 10), y = PAdic::from_integer(2, c, 10);
    req.x = AdelicPoint();
    req.x.set(0, x);
    req.y = AdelicPoint();
    req.y->set(0, y);
    req.seed = 100 + static_cast<std::uint64_t>(a);
    const FKEstimate kxy = fk_kernel(req);
    std::swap(req.x, *req.y);
    req.seed = 200 + static_cast<std::uint64_t>(c);
    const FKEstimate kyx = fk_kernel(req);
    const double se = std::hypot(kxy.std_error, kyx.std_error);
    EXPECT_LE(std::abs(kxy.value - kyx.value), 3.0 * se) << a << " " << c;
    EXPECT_LE(kxy.value.real(), *kxy.density + 3.0 * kxy.std_error);
    EXPECT_LT(*kxy.bridge_factor, 1.0);
  }
}

TEST(FKKernel, ProductMatchesJoint) {
  FKRequest req;
  req.sigma = SigmaSequence::explicit_list({1.0, 0.5});
  req.b = 1.0;
  req.t = 1.0;
  req.N = 2;
  req.n_paths = 20000;
  req.seed = 77;
  req.v.add(0, 0.8, SBFunction::vacuum(2));
  req.v.add(1, 0.6, SBFunction::vacuum(3));
  req.x.set(0, PAdic::zero(2));
  req.x.set(1, PAdic::from_integer(3, 1, 10));
  req.y = AdelicPoint();
  req.y->set(0, PAdic::from_integer(2, 1, 10));
  req.y->set(1, PAdic::from_integer(3, 4, 10));
  const FKEstimate joint = fk_kernel(req);
  const KernelProduct prod = fk_kernel_product(req);
  EXPECT_EQ(prod.factors.size(), 2u);
  EXPECT_DOUBLE_EQ(*prod.total.density, *joint.density);
  const double se = std::hypot(joint.std_error, prod.total.std_error);
  EXPECT_LE(std::abs(joint.value.real() - prod.total.value.real()), 3.0 * se);

  // Dropping the potential at one prime changes only that factor.
  FKRequest one = req;
  one.v = SimplePotential();
  one.v.add(0, 0.8, SBFunction::vacuum(2));
  const KernelProduct p1 = fk_kernel_product(one);
  EXPECT_EQ(p1.factors.size(), 1u);
  EXPECT_EQ(*p1.factors.at(0).bridge_factor, *prod.factors.at(0).bridge_factor);
  EXPECT_GT(p1.total.value.real(), prod.total.value.real());
  EXPECT_LE(p1.total.value.real(), *p1.total.density);
}

TEST(Semigroup, AnalyticCompositionMatches) {
  FKRequest req = base_request();
  req.t = 0.4;
  req.alpha.set(0, small_ball(2, 1, -2, 1.0) + small_ball(2, 0, 1, 0.25));
  req.alpha.set(1, small_ball(3, 2, -1, 1.0));
  std::vector<AdelicPoint> points;
  for (std::int64_t a : {0, 1, 5}) {
    AdelicPoint x;
    x.set(0, PAdic::from_integer(2, a, 10));
    x.set(1, PAdic::from_integer(3, a + 2, 10));
    points.push_back(x);
  }
  const SemigroupReport rep = semigroup_check(req, 0.7, points);
  EXPECT_TRUE(rep.analytic);
  EXPECT_LT(rep.max_discrepancy, 1e-10);
  const SemigroupReport zero = semigroup_check(req, 0.0, points);
  EXPECT_EQ(zero.max_discrepancy, 0.0);
}

TEST(Semigroup, MonteCarloNested) {
  FKRequest req = base_request();
  req.N = 2;
  req.t = 0.3;
  req.n_paths = 40000;
  req.v.add(0, 1.0, small_ball(2, 0, -1, 1.0));
  req.alpha.set(0, small_ball(2, 0, 0, 1.0));
  AdelicPoint x;
  x.set(0, PAdic::from_integer(2, 2, 10));
  const SemigroupReport rep = semigroup_check(req, 0.3, {x});
  EXPECT_FALSE(rep.analytic);
  EXPECT_LE(rep.max_z, 3.0);
  EXPECT_GT(rep.combined_se[0], 0.0);
}

TEST(Generator, FreeVacuumOrderOne) {
  FKRequest req = base_request();
  req.N = 10;
  const GeneratorReport rep = generator_check(req, {1e-1, 1e-2, 1e-3});
  EXPECT_NEAR(rep.order, 1.0, 0.3);
  EXPECT_LT(rep.error.back(), 1e-3);
  // -(Delta_A Omega_A)(0) = -sum_i beta_i over the truncation.
  double beta = 0.0;
  for (std::size_t i = 0; i < 10; ++i) beta += req.sigma.beta(i, 1.0);
  EXPECT_NEAR(rep.limit.center.real(), -beta, 1e-12);
}

TEST(Generator, AwayFromSupportIsFinite) {
  FKRequest req = base_request();
  req.alpha.set(0, small_ball(2, 0, -2, 1.0));
  req.x.set(0, PAdic::from_integer(2, 1, 10));
  const GeneratorReport rep = generator_check(req, {1e-1, 1e-2, 1e-3});
  EXPECT_GT(rep.limit.center.real(), 0.0);
  EXPECT_LT(rep.limit.center.real(), 1.0);
  EXPECT_NEAR(rep.order, 1.0, 0.3);
}

TEST(Generator, WithPotential) {
  FKRequest req = base_request();
  req.N = 2;
  req.n_paths = 200000;
  req.alpha.set(0, small_ball(2, 0, -1, 1.0));
  req.v.add(0, 2.0, small_ball(2, 0, -1, 1.0));
  req.x.set(0, PAdic::zero(2));
  const GeneratorReport rep = generator_check(req, {1e-1, 1e-2, 1e-3});
  EXPECT_NEAR(rep.order, 1.0, 0.3);
  for (std::size_t k = 0; k < rep.t.size(); ++k) EXPECT_LT(rep.std_error[k], 0.2 * rep.error[k]);
}
