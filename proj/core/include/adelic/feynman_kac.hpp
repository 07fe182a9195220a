#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "adelic/adelic.hpp"
#include "adelic/interval.hpp"
#include "adelic/sampler.hpp"
#include "adelic/schwartz.hpp"

namespace adelic {

enum class ActionMode { exact, quadrature };

const char* to_string(ActionMode mode);

// General bounded potential evaluated on the simulated components.
using PotentialFn = std::function<double(const AdelicPoint&)>;

struct FKRequest {
  SigmaSequence sigma = SigmaSequence::inverse_square();
  double b = 1.0;
  double t = 1.0;
  AdelicPoint x;
  std::optional<AdelicPoint> y;
  SimpleAdelicSB alpha;
  SimplePotential v;
  // Used in quadrature mode instead of `v` when set.
  PotentialFn potential;
  std::size_t n_paths = 10000;
  // Simulated primes; components at index >= N stay at their start.
  std::size_t N = 8;
  std::uint64_t seed = 1;
  ActionMode mode = ActionMode::exact;
  // Quadrature step; 0 means t / 1024.
  double h = 0.0;
  unsigned workers = 1;
  std::size_t block_size = 1024;
  SeriesPolicy policy;
};

struct FKEstimate {
  std::complex<double> value = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  std::size_t cutoff = 0;
  // Probability that no component at index >= cutoff leaves Z_p by t.
  double tail_certificate = 1.0;
  ActionMode mode = ActionMode::exact;
  // Mean |e^{-I_h} - e^{-I_{h/2}}| weight change from one Richardson halving.
  double quadrature_bias = 0.0;
  // Kernel estimates only: analytic density product and bridge expectation.
  std::optional<double> density;
  std::optional<double> bridge_factor;
  std::optional<double> bridge_std_error;
};

// Per-component path resolution: the finest ball scale of alpha_i and v_i, capped at 0.
std::map<std::size_t, int> fk_resolutions(const SimpleAdelicSB& alpha, const SimplePotential& v, std::size_t N);

// Integral of weight * shape along one component over [0, t].
double action_integral(const EventPath& path, const SBFunction& shape, double weight, double t,
                       ActionMode mode = ActionMode::exact, double h = 0.0);
// Skeletons carry no information between epochs; the value is held from the left.
double action_integral(const PathSkeleton& path, const SBFunction& shape, double weight, double t,
                       ActionMode mode = ActionMode::quadrature);
double action_integral(const AdelicPathBundle& bundle, const SimplePotential& v, double t,
                       ActionMode mode = ActionMode::exact, double h = 0.0);
// Composite midpoint rule with step h (rounded so that t / h is an integer).
double action_integral(const AdelicPathBundle& bundle, const PotentialFn& v, double t, double h);

// Monte Carlo estimate of (pi_t alpha)(x) over the N-prime bundle.
FKEstimate fk_expectation(const FKRequest& req);

// (pi^0_t alpha)(x) over the first N primes; components from N on carry
// vacuum factors and each lies in [exp(-t beta_i), 1].
ComplexInterval free_propagate(const SigmaSequence& sigma, double b, double t, const SimpleAdelicSB& alpha,
                               const AdelicPoint& x, std::size_t N, const SeriesPolicy& policy = {});
// Per-prime free factor (rho(t, .) * f)(x).
std::complex<double> free_factor(const KernelParams& params, double t, const SBFunction& f, const PAdic& x,
                                 const SeriesPolicy& policy = {});

// Kernel K_t(x, y) over the first N primes: the bridge expectation of
// exp(-int v) times prod_i rho_i(t, x_i - y_i). Needs req.y.
FKEstimate fk_kernel(const FKRequest& req);

struct KernelProduct {
  FKEstimate total;
  std::map<std::size_t, FKEstimate> factors;
};

// Product of independently estimated per-prime kernels k_t^i(x_i, y_i).
KernelProduct fk_kernel_product(const FKRequest& req);

struct SemigroupReport {
  bool analytic = true;
  std::vector<std::complex<double>> direct;
  std::vector<std::complex<double>> composed;
  std::vector<double> combined_se;
  double max_discrepancy = 0.0;
  // Largest discrepancy in units of the combined standard error (MC only).
  double max_z = 0.0;
};

// Compares pi_{s+t} alpha with pi_s(pi_t alpha) at each point. With v = 0
// both sides are analytic; otherwise the composition is a nested Monte
// Carlo with sqrt(n) outer and sqrt(n) inner paths.
SemigroupReport semigroup_check(const FKRequest& base, double s, const std::vector<AdelicPoint>& points);

struct GeneratorReport {
  std::vector<double> t;
  std::vector<std::complex<double>> difference_quotient;
  std::vector<double> std_error;
  std::vector<double> error;
  ComplexInterval limit;
  // Least-squares slope of log error against log t.
  double order = 0.0;
};

// (pi_t alpha - alpha)(x) / t on the ladder against -(Delta_A + V) alpha (x)
// for the N-prime truncation. The free part is analytic; the potential part
// E[(e^{-int v} - 1) alpha(omega_t)] / t is estimated by Monte Carlo.
GeneratorReport generator_check(const FKRequest& base, const std::vector<double>& t_ladder);

}  // namespace adelic
