#pragma once

#include <cstdint>
#include <vector>

#include "adelic/padic.hpp"
#include "adelic/rng.hpp"

namespace adelic {

// One diffusion component: prime p, Vladimirov exponent b, diffusion constant sigma.
struct KernelParams {
  std::uint32_t p = 2;
  double b = 1.0;
  double sigma = 1.0;

  KernelParams() = default;
  KernelParams(std::uint32_t p, double b, double sigma);
};

struct SeriesPolicy {
  double rel_tol = 1e-14;
  int max_terms = 4096;

  void validate() const;
};

// Partial sum with a rigorous bound on the neglected remainder.
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};

// alpha = 1 - (p^b - 1)/(p^{b+1} - 1); also the integral of |x|^b over Z_p.
double alpha(const KernelParams& params);
double alpha(std::uint32_t p, double b);
// Rate of the exponential exit time from a ball of radius p^r.
double exit_rate(const KernelParams& params, int r);

// rho(t, x) for |x| = p^m.
SeriesValue density(const KernelParams& params, double t, int m, const SeriesPolicy& policy = {});
SeriesValue density_at_origin(const KernelParams& params, double t, const SeriesPolicy& policy = {});
// P(|X_t| <= p^nu).
SeriesValue ball_mass(const KernelParams& params, double t, int nu, const SeriesPolicy& policy = {});
// P(|X_t| = p^m).
SeriesValue sphere_mass(const KernelParams& params, double t, int m, const SeriesPolicy& policy = {});
// P(|X_t| > p^nu), evaluated without cancellation when it is small.
SeriesValue tail_mass(const KernelParams& params, double t, int nu, const SeriesPolicy& policy = {});

// P(sup_{s<=T} |X_s| <= p^r) = exp(-sigma alpha T p^{-rb}).
double exit_prob(const KernelParams& params, double T, int r);
// Landing sphere of the first exit from B_r has radius p^{r+k} with this probability.
double overshoot_law(const KernelParams& params, int r, int k);

// P(x + X_t in ball).
double ball_probability(const KernelParams& params, double t, const Ball& ball, const PAdic& x,
                        const SeriesPolicy& policy = {});

// Radial law of X_t on a window of radius exponents covering at least
// 1 - coverage of the mass. Used for inverse-CDF sampling and as the
// operand of exact radial convolution.
class RadialLaw {
 public:
  static constexpr double kDefaultCoverage = 1e-12;

  RadialLaw(const KernelParams& params, double t, double coverage = kDefaultCoverage,
            const SeriesPolicy& policy = {});

  const KernelParams& params() const { return params_; }
  double time() const { return t_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  // Sphere mass; 0 outside the window.
  double mass(int m) const;
  // Density on the sphere of radius p^m; computed on demand outside the window.
  double density_at(int m) const;
  const std::vector<double>& masses() const { return mass_; }
  // Mass left outside [lo, hi].
  double truncated_mass() const { return truncated_; }
  // Radius exponent drawn from the renormalised window law.
  int sample_radius(RngStream& rng) const;

 private:
  KernelParams params_;
  double t_;
  SeriesPolicy policy_;
  int lo_ = 0;
  int hi_ = 0;
  std::vector<double> mass_;
  std::vector<double> density_;
  std::vector<double> cdf_;
  double truncated_ = 0.0;
};

// Law of |X + Y| for independent radial X, Y, returned on [lo, lo + size).
struct RadialConvolution {
  int lo = 0;
  std::vector<double> mass;

  double at(int m) const {
    const long k = static_cast<long>(m) - lo;
    return k < 0 || k >= static_cast<long>(mass.size()) ? 0.0 : mass[static_cast<std::size_t>(k)];
  }
};
RadialConvolution radial_convolution(const RadialLaw& a, const RadialLaw& b);

}  // namespace adelic
