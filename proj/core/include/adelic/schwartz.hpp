#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "adelic/adelic.hpp"
#include "adelic/heat_kernel.hpp"
#include "adelic/interval.hpp"
#include "adelic/padic.hpp"

namespace adelic {

struct SBTerm {
  Ball ball;
  std::complex<double> coeff;
};

// Finite combination of ball indicators on Q_p.
class SBFunction {
 public:
  explicit SBFunction(std::uint32_t p, std::vector<SBTerm> terms = {});
  static SBFunction indicator(const Ball& ball, std::complex<double> coeff = 1.0);
  static SBFunction vacuum(std::uint32_t p) { return indicator(Ball::unit(p)); }

  std::uint32_t prime() const { return p_; }
  const std::vector<SBTerm>& terms() const { return terms_; }

  std::complex<double> operator()(const PAdic& x) const;

  // Equivalent function on pairwise disjoint balls with nonzero coefficients.
  SBFunction canonical() const;
  bool is_canonical() const;
  bool is_vacuum() const;
  bool is_zero() const { return canonical().terms_.empty(); }

  // Smallest radius exponent among the terms.
  std::optional<int> finest_radius() const;
  double sup_abs() const;
  bool is_real_nonnegative() const;
  std::complex<double> integral() const;
  // Exact integral for integer-valued real coefficients.
  Rational integral_rational() const;

  SBFunction operator+(const SBFunction& other) const;
  SBFunction scaled(std::complex<double> c) const;

 private:
  std::uint32_t p_;
  std::vector<SBTerm> terms_;
};

std::complex<double> eval_sb(const SBFunction& f, const PAdic& x);

// (Delta 1_{Z_p})(x) for |x| = p^m, by the shell series; nullopt m means x in Z_p.
SeriesValue vacuum_laplacian(std::uint32_t p, double b, std::optional<int> m, const SeriesPolicy& policy = {});

// (Delta 1_{B_r(c)})(x): the Fourier multiplier |xi|^b applied to a ball indicator.
double ball_laplacian(std::uint32_t p, double b, const Ball& ball, const PAdic& x, const SeriesPolicy& policy = {});

// (Delta f)(x) without the diffusion constant.
std::complex<double> vladimirov_apply(const KernelParams& params, const SBFunction& f, const PAdic& x,
                                      const SeriesPolicy& policy = {});

// <Delta f, g> = integral of (Delta f) conj(g), by radial quadrature per ball pair.
std::complex<double> laplacian_pairing(std::uint32_t p, double b, const SBFunction& f, const SBFunction& g,
                                       const SeriesPolicy& policy = {});

// ||M Omega||^2 = integral of |x|^{2b} over Z_p.
double norm_m_omega(std::uint32_t p, double b);
// ||M Omega_A||^2 over the first N primes:
// sum_i sigma_i^2 ||M_i Omega_i||^2 + sum_{i != j} sigma_i sigma_j alpha_i alpha_j.
double multiplier_vacuum_norm_sq(const SigmaSequence& sigma, double b, std::size_t N);

// Product of SB factors; indices without a factor carry the vacuum.
class SimpleAdelicSB {
 public:
  SimpleAdelicSB() = default;
  SimpleAdelicSB& set(std::size_t index, SBFunction f);
  const std::map<std::size_t, SBFunction>& factors() const { return factors_; }
  const SBFunction* factor(std::size_t index) const;
  std::optional<std::size_t> max_index() const;
  // Smallest radius exponent used at this index (0 for the vacuum).
  int finest_radius(std::size_t index) const;
  // Throws PrecisionError when a non-vacuum factor meets an unresolved component.
  std::complex<double> operator()(const AdelicPoint& a) const;
  std::complex<double> factor_value(std::size_t index, const PAdic& x) const;
  double sup_abs() const;

 private:
  std::map<std::size_t, SBFunction> factors_;
};

// v(a) = sum_i tau_i v_i(a_i) with real nonnegative SB shapes v_i.
class SimplePotential {
 public:
  struct Component {
    double weight;
    SBFunction shape;
    double bound;
  };

  SimplePotential() = default;
  SimplePotential& add(std::size_t index, double weight, SBFunction shape);
  const std::map<std::size_t, Component>& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }
  std::optional<std::size_t> max_index() const;
  std::optional<int> finest_radius(std::size_t index) const;

  // tau_i v_i(x) for one component (0 when absent).
  double component_value(std::size_t index, const PAdic& x) const;
  double operator()(const AdelicPoint& a) const;
  double sup() const;

 private:
  std::map<std::size_t, Component> components_;
};

// Within the truncation, unresolved components are read at 0; the
// components at index >= N contribute [0, sigma_i] each.
Interval adelic_multiplier(const SigmaSequence& sigma, double b, const AdelicPoint& a, std::size_t N);

ComplexInterval adelic_vladimirov_apply(const SigmaSequence& sigma, double b, const SimpleAdelicSB& f,
                                        const AdelicPoint& a, std::size_t N, const SeriesPolicy& policy = {});

}  // namespace adelic
