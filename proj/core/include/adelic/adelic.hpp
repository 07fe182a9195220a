#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "adelic/heat_kernel.hpp"
#include "adelic/interval.hpp"
#include "adelic/padic.hpp"
#include "adelic/primes.hpp"
#include "adelic/sampler.hpp"

namespace adelic {

// Diffusion constants sigma_i indexed by prime index (0 -> p = 2). An
// explicit head is followed either by the rule sigma_i = C p_i^{-s}, s > 1,
// or by zeros, in which case primes past the head never move.
class SigmaSequence {
 public:
  static SigmaSequence explicit_list(std::vector<double> head);
  static SigmaSequence power_law(double C, double s, std::vector<double> head = {});
  static SigmaSequence inverse_square() { return power_law(1.0, 2.0); }

  std::size_t explicit_count() const { return head_count_; }
  bool has_tail() const { return s_ > 0.0; }
  double tail_constant() const { return C_; }
  double tail_exponent() const { return s_; }

  // sigma_i for i inside the prime table.
  double sigma(std::size_t i) const;
  double beta(std::size_t i, double b) const { return sigma(i) * alpha(nth_prime(i), b); }
  std::optional<KernelParams> params(std::size_t i, double b) const;

  // sum_{i >= n} sigma_i and sum_{i >= n} beta_i, bracketing the part
  // beyond the prime table by the integral bound C P^{1-s}/(s-1).
  Interval tail_sigma(std::size_t n) const;
  Interval tail_beta(std::size_t n, double b) const;
  Interval total_sigma() const { return tail_sigma(0); }
  double beyond_table_bound() const;

 private:
  SigmaSequence() = default;
  void build();

  std::vector<double> sigma_;
  std::vector<double> suffix_;
  std::size_t head_count_ = 0;
  double C_ = 0.0;
  double s_ = 0.0;
};

// Finitely many resolved components; every other component is an
// unspecified element of Z_{p_i}.
class AdelicPoint {
 public:
  AdelicPoint() = default;

  AdelicPoint& set(std::size_t index, PAdic value);
  const std::map<std::size_t, PAdic>& active() const { return active_; }
  bool is_active(std::size_t index) const { return active_.count(index) != 0; }
  const PAdic* component(std::size_t index) const;
  // Resolved value, or 0 as the representative of an unresolved component.
  PAdic representative(std::size_t index) const;
  std::optional<std::size_t> max_active_index() const;

  // Equality on resolved digits: nullopt when it hinges on an unresolved
  // component or on digits beyond the known precision.
  std::optional<bool> equals(const AdelicPoint& other) const;

 private:
  std::map<std::size_t, PAdic> active_;
};

using PathSample = std::variant<PathSkeleton, EventPath>;

struct PathMode {
  bool use_epochs = false;
  std::vector<double> epochs;
  int resolution = 0;
  std::map<std::size_t, int> resolution_by_prime;
  int precision = kDefaultPrecision;

  static PathMode skeleton(std::vector<double> epochs);
  static PathMode events(int resolution = 0);
  int resolution_for(std::size_t index) const;
};

struct AdelicPathBundle {
  double horizon = 0.0;
  std::size_t cutoff = 0;
  // Lower bound on P(every component at index >= cutoff stays in Z_p on [0, T]).
  double tail_certificate = 1.0;
  std::vector<std::optional<KernelParams>> params;
  std::vector<PathSample> paths;

  // True iff the simulated component leaves Z_p (measured from 0) by T.
  bool exits_unit_ball(std::size_t index) const;
};

// Reusable bundle sampler; caches per-prime increment laws for skeleton mode.
class AdelicPathSampler {
 public:
  AdelicPathSampler(const SigmaSequence& sigma, double b, double T, PathMode mode, std::size_t N);
  AdelicPathBundle sample(const AdelicPoint& start, const RngStream& rng);
  double tail_certificate() const { return certificate_; }
  std::size_t cutoff() const { return N_; }

 private:
  SigmaSequence sigma_;
  double b_, T_;
  PathMode mode_;
  std::size_t N_;
  double certificate_;
  std::vector<std::optional<KernelParams>> params_;
  std::vector<std::unique_ptr<IncrementSampler>> increments_;
};

AdelicPathBundle sample_adelic_path(const SigmaSequence& sigma, double b, double T, const PathMode& mode,
                                    const AdelicPoint& start, std::size_t N, const RngStream& rng);

// exp(-T * sum_{i >= N} beta_i), lower end.
double tail_certificate(const SigmaSequence& sigma, double b, double T, std::size_t N);
// Smallest N >= min_primes with tail_certificate >= 1 - eps.
std::size_t choose_truncation(const SigmaSequence& sigma, double b, double T, double eps,
                              std::size_t min_primes = 0);

Interval adelic_ball_probability(const SigmaSequence& sigma, double b, double t,
                                 const std::map<std::size_t, Ball>& balls, std::size_t N,
                                 const SeriesPolicy& policy = {});

struct ExitCountDistribution {
  double T = 0.0;
  std::size_t cutoff = 0;
  std::vector<double> q;
  Interval beta_total;
  double tail_beta_hi = 0.0;
  // Bound on the probability that any component past the cutoff exits.
  double tail_prob = 0.0;
  // Exact law of the number of exits among the first `cutoff` components.
  std::vector<double> pmf;
  // Brackets for the law of the exit count over all components.
  std::vector<Interval> bounds;
  // exp(-T beta) (e^{T beta})^k / k!, evaluated at the lower end of beta.
  std::vector<double> moment_bound_terms;
};

ExitCountDistribution exit_count_pmf(const SigmaSequence& sigma, double b, double T, std::size_t N,
                                     std::size_t k_max);

struct ExitMoment {
  int order = 1;
  // E[H^m] for the head count H over the first N components.
  double exact = 0.0;
  double bound = 0.0;
};

ExitMoment exit_count_moment(const SigmaSequence& sigma, double b, double T, std::size_t N, int m);

// Poisson-binomial law for independent Bernoulli(q_i).
std::vector<double> poisson_binomial(const std::vector<double>& q);

}  // namespace adelic
