#include "adelic/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adelic/error.hpp"

namespace adelic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(-745) underflows to zero in double precision.
constexpr double kUnderflowExponent = 745.0;

double clamped_exp(double x) {
  if (x > 700.0) return kInf;
  if (x < -kUnderflowExponent) return 0.0;
  return std::exp(x);
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("time must be positive and finite");
}

// Shared constants for the shell series of rho at A = sigma t.
struct Shells {
  double lnp;
  double b;
  double lnA;
  double pb_minus_1;
  // log of A (p^b - 1) / (1 - p^{-(b+1)}), the prefactor of the tail bound.
  double log_bound;

  Shells(const KernelParams& k, double t)
      : lnp(std::log(static_cast<double>(k.p))),
        b(k.b),
        lnA(std::log(k.sigma * t)),
        pb_minus_1(std::expm1(k.b * lnp)) {
    log_bound = lnA + std::log(pb_minus_1) - std::log1p(-std::exp(-(b + 1.0) * lnp));
  }

  // Largest r with A p^{rb} <= 745; terms above it underflow.
  long top_live() const {
    return static_cast<long>(std::floor((std::log(kUnderflowExponent) - lnA) / (b * lnp)));
  }

  // log of c_r p^{r+shift}, with c_r = exp(-u) (1 - exp(-u (p^b - 1))) and u = A p^{rb}.
  double log_term(long r, long shift) const {
    const double e = lnA + static_cast<double>(r) * b * lnp;
    if (e > 700.0) return -kInf;
    const double u = e < -kUnderflowExponent ? 0.0 : std::exp(e);
    const double gap = -std::expm1(-u * pb_minus_1);
    if (!(gap > 0.0)) return -kInf;
    return -u + std::log(gap) + static_cast<double>(r + shift) * lnp;
  }

  // Bound on sum_{r' <= r} c_{r'} p^{r'+shift}.
  double log_tail(long r, long shift) const {
    return log_bound + static_cast<double>(r) * (b + 1.0) * lnp + static_cast<double>(shift) * lnp;
  }
};

// sum_{r <= r_top} c_r p^{r+shift}, summed downward until the remainder
// bound drops below rel_tol times the running sum.
SeriesValue shell_sum(const Shells& s, long r_top, long shift, const SeriesPolicy& policy) {
  SeriesValue out;
  const long live = s.top_live();
  const long start = std::min(r_top, live);
  if (start < r_top) {
    // Each skipped term is below exp(-745) p^{r_top+shift}.
    out.tail_bound += clamped_exp(-kUnderflowExponent + static_cast<double>(r_top + shift) * s.lnp +
                                  std::log(static_cast<double>(r_top - start)));
  }
  for (long r = start;; --r) {
    if (out.terms >= policy.max_terms)
      throw NumericError("heat kernel series exceeded max_terms = " +
                         std::to_string(policy.max_terms));
    out.value += clamped_exp(s.log_term(r, shift));
    ++out.terms;
    const double rest = clamped_exp(s.log_tail(r - 1, shift));
    if (rest <= policy.rel_tol * out.value || (rest == 0.0 && out.value == 0.0)) {
      out.tail_bound += rest;
      return out;
    }
  }
}

constexpr long kOriginTop = std::numeric_limits<long>::max() / 4;

}  // namespace

KernelParams::KernelParams(std::uint32_t p_, double b_, double sigma_) : p(p_), b(b_), sigma(sigma_) {
  check_prime(p);
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("b must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
}

void SeriesPolicy::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("rel_tol must lie in (0, 1)");
  if (max_terms < 1) throw ConfigError("max_terms must be positive");
}

double alpha(std::uint32_t p, double b) {
  const double lnp = std::log(static_cast<double>(p));
  // p^b (p - 1) / (p^{b+1} - 1), written with expm1 so small b stays accurate.
  return std::exp(b * lnp) * (static_cast<double>(p) - 1.0) / std::expm1((b + 1.0) * lnp);
}

double alpha(const KernelParams& params) { return alpha(params.p, params.b); }

double exit_rate(const KernelParams& params, int r) {
  return params.sigma * alpha(params) *
         clamped_exp(-static_cast<double>(r) * params.b * std::log(static_cast<double>(params.p)));
}

SeriesValue density(const KernelParams& params, double t, int m, const SeriesPolicy& policy) {
  check_time(t);
  policy.validate();
  return shell_sum(Shells(params, t), -static_cast<long>(m), 0, policy);
}

SeriesValue density_at_origin(const KernelParams& params, double t, const SeriesPolicy& policy) {
  check_time(t);
  policy.validate();
  return shell_sum(Shells(params, t), kOriginTop, 0, policy);
}

SeriesValue ball_mass(const KernelParams& params, double t, int nu, const SeriesPolicy& policy) {
  check_time(t);
  policy.validate();
  const Shells s(params, t);
  SeriesValue out = shell_sum(s, -static_cast<long>(nu) - 1, nu, policy);
  out.value += clamped_exp(-clamped_exp(s.lnA - static_cast<double>(nu) * s.b * s.lnp));
  out.value = std::min(out.value, 1.0);
  return out;
}

SeriesValue sphere_mass(const KernelParams& params, double t, int m, const SeriesPolicy& policy) {
  check_time(t);
  policy.validate();
  const double q = 1.0 - 1.0 / static_cast<double>(params.p);
  SeriesValue out = shell_sum(Shells(params, t), -static_cast<long>(m), m, policy);
  out.value *= q;
  out.tail_bound *= q;
  return out;
}

SeriesValue tail_mass(const KernelParams& params, double t, int nu, const SeriesPolicy& policy) {
  const SeriesValue inner = ball_mass(params, t, nu, policy);
  if (inner.value < 0.5) {
    return {1.0 - inner.value, inner.tail_bound + 4.0 * std::numeric_limits<double>::epsilon(),
            inner.terms};
  }
  const Shells s(params, t);
  const double q = 1.0 - 1.0 / static_cast<double>(params.p);
  // sphere_mass(m) <= q * bound * p^{-mb}; sum of m > M is geometric.
  const double log_geo = std::log(q) + s.log_bound - std::log1p(-std::exp(-s.b * s.lnp));
  SeriesValue out;
  for (long m = static_cast<long>(nu) + 1;; ++m) {
    if (out.terms >= policy.max_terms)
      throw NumericError("tail mass exceeded max_terms = " + std::to_string(policy.max_terms));
    const SeriesValue sm = sphere_mass(params, t, static_cast<int>(m), policy);
    out.value += sm.value;
    out.tail_bound += sm.tail_bound;
    ++out.terms;
    const double rest = clamped_exp(log_geo - static_cast<double>(m + 1) * s.b * s.lnp);
    if (rest <= policy.rel_tol * out.value || (rest == 0.0 && out.value == 0.0)) {
      out.tail_bound += rest;
      return out;
    }
  }
}

double exit_prob(const KernelParams& params, double T, int r) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("horizon must be nonnegative");
  if (T == 0.0) return 1.0;
  return clamped_exp(-T * exit_rate(params, r));
}

double overshoot_law(const KernelParams& params, int /*r*/, int k) {
  if (k < 1) throw ConfigError("overshoot index k must be >= 1");
  const double q = std::pow(static_cast<double>(params.p), -params.b);
  return (1.0 - q) * std::pow(q, k - 1);
}

double ball_probability(const KernelParams& params, double t, const Ball& ball, const PAdic& x,
                        const SeriesPolicy& policy) {
  if (ball.prime() != params.p || x.prime() != params.p)
    throw ConfigError("ball_probability: prime mismatch");
  if (ball.contains(x)) return ball_mass(params, t, ball.radius_exp(), policy).value;
  const auto d = x.distance_exponent(ball.center());
  // Outside the ball every point of it sits at the same distance p^D from x.
  return density(params, t, *d, policy).value * ball.measure();
}

RadialLaw::RadialLaw(const KernelParams& params, double t, double coverage, const SeriesPolicy& policy)
    : params_(params), t_(t), policy_(policy) {
  check_time(t);
  if (!(coverage > 0.0 && coverage < 1.0)) throw ConfigError("coverage must lie in (0, 1)");
  const double lnp = std::log(static_cast<double>(params.p));
  const double centre = std::log(params.sigma * t) / (params.b * lnp);
  if (!(std::abs(centre) < kValuationLimit))
    throw NumericError("radial window centre outside the valuation clamp");
  lo_ = static_cast<int>(std::lround(centre));
  hi_ = lo_;
  while (ball_mass(params, t, lo_ - 1, policy).value > 0.5 * coverage) {
    if (--lo_ <= -kValuationLimit) throw NumericError("radial window exceeds the valuation clamp");
  }
  while (tail_mass(params, t, hi_, policy).value > 0.5 * coverage) {
    if (++hi_ >= kValuationLimit) throw NumericError("radial window exceeds the valuation clamp");
  }
  truncated_ = ball_mass(params, t, lo_ - 1, policy).value + tail_mass(params, t, hi_, policy).value;
  const auto n = static_cast<std::size_t>(hi_ - lo_ + 1);
  mass_.resize(n);
  density_.resize(n);
  cdf_.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int m = lo_ + static_cast<int>(i);
    mass_[i] = sphere_mass(params, t, m, policy).value;
    density_[i] = density(params, t, m, policy).value;
    acc += mass_[i];
    cdf_[i] = acc;
  }
}

double RadialLaw::mass(int m) const {
  if (m < lo_ || m > hi_) return 0.0;
  return mass_[static_cast<std::size_t>(m - lo_)];
}

double RadialLaw::density_at(int m) const {
  if (m >= lo_ && m <= hi_) return density_[static_cast<std::size_t>(m - lo_)];
  return density(params_, t_, m, policy_).value;
}

int RadialLaw::sample_radius(RngStream& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return lo_ + static_cast<int>(it - cdf_.begin());
}

RadialConvolution radial_convolution(const RadialLaw& a, const RadialLaw& b) {
  if (a.params().p != b.params().p) throw ConfigError("radial_convolution: prime mismatch");
  const double p = static_cast<double>(a.params().p);
  const int top = std::max(a.hi(), b.hi());
  // Cancellation of equal leading digits feeds mass geometrically below
  // the common window; extend far enough for it to fall under 1e-18.
  const int ext = static_cast<int>(std::ceil(60.0 / std::log2(p))) + 1;
  const int lo = std::min(a.lo(), b.lo()) - ext;
  const auto n = static_cast<std::size_t>(top - lo + 1);
  RadialConvolution out{lo, std::vector<double>(n, 0.0)};

  std::vector<double> below_a(n, 0.0), below_b(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const int m = lo + static_cast<int>(i) - 1;
    below_a[i] = below_a[i - 1] + a.mass(m);
    below_b[i] = below_b[i - 1] + b.mass(m);
  }
  double cancel = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const int m = lo + static_cast<int>(i);
    const double pa = a.mass(m), pb = b.mass(m);
    out.mass[i] = pa * below_b[i] + pb * below_a[i] + pa * pb * (p - 2.0) / (p - 1.0) + cancel;
    cancel = (cancel + pa * pb) / p;
  }
  return out;
}

}  // namespace adelic
