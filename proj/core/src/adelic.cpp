#include "adelic/adelic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adelic/error.hpp"

namespace adelic {

SigmaSequence SigmaSequence::explicit_list(std::vector<double> head) {
  if (head.empty()) throw ConfigError("explicit sigma list is empty");
  SigmaSequence s;
  s.sigma_ = std::move(head);
  s.head_count_ = s.sigma_.size();
  s.build();
  return s;
}

SigmaSequence SigmaSequence::power_law(double C, double s_exp, std::vector<double> head) {
  if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("sigma tail constant must be positive");
  if (!(s_exp > 1.0) || !std::isfinite(s_exp))
    throw ConfigError("sigma tail C p^{-s} is not summable unless s > 1");
  SigmaSequence s;
  s.sigma_ = std::move(head);
  s.head_count_ = s.sigma_.size();
  s.C_ = C;
  s.s_ = s_exp;
  s.build();
  return s;
}

void SigmaSequence::build() {
  const auto& primes = prime_table();
  if (head_count_ > primes.size()) throw ConfigError("explicit sigma list longer than the prime table");
  for (double v : sigma_)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("explicit sigma entries must be positive");
  sigma_.resize(primes.size(), 0.0);
  if (has_tail())
    for (std::size_t i = head_count_; i < primes.size(); ++i)
      sigma_[i] = C_ * std::pow(static_cast<double>(primes[i]), -s_);
  suffix_.assign(primes.size() + 1, 0.0);
  for (std::size_t i = primes.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + sigma_[i];
}

double SigmaSequence::sigma(std::size_t i) const {
  if (i >= sigma_.size()) throw ConfigError("prime index beyond the prime table");
  return sigma_[i];
}

std::optional<KernelParams> SigmaSequence::params(std::size_t i, double b) const {
  const double s = sigma(i);
  if (s == 0.0) return std::nullopt;
  return KernelParams(nth_prime(i), b, s);
}

double SigmaSequence::beyond_table_bound() const {
  if (!has_tail()) return 0.0;
  const double P = prime_table().back();
  return C_ * std::pow(P, 1.0 - s_) / (s_ - 1.0);
}

Interval SigmaSequence::tail_sigma(std::size_t n) const {
  const double lo = suffix_[std::min(n, sigma_.size())];
  return {lo, lo + beyond_table_bound()};
}

Interval SigmaSequence::tail_beta(std::size_t n, double b) const {
  const auto& primes = prime_table();
  double lo = 0.0;
  for (std::size_t i = sigma_.size(); i-- > n;)
    if (sigma_[i] > 0.0) lo += sigma_[i] * alpha(primes[i], b);
  // alpha < 1, so the sigma remainder bounds the beta remainder.
  return {lo, lo + beyond_table_bound()};
}

AdelicPoint& AdelicPoint::set(std::size_t index, PAdic value) {
  if (value.prime() != nth_prime(index))
    throw ConfigError("adelic component " + std::to_string(index) + " has the wrong prime");
  active_.insert_or_assign(index, std::move(value));
  return *this;
}

const PAdic* AdelicPoint::component(std::size_t index) const {
  auto it = active_.find(index);
  return it == active_.end() ? nullptr : &it->second;
}

PAdic AdelicPoint::representative(std::size_t index) const {
  const PAdic* c = component(index);
  return c ? *c : PAdic::zero(nth_prime(index));
}

std::optional<std::size_t> AdelicPoint::max_active_index() const {
  if (active_.empty()) return std::nullopt;
  return active_.rbegin()->first;
}

std::optional<bool> AdelicPoint::equals(const AdelicPoint& other) const {
  bool unknown = false;
  auto one_sided = [&](const PAdic& v) {
    if (v.valuation() < 0 && !v.is_zero()) return false;
    unknown = true;
    return true;
  };
  for (const auto& [i, v] : active_) {
    const PAdic* w = other.component(i);
    if (!w) {
      if (!one_sided(v)) return false;
      continue;
    }
    const int n = std::min(v.absolute_precision(), w->absolute_precision());
    if (!v.congruent(*w, n)) return false;
  }
  for (const auto& [i, w] : other.active_)
    if (!is_active(i) && !one_sided(w)) return false;
  if (unknown) return std::nullopt;
  return true;
}

PathMode PathMode::skeleton(std::vector<double> epochs) {
  PathMode m;
  m.use_epochs = true;
  m.epochs = std::move(epochs);
  return m;
}

PathMode PathMode::events(int resolution) {
  PathMode m;
  m.resolution = resolution;
  return m;
}

int PathMode::resolution_for(std::size_t index) const {
  auto it = resolution_by_prime.find(index);
  return it == resolution_by_prime.end() ? resolution : it->second;
}

bool AdelicPathBundle::exits_unit_ball(std::size_t index) const {
  const PathSample& s = paths.at(index);
  if (const auto* e = std::get_if<EventPath>(&s)) {
    if (e->resolution > 0) throw ConfigError("event path too coarse to resolve Z_p");
    for (const auto& ev : e->events)
      if (ev.position.valuation() < 0 && !ev.position.is_zero()) return true;
    return e->start.valuation() < 0 && !e->start.is_zero();
  }
  const auto& sk = std::get<PathSkeleton>(s);
  for (const auto& v : sk.values)
    if (v.valuation() < 0 && !v.is_zero()) return true;
  return false;
}

double tail_certificate(const SigmaSequence& sigma, double b, double T, std::size_t N) {
  return std::exp(-T * sigma.tail_beta(N, b).hi);
}

AdelicPathSampler::AdelicPathSampler(const SigmaSequence& sigma, double b, double T, PathMode mode, std::size_t N)
    : sigma_(sigma), b_(b), T_(T), mode_(std::move(mode)), N_(N) {
  if (!(T > 0.0)) throw ConfigError("horizon must be positive");
  if (!(b > 0.0)) throw ConfigError("b must be positive");
  if (N > prime_table().size()) throw ConfigError("truncation beyond the prime table");
  if (mode_.use_epochs) {
    if (mode_.epochs.empty() || mode_.epochs.front() != 0.0 || mode_.epochs.back() > T)
      throw ConfigError("epochs must start at 0 and end by the horizon");
  }
  certificate_ = adelic::tail_certificate(sigma_, b_, T_, N_);
  for (std::size_t i = 0; i < N_; ++i) {
    params_.push_back(sigma_.params(i, b_));
    increments_.push_back(mode_.use_epochs && params_.back()
                              ? std::make_unique<IncrementSampler>(*params_.back())
                              : nullptr);
  }
}

AdelicPathBundle AdelicPathSampler::sample(const AdelicPoint& start, const RngStream& rng) {
  if (auto m = start.max_active_index(); m && *m >= N_)
    throw ConfigError("active prime index " + std::to_string(*m) + " beyond the truncation");
  AdelicPathBundle out;
  out.horizon = T_;
  out.cutoff = N_;
  out.tail_certificate = certificate_;
  out.params = params_;
  out.paths.reserve(N_);
  for (std::size_t i = 0; i < N_; ++i) {
    RngStream stream = rng.substream(i);
    const PAdic x = start.representative(i);
    if (!params_[i]) {
      // sigma_i = 0: the component is frozen at its start.
      EventPath frozen;
      frozen.params.p = nth_prime(i);
      frozen.params.b = b_;
      frozen.params.sigma = 0.0;
      frozen.resolution = mode_.resolution_for(i);
      frozen.start = x;
      frozen.horizon = T_;
      out.paths.emplace_back(std::move(frozen));
    } else if (mode_.use_epochs) {
      PathSkeleton sk = sample_skeleton(*increments_[i], mode_.epochs, x, stream, mode_.precision);
      sk.params = *params_[i];
      out.paths.emplace_back(std::move(sk));
    } else {
      out.paths.emplace_back(sample_event_path(*params_[i], x, T_, mode_.resolution_for(i), stream));
    }
  }
  return out;
}

AdelicPathBundle sample_adelic_path(const SigmaSequence& sigma, double b, double T, const PathMode& mode,
                                    const AdelicPoint& start, std::size_t N, const RngStream& rng) {
  AdelicPathSampler sampler(sigma, b, T, mode, N);
  return sampler.sample(start, rng);
}

std::size_t choose_truncation(const SigmaSequence& sigma, double b, double T, double eps, std::size_t min_primes) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (!(T >= 0.0)) throw ConfigError("horizon must be nonnegative");
  const auto& primes = prime_table();
  // Suffix sums of beta once, then scan upward.
  std::vector<double> suffix(primes.size() + 1, 0.0);
  for (std::size_t i = primes.size(); i-- > 0;) {
    const double s = sigma.sigma(i);
    suffix[i] = suffix[i + 1] + (s > 0.0 ? s * alpha(primes[i], b) : 0.0);
  }
  const double extra = sigma.beyond_table_bound();
  const double target = -std::log1p(-eps);
  for (std::size_t n = min_primes; n <= primes.size(); ++n)
    if (T * (suffix[n] + extra) <= target) return n;
  throw ConfigError("sigma tail cannot reach the requested certificate within the prime table");
}

Interval adelic_ball_probability(const SigmaSequence& sigma, double b, double t,
                                 const std::map<std::size_t, Ball>& balls, std::size_t N,
                                 const SeriesPolicy& policy) {
  if (!(t > 0.0)) throw ConfigError("time must be positive");
  if (!balls.empty() && balls.rbegin()->first >= N) throw ConfigError("ball specified for a prime beyond N");
  double head = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    auto it = balls.find(i);
    const auto params = sigma.params(i, b);
    const PAdic origin = PAdic::zero(nth_prime(i));
    if (!params) {
      const bool inside = it == balls.end() || it->second.contains(origin);
      head *= inside ? 1.0 : 0.0;
    } else if (it == balls.end()) {
      head *= ball_mass(*params, t, 0, policy).value;
    } else {
      if (it->second.prime() != params->p) throw ConfigError("ball prime does not match its index");
      head *= ball_probability(*params, t, it->second, origin, policy);
    }
  }
  // Each unconstrained tail factor lies in [exp(-sigma_i t), 1].
  const double tail_lo = std::exp(-t * sigma.tail_sigma(N).hi);
  return {head * tail_lo, head};
}

std::vector<double> poisson_binomial(const std::vector<double>& q) {
  std::vector<double> pmf(q.size() + 1, 0.0);
  pmf[0] = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t k = i + 1; k > 0; --k) pmf[k] = pmf[k] * (1.0 - q[i]) + pmf[k - 1] * q[i];
    pmf[0] *= 1.0 - q[i];
  }
  return pmf;
}

namespace {

std::vector<double> exit_probabilities(const SigmaSequence& sigma, double b, double T, std::size_t N) {
  std::vector<double> q(N);
  for (std::size_t i = 0; i < N; ++i) q[i] = -std::expm1(-T * sigma.beta(i, b));
  return q;
}

}  // namespace

ExitCountDistribution exit_count_pmf(const SigmaSequence& sigma, double b, double T, std::size_t N,
                                     std::size_t k_max) {
  if (!(T >= 0.0)) throw ConfigError("horizon must be nonnegative");
  if (N > prime_table().size()) throw ConfigError("truncation beyond the prime table");
  ExitCountDistribution d;
  d.T = T;
  d.cutoff = N;
  d.q = exit_probabilities(sigma, b, T, N);
  double head_beta = 0.0;
  for (std::size_t i = 0; i < N; ++i) head_beta += sigma.beta(i, b);
  const Interval tail = sigma.tail_beta(N, b);
  d.beta_total = {head_beta + tail.lo, head_beta + tail.hi};
  d.tail_beta_hi = tail.hi;
  d.tail_prob = -std::expm1(-T * tail.hi);
  std::vector<double> full = poisson_binomial(d.q);
  full.resize(std::max(full.size(), k_max + 1), 0.0);
  d.pmf.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(k_max + 1));
  const double delta = d.tail_prob;
  const double tb = T * d.beta_total.lo;
  // P(tail count = j) <= (sum of tail q_i)^j / j! <= lambda^j / j!.
  const double lambda = T * tail.hi;
  for (std::size_t k = 0; k <= k_max; ++k) {
    double conv = d.pmf[k];
    double uj = 1.0;
    for (std::size_t j = 1; j <= k; ++j) {
      uj *= lambda / static_cast<double>(j);
      conv += d.pmf[k - j] * std::min(1.0, uj);
    }
    const double hi = std::min(d.pmf[k] + delta * (1.0 - d.pmf[k]), conv);
    d.bounds.push_back({d.pmf[k] * (1.0 - delta), hi});
    d.moment_bound_terms.push_back(
        std::exp(-tb + static_cast<double>(k) * tb - std::lgamma(static_cast<double>(k) + 1.0)));
  }
  return d;
}

ExitMoment exit_count_moment(const SigmaSequence& sigma, double b, double T, std::size_t N, int m) {
  if (m < 1) throw ConfigError("moment order must be >= 1");
  const std::vector<double> pmf = poisson_binomial(exit_probabilities(sigma, b, T, N));
  ExitMoment out;
  out.order = m;
  for (std::size_t k = 1; k < pmf.size(); ++k) out.exact += std::pow(static_cast<double>(k), m) * pmf[k];
  double head_beta = 0.0;
  for (std::size_t i = 0; i < N; ++i) head_beta += sigma.beta(i, b);
  // The bound grows with beta, so its value at the lower end is conservative.
  const double tb = T * (head_beta + sigma.tail_beta(N, b).lo);
  const double e = std::exp(tb);
  double low = 0.0;
  for (int k = 1; k < m; ++k) low += std::pow(k, m) * std::exp(k * tb - std::lgamma(k + 1.0));
  const double high = std::exp(m * tb + m * std::log(static_cast<double>(m)) - std::lgamma(m + 1.0) + e);
  out.bound = std::exp(-tb) * (low + high);
  return out;
}

}  // namespace adelic
