#include "adelic/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adelic/error.hpp"

namespace adelic {

namespace {

void check_epochs(std::span<const double> epochs) {
  if (epochs.empty() || epochs.front() != 0.0) throw ConfigError("epochs must start at 0");
  for (std::size_t i = 1; i < epochs.size(); ++i)
    if (!(epochs[i] > epochs[i - 1])) throw ConfigError("epochs must be strictly increasing");
}

const RadialLaw& cached_law(std::map<double, std::unique_ptr<RadialLaw>>& cache, const KernelParams& params,
                            double dt, double coverage) {
  auto it = cache.find(dt);
  if (it == cache.end()) it = cache.emplace(dt, std::make_unique<RadialLaw>(params, dt, coverage)).first;
  return *it->second;
}

constexpr long kMaxBridgeTries = 10'000'000;

}  // namespace

const PAdic& EventPath::position_at(double s) const {
  auto it = std::upper_bound(events.begin(), events.end(), s,
                             [](double v, const PathEvent& e) { return v < e.time; });
  return it == events.begin() ? start : std::prev(it)->position;
}

IncrementSampler::IncrementSampler(const KernelParams& params, double coverage)
    : params_(params), coverage_(coverage) {}

const RadialLaw& IncrementSampler::law(double dt) { return cached_law(laws_, params_, dt, coverage_); }

PAdic IncrementSampler::sample(double dt, RngStream& rng, int K) {
  const RadialLaw& l = law(dt);
  return uniform_sphere(rng, params_.p, l.sample_radius(rng), K);
}

PAdic sample_increment(const KernelParams& params, double dt, RngStream& rng, int K) {
  IncrementSampler inc(params);
  return inc.sample(dt, rng, K);
}

PathSkeleton sample_skeleton(IncrementSampler& inc, std::span<const double> epochs, const PAdic& start,
                             RngStream& rng, int K) {
  check_epochs(epochs);
  PathSkeleton out;
  out.times.assign(epochs.begin(), epochs.end());
  out.values.reserve(epochs.size());
  out.values.push_back(start);
  for (std::size_t i = 1; i < epochs.size(); ++i) {
    const double dt = epochs[i] - epochs[i - 1];
    out.truncated_mass = std::max(out.truncated_mass, inc.law(dt).truncated_mass());
    out.values.push_back(out.values.back() + inc.sample(dt, rng, K));
  }
  return out;
}

PathSkeleton sample_skeleton(const KernelParams& params, std::span<const double> epochs, const PAdic& start,
                             RngStream& rng, int K) {
  IncrementSampler inc(params);
  PathSkeleton out = sample_skeleton(inc, epochs, start, rng, K);
  out.params = params;
  return out;
}

EventPath sample_event_path(const KernelParams& params, const PAdic& start, double T, int r_min,
                            RngStream& rng) {
  if (!(T > 0.0)) throw ConfigError("event path horizon must be positive");
  if (start.prime() != params.p) throw ConfigError("event path: prime mismatch");
  if (start.absolute_precision() < -r_min)
    throw PrecisionError("event path start is not resolved at the requested resolution");
  EventPath path;
  path.params = params;
  path.resolution = r_min;
  path.start = start;
  path.horizon = T;
  const double rate = exit_rate(params, r_min);
  const double log_q = -params.b * std::log(static_cast<double>(params.p));
  double time = rng.exponential(rate);
  const PAdic* current = &path.start;
  while (time <= T) {
    const double k_real = 1.0 + std::floor(std::log(rng.uniform_pos()) / log_q);
    if (k_real > kValuationLimit) throw NumericError("overshoot beyond the valuation clamp");
    const int k = static_cast<int>(k_real);
    // k digits above the resolution: the jump is resolved modulo p^{-r_min}.
    PAdic next = *current + uniform_sphere(rng, params.p, r_min + k, k);
    path.events.push_back({time, std::move(next)});
    current = &path.events.back().position;
    time += rng.exponential(rate);
  }
  return path;
}

bool sup_norm_exceeds(const EventPath& path, int r) {
  if (r < path.resolution) throw ConfigError("sup_norm_exceeds: radius below the path resolution");
  for (const auto& e : path.events)
    if (!e.position.in_ball(path.start, r)) return true;
  return false;
}

PAdic sample_conditional(const RadialLaw& left, const RadialLaw& right, const PAdic& za, const PAdic& zb,
                         RngStream& rng, int K) {
  const std::uint32_t p = left.params().p;
  const double P = p;
  struct Class {
    int j, k;
    double w;
  };
  std::vector<Class> classes;
  const int lo = std::min(left.lo(), right.lo());
  const int hi = std::max(left.hi(), right.hi());
  const PAdic delta = zb - za;
  const auto d = delta.norm_exponent();
  if (!d) {
    for (int j = lo; j <= hi; ++j) classes.push_back({j, j, left.mass(j) * right.density_at(j)});
  } else {
    const int D = *d;
    const double rd = right.density_at(D), ld = left.density_at(D);
    for (int j = left.lo(); j <= std::min(left.hi(), D - 1); ++j) classes.push_back({j, D, left.mass(j) * rd});
    for (int k = right.lo(); k <= std::min(right.hi(), D - 1); ++k)
      classes.push_back({D, k, ld * right.mass(k)});
    if (p > 2) classes.push_back({D, D, ld * rd * std::pow(P, D - 1) * (P - 2.0)});
    for (int j = std::max(D + 1, lo); j <= hi; ++j) classes.push_back({j, j, left.mass(j) * right.density_at(j)});
  }
  double total = 0.0;
  for (const auto& c : classes) total += c.w;
  if (!(total > 1e-300)) throw NumericError("bridge endpoints too far apart for the horizon");
  const double u = rng.uniform() * total;
  std::size_t pick = 0;
  for (double acc = 0.0; pick + 1 < classes.size(); ++pick) {
    acc += classes[pick].w;
    if (u < acc) break;
  }
  const Class& c = classes[pick];
  if (!d || c.j != *d) return za + uniform_sphere(rng, p, c.j, K);
  if (c.k < c.j) return zb - uniform_sphere(rng, p, c.k, K);
  // |z - za| = |z - zb| = p^D: the leading digit avoids 0 and that of delta.
  const std::uint32_t avoid = delta.digits().front();
  std::uint32_t lead = 1 + rng.uniform_below(p - 2);
  if (lead >= avoid) ++lead;
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(K));
  digits[0] = lead;
  for (int i = 1; i < K; ++i) digits[static_cast<std::size_t>(i)] = rng.uniform_below(p);
  return za + PAdic::from_digits(p, -c.j, std::move(digits));
}

BridgeSampler::BridgeSampler(const KernelParams& params, double t, std::span<const double> epochs, int K)
    : params_(params), K_(K) {
  if (!(t > 0.0)) throw ConfigError("bridge horizon must be positive");
  times_.push_back(0.0);
  for (double e : epochs) {
    if (!(e > times_.back() && e < t)) throw ConfigError("bridge epochs must increase strictly inside (0, t)");
    times_.push_back(e);
  }
  times_.push_back(t);
  auto law = [&](double dt) { return &cached_law(laws_, params_, dt, RadialLaw::kDefaultCoverage); };
  // Midpoint recursion order, fixed at construction.
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, times_.size() - 1}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (b - a < 2) continue;
    const std::size_t m = (a + b) / 2;
    steps_.push_back({a, m, b, law(times_[m] - times_[a]), law(times_[b] - times_[m])});
    stack.push_back({m, b});
    stack.push_back({a, m});
  }
}

PathSkeleton BridgeSampler::sample(const PAdic& x, const PAdic& y, RngStream& rng) const {
  if (x.prime() != params_.p || y.prime() != params_.p) throw ConfigError("bridge: prime mismatch");
  PathSkeleton out;
  out.params = params_;
  out.times = times_;
  out.values.assign(times_.size(), x);
  out.values.back() = y;
  for (const auto& s : steps_) {
    out.values[s.mid] = sample_conditional(*s.left, *s.right, out.values[s.lo], out.values[s.hi], rng, K_);
    out.truncated_mass = std::max({out.truncated_mass, s.left->truncated_mass(), s.right->truncated_mass()});
  }
  return out;
}

PathSkeleton sample_bridge(const KernelParams& params, const BridgeSpec& spec, std::span<const double> epochs,
                           RngStream& rng, int K) {
  if (spec.x.prime() != spec.y.prime()) throw ConfigError("bridge endpoints have different primes");
  BridgeSampler sampler(params, spec.t, epochs, K);
  return sampler.sample(spec.x, spec.y, rng);
}

double transition_density(const KernelParams& params, double t, const PAdic& x, const PAdic& y,
                          const SeriesPolicy& policy) {
  const auto d = x.distance_exponent(y);
  return d ? density(params, t, *d, policy).value : density_at_origin(params, t, policy).value;
}

EventBridgeSampler::EventBridgeSampler(const KernelParams& params, const PAdic& x, const PAdic& y, double t,
                                       int r, const SeriesPolicy& policy)
    : params_(params), x_(x), y_(y), t_(t), r_(r) {
  if (!(t > 0.0)) throw ConfigError("bridge horizon must be positive");
  rho_ = transition_density(params, t, x, y, policy);
  if (!(rho_ > 1e-300)) throw NumericError("bridge endpoints too far apart for the horizon");
  const double mu = ball_measure(params.p, r);
  const double stay = exit_prob(params, t, r);
  f_moved_ = 1.0 / mu;
  f_stay_ = 0.0;
  if (y.in_ball(x, r) && stay > 0.0) {
    // Paths that exited end Haar-uniform in their final ball, so the
    // no-exit share of the density is what remains of rho.
    const double moved_back = ball_mass(params, t, r, policy).value - stay;
    f_stay_ = std::max(0.0, (rho_ - moved_back / mu) / stay);
  }
  bound_ = std::max(f_stay_, f_moved_);
}

EventPath EventBridgeSampler::sample(RngStream& rng) const {
  for (long tries = 0; tries < kMaxBridgeTries; ++tries) {
    EventPath path = sample_event_path(params_, x_, t_, r_, rng);
    const double u = rng.uniform() * bound_;
    if (path.events.empty()) {
      if (u < f_stay_) return path;
    } else if (path.end().in_ball(y_, r_) && u < f_moved_) {
      return path;
    }
  }
  throw NumericError("event bridge rejection sampler exhausted " + std::to_string(kMaxBridgeTries) + " tries");
}

}  // namespace adelic
