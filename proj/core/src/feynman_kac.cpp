#include "adelic/feynman_kac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adelic/error.hpp"
#include "adelic/parallel.hpp"
#include "adelic/primes.hpp"
#include "adelic/stats.hpp"

namespace adelic {

const char* to_string(ActionMode mode) { return mode == ActionMode::exact ? "exact" : "quadrature"; }

namespace {

struct BlockResult {
  RunningStats stats;
  double bias = 0.0;
};

BlockResult merge_blocks(const BlockResult& a, const BlockResult& b) {
  return {RunningStats::merge(a.stats, b.stats), a.bias + b.bias};
}

std::size_t block_count(std::size_t n, std::size_t block) { return (n + block - 1) / block; }

double step_for(const FKRequest& req) { return req.h > 0.0 ? req.h : req.t / 1024.0; }

std::size_t midpoint_steps(double t, double h) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t / h - 1e-9)));
}

const PAdic& held_value(const PathSample& path, double s) {
  if (const auto* e = std::get_if<EventPath>(&path)) return e->position_at(s);
  const auto& sk = std::get<PathSkeleton>(path);
  auto it = std::upper_bound(sk.times.begin(), sk.times.end(), s);
  return sk.values[static_cast<std::size_t>(std::distance(sk.times.begin(), it)) - 1];
}

const PAdic& end_value(const PathSample& path) {
  if (const auto* e = std::get_if<EventPath>(&path)) return e->end();
  return std::get<PathSkeleton>(path).end();
}

void validate_common(const FKRequest& req) {
  if (!(req.t > 0.0) || !std::isfinite(req.t)) throw ConfigError("time must be positive");
  if (!(req.b > 0.0)) throw ConfigError("b must be positive");
  if (req.n_paths < 2) throw ConfigError("need at least two paths");
  if (req.block_size == 0) throw ConfigError("block size must be positive");
  if (req.N == 0 || req.N > prime_table().size()) throw ConfigError("truncation N outside the prime table");
  if (req.h < 0.0) throw ConfigError("quadrature step must be nonnegative");
  auto check_index = [&](std::optional<std::size_t> m, const char* what) {
    if (m && *m >= req.N) throw ConfigError(std::string(what) + " uses a prime beyond the truncation");
  };
  check_index(req.alpha.max_index(), "observable");
  check_index(req.v.max_index(), "potential");
  check_index(req.x.max_active_index(), "start point");
  if (req.y) check_index(req.y->max_active_index(), "end point");
  for (const auto& [i, f] : req.alpha.factors())
    if (!req.x.is_active(i) && !f.is_vacuum())
      throw ConfigError("non-vacuum observable factor at an unresolved start component");
  for (const auto& [i, c] : req.v.components())
    if (!req.x.is_active(i) && !c.shape.is_vacuum())
      throw ConfigError("non-vacuum potential component at an unresolved start component");
  if (req.mode == ActionMode::exact && req.potential)
    throw ConfigError("callback potentials need quadrature mode");
}

std::complex<double> observable_at_end(const SimpleAdelicSB& alpha, const AdelicPathBundle& bundle) {
  std::complex<double> v = 1.0;
  for (std::size_t i = 0; i < bundle.paths.size(); ++i) {
    const SBFunction* f = alpha.factor(i);
    const PAdic& end = end_value(bundle.paths[i]);
    v *= f ? (*f)(end) : std::complex<double>(end.in_ball(PAdic::zero(end.prime()), 0) ? 1.0 : 0.0);
    if (v == 0.0) break;
  }
  return v;
}

std::complex<double> observable_at(const SimpleAdelicSB& alpha, const AdelicPoint& x, std::size_t N) {
  std::complex<double> v = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    const PAdic* xi = x.component(i);
    if (!xi) continue;
    v *= alpha.factor_value(i, *xi);
  }
  return v;
}

enum class Target { full, potential_part };

FKEstimate run_expectation(const FKRequest& req, Target target) {
  validate_common(req);
  PathMode mode = PathMode::events(0);
  mode.resolution_by_prime = fk_resolutions(req.alpha, req.v, req.N);
  const double h = step_for(req);
  const bool weighted = req.potential || !req.v.is_zero();
  const RngStream base(req.seed, 0);
  const std::size_t n_blocks = block_count(req.n_paths, req.block_size);
  std::vector<BlockResult> blocks(n_blocks);
  double certificate = 1.0;
  {
    AdelicPathSampler probe(req.sigma, req.b, req.t, mode, req.N);
    certificate = probe.tail_certificate();
  }
  parallel_for_blocks(n_blocks, req.workers, [&](std::size_t blk) {
    AdelicPathSampler sampler(req.sigma, req.b, req.t, mode, req.N);
    BlockResult out;
    const std::size_t first = blk * req.block_size;
    const std::size_t last = std::min(req.n_paths, first + req.block_size);
    for (std::size_t path = first; path < last; ++path) {
      const AdelicPathBundle bundle = sampler.sample(req.x, base.substream(path));
      const std::complex<double> obs = observable_at_end(req.alpha, bundle);
      double weight = 1.0;
      if (weighted && obs != 0.0) {
        if (req.mode == ActionMode::exact) {
          weight = std::exp(-action_integral(bundle, req.v, req.t, ActionMode::exact));
        } else {
          const double coarse = req.potential ? action_integral(bundle, req.potential, req.t, h)
                                              : action_integral(bundle, req.v, req.t, ActionMode::quadrature, h);
          const double fine = req.potential
                                  ? action_integral(bundle, req.potential, req.t, 0.5 * h)
                                  : action_integral(bundle, req.v, req.t, ActionMode::quadrature, 0.5 * h);
          weight = std::exp(-coarse);
          out.bias += std::abs(weight - std::exp(-fine)) * std::abs(obs);
        }
      }
      out.stats.add(target == Target::full ? weight * obs : (weight - 1.0) * obs);
    }
    blocks[blk] = out;
  });
  const BlockResult total = pairwise_reduce(std::move(blocks), merge_blocks);
  FKEstimate est;
  est.value = total.stats.mean;
  est.std_error = total.stats.std_error();
  est.n_paths = total.stats.n;
  est.cutoff = req.N;
  est.tail_certificate = certificate;
  est.mode = req.mode;
  est.quadrature_bias = total.bias / static_cast<double>(req.n_paths);
  return est;
}

struct BridgeComponent {
  std::size_t index;
  const SimplePotential::Component* potential;
  EventBridgeSampler sampler;
};

// Mean of exp(-sum of component actions) over independent bridges.
template <class StreamFor>
RunningStats bridge_expectation(const std::vector<BridgeComponent>& comps, const FKRequest& req,
                                StreamFor stream_for) {
  const double h = step_for(req);
  const std::size_t n_blocks = block_count(req.n_paths, req.block_size);
  std::vector<RunningStats> blocks(n_blocks);
  parallel_for_blocks(n_blocks, req.workers, [&](std::size_t blk) {
    RunningStats out;
    const std::size_t first = blk * req.block_size;
    const std::size_t last = std::min(req.n_paths, first + req.block_size);
    for (std::size_t path = first; path < last; ++path) {
      const RngStream stream = stream_for(path);
      double action = 0.0;
      for (const auto& c : comps) {
        RngStream s = stream.substream(c.index);
        const EventPath bridge = c.sampler.sample(s);
        action += action_integral(bridge, c.potential->shape, c.potential->weight, req.t, req.mode, h);
      }
      out.add(std::exp(-action));
    }
    blocks[blk] = out;
  });
  return pairwise_reduce(std::move(blocks), RunningStats::merge);
}

struct KernelSetup {
  std::vector<double> densities;
  std::vector<BridgeComponent> comps;
};

KernelSetup kernel_setup(const FKRequest& req) {
  validate_common(req);
  if (!req.y) throw ConfigError("kernel estimates need an end point y");
  if (req.potential) throw ConfigError("kernel estimates take simple potentials only");
  for (const auto& [i, c] : req.v.components())
    if (!req.y->is_active(i) && !c.shape.is_vacuum())
      throw ConfigError("non-vacuum potential component at an unresolved end component");
  const auto res = fk_resolutions(req.alpha, req.v, req.N);
  KernelSetup out;
  for (std::size_t i = 0; i < req.N; ++i) {
    const auto params = req.sigma.params(i, req.b);
    if (!params) throw ConfigError("kernels need positive sigma at every simulated prime");
    const PAdic xi = req.x.representative(i), yi = req.y->representative(i);
    out.densities.push_back(transition_density(*params, req.t, xi, yi, req.policy));
    auto it = req.v.components().find(i);
    if (it != req.v.components().end() && it->second.weight > 0.0 && !it->second.shape.is_zero())
      out.comps.push_back({i, &it->second, EventBridgeSampler(*params, xi, yi, req.t, res.at(i), req.policy)});
  }
  return out;
}

double product(const std::vector<double>& v) {
  double p = 1.0;
  for (double x : v) p *= x;
  return p;
}

// Free factor of (pi_s (pi_t f))(x) per prime from the convolved radial law.
std::complex<double> composed_factor(const KernelParams& params, double s, double t, const SBFunction& f,
                                     const PAdic& x) {
  const RadialLaw ls(params, s), lt(params, t);
  const RadialConvolution w = radial_convolution(ls, lt);
  const double P = params.p;
  std::complex<double> total = 0.0;
  for (const auto& term : f.terms()) {
    const int r = term.ball.radius_exp();
    double prob = 0.0;
    if (term.ball.contains(x)) {
      double above = 0.0;
      for (std::size_t k = 0; k < w.mass.size(); ++k)
        if (w.lo + static_cast<int>(k) > r) above += w.mass[k];
      prob = 1.0 - above;
    } else {
      const int d = *x.distance_exponent(term.ball.center());
      prob = w.at(d) * std::pow(P, r - d) / (1.0 - 1.0 / P);
    }
    total += term.coeff * prob;
  }
  return total;
}

std::complex<double> free_head(const SigmaSequence& sigma, double b, double t, const SimpleAdelicSB& alpha,
                               const AdelicPoint& x, std::size_t N, const SeriesPolicy& policy) {
  std::complex<double> head = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint32_t p = nth_prime(i);
    const SBFunction* g = alpha.factor(i);
    const SBFunction f = g ? *g : SBFunction::vacuum(p);
    const PAdic xi = x.representative(i);
    const auto params = sigma.params(i, b);
    head *= (params && t > 0.0) ? free_factor(*params, t, f, xi, policy) : f(xi);
  }
  return head;
}

}  // namespace

std::map<std::size_t, int> fk_resolutions(const SimpleAdelicSB& alpha, const SimplePotential& v, std::size_t N) {
  std::map<std::size_t, int> out;
  for (std::size_t i = 0; i < N; ++i) {
    int r = std::min(0, alpha.finest_radius(i));
    if (auto fv = v.finest_radius(i)) r = std::min(r, *fv);
    out[i] = r;
  }
  return out;
}

double action_integral(const EventPath& path, const SBFunction& shape, double weight, double t, ActionMode mode,
                       double h) {
  if (!(t >= 0.0)) throw ConfigError("action horizon must be nonnegative");
  if (weight == 0.0 || shape.terms().empty()) return 0.0;
  if (shape.prime() != path.params.p) throw ConfigError("potential prime does not match the path");
  if (mode == ActionMode::exact) {
    if (auto r = shape.finest_radius(); r && *r < path.resolution)
      throw ConfigError("path resolution too coarse for exact mode");
    double sum = 0.0, prev = 0.0;
    const PAdic* pos = &path.start;
    for (const auto& e : path.events) {
      if (e.time > t) break;
      sum += shape(*pos).real() * (e.time - prev);
      prev = e.time;
      pos = &e.position;
    }
    sum += shape(*pos).real() * (t - prev);
    return weight * sum;
  }
  if (!(h > 0.0)) h = t / 1024.0;
  const std::size_t n = midpoint_steps(t, h);
  const double step = t / static_cast<double>(n);
  double sum = 0.0;
  std::size_t next = 0;
  const PAdic* pos = &path.start;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = (static_cast<double>(j) + 0.5) * step;
    while (next < path.events.size() && path.events[next].time <= s) pos = &path.events[next++].position;
    sum += shape(*pos).real();
  }
  return weight * sum * step;
}

double action_integral(const PathSkeleton& path, const SBFunction& shape, double weight, double t,
                       ActionMode mode) {
  if (mode == ActionMode::exact) throw ConfigError("path resolution too coarse for exact mode");
  if (weight == 0.0 || shape.terms().empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < path.times.size() && path.times[k] < t; ++k) {
    const double next = k + 1 < path.times.size() ? std::min(path.times[k + 1], t) : t;
    sum += shape(path.values[k]).real() * (next - path.times[k]);
  }
  return weight * sum;
}

double action_integral(const AdelicPathBundle& bundle, const SimplePotential& v, double t, ActionMode mode,
                       double h) {
  double total = 0.0;
  for (const auto& [i, c] : v.components()) {
    if (i >= bundle.paths.size()) throw ConfigError("potential component beyond the bundle cutoff");
    const PathSample& path = bundle.paths[i];
    if (const auto* e = std::get_if<EventPath>(&path))
      total += action_integral(*e, c.shape, c.weight, t, mode, h);
    else
      total += action_integral(std::get<PathSkeleton>(path), c.shape, c.weight, t, mode);
  }
  return total;
}

double action_integral(const AdelicPathBundle& bundle, const PotentialFn& v, double t, double h) {
  if (!(h > 0.0)) h = t / 1024.0;
  const std::size_t n = midpoint_steps(t, h);
  const double step = t / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = (static_cast<double>(j) + 0.5) * step;
    AdelicPoint a;
    for (std::size_t i = 0; i < bundle.paths.size(); ++i) a.set(i, held_value(bundle.paths[i], s));
    const double value = v(a);
    if (!(value >= 0.0) || !std::isfinite(value)) throw ConfigError("potential must be finite and nonnegative");
    sum += value;
  }
  return sum * step;
}

FKEstimate fk_expectation(const FKRequest& req) { return run_expectation(req, Target::full); }

std::complex<double> free_factor(const KernelParams& params, double t, const SBFunction& f, const PAdic& x,
                                 const SeriesPolicy& policy) {
  if (f.prime() != params.p) throw ConfigError("free_factor: prime mismatch");
  std::complex<double> v = 0.0;
  for (const auto& term : f.terms()) v += term.coeff * ball_probability(params, t, term.ball, x, policy);
  return v;
}

ComplexInterval free_propagate(const SigmaSequence& sigma, double b, double t, const SimpleAdelicSB& alpha,
                               const AdelicPoint& x, std::size_t N, const SeriesPolicy& policy) {
  if (!(t > 0.0)) throw ConfigError("time must be positive");
  if (auto m = alpha.max_index(); m && *m >= N) throw ConfigError("observable uses a prime beyond N");
  if (auto m = x.max_active_index(); m && *m >= N) throw ConfigError("start point uses a prime beyond N");
  for (const auto& [i, f] : alpha.factors())
    if (!x.is_active(i) && !f.is_vacuum())
      throw ConfigError("non-vacuum observable factor at an unresolved start component");
  const std::complex<double> head = free_head(sigma, b, t, alpha, x, N, policy);
  // A vacuum factor stays at least as large as the no-exit probability.
  const double lo = std::exp(-t * sigma.tail_beta(N, b).hi);
  return {head * (0.5 * (1.0 + lo)), std::abs(head) * 0.5 * (1.0 - lo)};
}

FKEstimate fk_kernel(const FKRequest& req) {
  const KernelSetup setup = kernel_setup(req);
  const double rho = product(setup.densities);
  FKEstimate est;
  est.cutoff = req.N;
  est.mode = req.mode;
  est.density = rho;
  est.tail_certificate = tail_certificate(req.sigma, req.b, req.t, req.N);
  if (setup.comps.empty()) {
    est.value = rho;
    est.bridge_factor = 1.0;
    est.bridge_std_error = 0.0;
    est.n_paths = req.n_paths;
    return est;
  }
  const RngStream base(req.seed, 0);
  const RunningStats s = bridge_expectation(setup.comps, req, [&](std::size_t path) { return base.substream(path); });
  est.value = s.mean * rho;
  est.std_error = s.std_error() * rho;
  est.n_paths = s.n;
  est.bridge_factor = s.mean.real();
  est.bridge_std_error = s.std_error();
  return est;
}

KernelProduct fk_kernel_product(const FKRequest& req) {
  const KernelSetup setup = kernel_setup(req);
  KernelProduct out;
  double bridge = 1.0;
  std::vector<std::pair<double, double>> parts;
  // A separate stream id keeps the factors independent of fk_kernel draws.
  const RngStream base(req.seed, 1);
  for (const auto& c : setup.comps) {
    const RngStream comp_base = base.substream(c.index);
    const std::vector<BridgeComponent> one{c};
    const RunningStats s = bridge_expectation(one, req, [&](std::size_t path) { return comp_base.substream(path); });
    FKEstimate f;
    f.cutoff = req.N;
    f.mode = req.mode;
    f.n_paths = s.n;
    f.density = setup.densities[c.index];
    f.bridge_factor = s.mean.real();
    f.bridge_std_error = s.std_error();
    f.value = s.mean.real() * setup.densities[c.index];
    f.std_error = s.std_error() * setup.densities[c.index];
    out.factors.emplace(c.index, f);
    bridge *= s.mean.real();
    parts.emplace_back(s.mean.real(), s.std_error());
  }
  // Delta-method error of the product of independent factors.
  double var = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    double others = 1.0;
    for (std::size_t l = 0; l < parts.size(); ++l)
      if (l != k) others *= parts[l].first;
    var += others * others * parts[k].second * parts[k].second;
  }
  const double rho = product(setup.densities);
  out.total.cutoff = req.N;
  out.total.mode = req.mode;
  out.total.n_paths = req.n_paths;
  out.total.density = rho;
  out.total.bridge_factor = bridge;
  out.total.bridge_std_error = std::sqrt(var);
  out.total.value = bridge * rho;
  out.total.std_error = std::sqrt(var) * rho;
  out.total.tail_certificate = tail_certificate(req.sigma, req.b, req.t, req.N);
  return out;
}

SemigroupReport semigroup_check(const FKRequest& base, double s, const std::vector<AdelicPoint>& points) {
  const double t = base.t;
  if (!(s >= 0.0) || !(t >= 0.0)) throw ConfigError("semigroup times must be nonnegative");
  SemigroupReport rep;
  rep.analytic = base.v.is_zero() && !base.potential;
  if (rep.analytic) {
    for (const AdelicPoint& x : points) {
      const std::complex<double> direct = free_head(base.sigma, base.b, s + t, base.alpha, x, base.N, base.policy);
      std::complex<double> composed;
      if (s == 0.0 || t == 0.0) {
        composed = free_head(base.sigma, base.b, s + t, base.alpha, x, base.N, base.policy);
      } else {
        composed = 1.0;
        for (std::size_t i = 0; i < base.N; ++i) {
          const std::uint32_t p = nth_prime(i);
          const SBFunction* g = base.alpha.factor(i);
          const SBFunction f = g ? *g : SBFunction::vacuum(p);
          const PAdic xi = x.representative(i);
          const auto params = base.sigma.params(i, base.b);
          composed *= params ? composed_factor(*params, s, t, f, xi) : f(xi);
        }
      }
      rep.direct.push_back(direct);
      rep.composed.push_back(composed);
      rep.combined_se.push_back(0.0);
      rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(direct - composed));
    }
    return rep;
  }
  if (s + t == 0.0) throw ConfigError("Monte Carlo semigroup check needs s + t > 0");
  const auto n_side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(base.n_paths))));
  for (std::size_t k = 0; k < points.size(); ++k) {
    FKRequest direct_req = base;
    direct_req.t = s + t;
    direct_req.x = points[k];
    direct_req.seed = base.seed + 7919 * (k + 1);
    const FKEstimate direct = fk_expectation(direct_req);
    FKEstimate composed = direct;
    if (s > 0.0 && t > 0.0) {
      FKRequest outer_req = base;
      outer_req.t = s;
      outer_req.x = points[k];
      validate_common(outer_req);
      PathMode mode = PathMode::events(0);
      mode.resolution_by_prime = fk_resolutions(base.alpha, base.v, base.N);
      const RngStream outer_base(base.seed + k, 2);
      const RngStream inner_seeds(base.seed + k, 3);
      std::vector<std::complex<double>> values(n_side);
      parallel_for_blocks(n_side, base.workers, [&](std::size_t o) {
        AdelicPathSampler sampler(base.sigma, base.b, s, mode, base.N);
        const AdelicPathBundle bundle = sampler.sample(points[k], outer_base.substream(o));
        double action = 0.0;
        if (base.mode == ActionMode::exact)
          action = action_integral(bundle, base.v, s, ActionMode::exact);
        else if (base.potential)
          action = action_integral(bundle, base.potential, s, step_for(outer_req));
        else
          action = action_integral(bundle, base.v, s, ActionMode::quadrature, step_for(outer_req));
        FKRequest inner = base;
        inner.t = t;
        inner.n_paths = n_side;
        inner.workers = 1;
        AdelicPoint mid;
        for (std::size_t i = 0; i < base.N; ++i) mid.set(i, end_value(bundle.paths[i]));
        inner.x = mid;
        RngStream seeds = inner_seeds.substream(o);
        inner.seed = seeds.next_u64();
        values[o] = std::exp(-action) * fk_expectation(inner).value;
      });
      RunningStats st;
      for (const auto& v : values) st.add(v);
      composed.value = st.mean;
      composed.std_error = st.std_error();
    }
    const double se = std::hypot(direct.std_error, composed.std_error);
    const double diff = std::abs(direct.value - composed.value);
    rep.direct.push_back(direct.value);
    rep.composed.push_back(composed.value);
    rep.combined_se.push_back(se);
    rep.max_discrepancy = std::max(rep.max_discrepancy, diff);
    if (se > 0.0) rep.max_z = std::max(rep.max_z, diff / se);
  }
  return rep;
}

GeneratorReport generator_check(const FKRequest& base, const std::vector<double>& t_ladder) {
  if (t_ladder.size() < 2) throw ConfigError("generator check needs at least two times");
  validate_common(base);
  std::vector<double> head;
  for (std::size_t i = 0; i < base.N; ++i) head.push_back(base.sigma.sigma(i));
  const SigmaSequence truncated = SigmaSequence::explicit_list(head);

  GeneratorReport rep;
  const std::complex<double> a0 = observable_at(base.alpha, base.x, base.N);
  const ComplexInterval delta = adelic_vladimirov_apply(truncated, base.b, base.alpha, base.x, base.N, base.policy);
  const bool weighted = base.potential || !base.v.is_zero();
  double vx = 0.0;
  if (weighted) {
    if (base.potential) {
      AdelicPoint full;
      for (std::size_t i = 0; i < base.N; ++i) full.set(i, base.x.representative(i));
      vx = base.potential(full);
    } else {
      vx = base.v(base.x);
    }
  }
  rep.limit = {-delta.center - vx * a0, delta.radius};
  std::vector<double> lx, ly;
  for (double t : t_ladder) {
    if (!(t > 0.0)) throw ConfigError("generator ladder times must be positive");
    const std::complex<double> free = free_head(truncated, base.b, t, base.alpha, base.x, base.N, base.policy);
    std::complex<double> q = (free - a0) / t;
    double se = 0.0;
    if (weighted) {
      FKRequest req = base;
      req.t = t;
      const FKEstimate pot = run_expectation(req, Target::potential_part);
      q += pot.value / t;
      se = pot.std_error / t;
    }
    const double err = std::abs(q - rep.limit.center);
    rep.t.push_back(t);
    rep.difference_quotient.push_back(q);
    rep.std_error.push_back(se);
    rep.error.push_back(err);
    lx.push_back(std::log(t));
    ly.push_back(std::log(std::max(err, 1e-300)));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k] / n;
    my += ly[k] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  rep.order = sxy / sxx;
  return rep;
}

}  // namespace adelic
