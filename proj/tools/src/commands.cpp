#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "adelic/error.hpp"
#include "adelic/heat_kernel.hpp"
#include "adelic/parallel.hpp"
#include "adelic/primes.hpp"
#include "adelic/sampler.hpp"
#include "adelic_harness/harness.hpp"

namespace adelic::harness {

namespace {

using Row = std::vector<Cell>;

Cell num(double x) { return x; }
Cell integer(long long x) { return x; }
Cell text(std::string s) { return s; }
const Cell blank{};

std::vector<double> uniform_epochs(double T, std::size_t n) {
  std::vector<double> e(n + 1);
  for (std::size_t k = 0; k <= n; ++k) e[k] = T * static_cast<double>(k) / static_cast<double>(n);
  e.back() = T;
  return e;
}

// Integer counts summed over fixed blocks; the schedule cannot reorder them.
template <class Fn>
std::vector<long long> count_blocks(std::size_t n, unsigned workers, Fn per_block) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<long long> out(n_blocks, 0);
  parallel_for_blocks(n_blocks, workers, [&](std::size_t b) {
    out[b] = per_block(b * kBlock, std::min(n, (b + 1) * kBlock));
  });
  return out;
}

json adelic_derived(const SigmaSequence& sigma, double b, double T, std::size_t N) {
  json d;
  d["N"] = N;
  d["tail_certificate"] = tail_certificate(sigma, b, T, N);
  double head = 0.0, beta = 0.0;
  json per_prime = json::array();
  for (std::size_t i = 0; i < N; ++i) {
    head += sigma.sigma(i);
    beta += sigma.beta(i, b);
    if (i < 64)
      per_prime.push_back({{"prime", nth_prime(i)}, {"sigma", sigma.sigma(i)}, {"alpha", alpha(nth_prime(i), b)},
                           {"beta", sigma.beta(i, b)}});
  }
  d["sigma_partial_sum"] = head;
  d["beta_partial_sum"] = beta;
  const Interval ts = sigma.tail_sigma(N), tb = sigma.tail_beta(N, b);
  d["sigma_tail"] = {ts.lo, ts.hi};
  d["beta_tail"] = {tb.lo, tb.hi};
  d["primes"] = per_prime;
  return d;
}

double max_T(const ExperimentConfig& cfg) { return *std::max_element(cfg.T.begin(), cfg.T.end()); }

std::size_t needed_primes(const ExperimentConfig& cfg) {
  std::size_t need = 0;
  auto bump = [&](std::optional<std::size_t> m) {
    if (m) need = std::max(need, *m + 1);
  };
  bump(cfg.observable.max_index());
  bump(cfg.potential.max_index());
  for (const auto& x : cfg.points) bump(x.max_active_index());
  for (const auto& [x, y] : cfg.pairs) {
    bump(x.max_active_index());
    bump(y.max_active_index());
  }
  return need;
}

RunResult cmd_density(const ExperimentConfig& cfg) {
  const KernelParams params(cfg.p, cfg.b, single_sigma(cfg));
  RunResult out;
  out.table = {"adelic.density.v1", {"kind", "m", "density", "sphere_mass", "ball_mass"}, {}};
  double total = ball_mass(params, cfg.t, cfg.m_lo - 1).value + tail_mass(params, cfg.t, cfg.m_hi).value;
  for (int m = cfg.m_lo; m <= cfg.m_hi; ++m) {
    const double s = sphere_mass(params, cfg.t, m).value;
    total += s;
    out.table.add({text("row"), integer(m), num(density(params, cfg.t, m).value), num(s),
                   num(ball_mass(params, cfg.t, m).value)});
  }
  out.table.add({text("normalization"), blank, blank, num(total), blank});
  out.derived = {{"alpha", alpha(params)}, {"exit_rate_unit_ball", exit_rate(params, 0)},
                 {"sigma", params.sigma}, {"normalization_error", total - 1.0}};
  return out;
}

RunResult cmd_exit(const ExperimentConfig& cfg) {
  const KernelParams params(cfg.p, cfg.b, single_sigma(cfg));
  RunResult out;
  out.table = {"adelic.exit.v1",
               {"T", "r", "stay_analytic", "stay_event", "se", "z_event", "stay_skeleton", "epochs", "n_paths"},
               {}};
  const std::size_t n = cfg.n_paths;
  for (double T : cfg.T) {
    const double q = exit_prob(params, T, cfg.r);
    const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(n));
    if (T == 0.0) {
      out.table.add({num(T), integer(cfg.r), num(q), num(1.0), num(se), num(0.0), num(1.0),
                     integer(static_cast<long long>(cfg.epochs)), integer(static_cast<long long>(n))});
      continue;
    }
    const RngStream event_base(cfg.seed, 0), skeleton_base(cfg.seed, 1);
    const PAdic origin = PAdic::zero(cfg.p);
    const auto ev = count_blocks(n, cfg.workers, [&](std::size_t lo, std::size_t hi) {
      long long stays = 0;
      for (std::size_t k = lo; k < hi; ++k) {
        RngStream s = event_base.substream(k);
        stays += sample_event_path(params, origin, T, cfg.r, s).events.empty() ? 1 : 0;
      }
      return stays;
    });
    const std::vector<double> epochs = uniform_epochs(T, cfg.epochs);
    const auto sk = count_blocks(n, cfg.workers, [&](std::size_t lo, std::size_t hi) {
      IncrementSampler inc(params);
      long long stays = 0;
      for (std::size_t k = lo; k < hi; ++k) {
        RngStream s = skeleton_base.substream(k);
        const PathSkeleton path = sample_skeleton(inc, epochs, origin, s);
        bool inside = true;
        for (const auto& v : path.values) inside = inside && v.in_ball(origin, cfg.r);
        stays += inside ? 1 : 0;
      }
      return stays;
    });
    long long ev_total = 0, sk_total = 0;
    for (auto c : ev) ev_total += c;
    for (auto c : sk) sk_total += c;
    const double qe = static_cast<double>(ev_total) / static_cast<double>(n);
    const double qs = static_cast<double>(sk_total) / static_cast<double>(n);
    out.table.add({num(T), integer(cfg.r), num(q), num(qe), num(se), num(se > 0 ? (qe - q) / se : 0.0), num(qs),
                   integer(static_cast<long long>(cfg.epochs)), integer(static_cast<long long>(n))});
  }
  out.derived = {{"alpha", alpha(params)}, {"exit_rate", exit_rate(params, cfg.r)}, {"sigma", params.sigma}};
  return out;
}

RunResult cmd_sample(const ExperimentConfig& cfg) {
  const SigmaSequence sigma = sigma_sequence(cfg);
  const double T = max_T(cfg);
  if (!(T > 0.0)) throw ConfigError("sample needs a positive horizon T");
  const std::size_t N = truncation(cfg, sigma, T, needed_primes(cfg));
  const std::string mode = cfg.raw.value("sample_mode", std::string("events"));
  PathMode pm = mode == "skeleton" ? PathMode::skeleton(uniform_epochs(T, cfg.epochs)) : PathMode::events(cfg.resolution);
  if (mode != "skeleton" && mode != "events") throw ConfigError("sample_mode must be events or skeleton");
  const AdelicPoint start = cfg.points.empty() ? AdelicPoint() : cfg.points.front();
  AdelicPathSampler sampler(sigma, cfg.b, T, pm, N);
  const RngStream base(cfg.seed, 0);
  RunResult out;
  out.table = {"adelic.sample.v1", {"path", "prime", "time", "position", "abs_exponent"}, {}};
  auto add = [&](std::size_t path, std::size_t i, double time, const PAdic& x) {
    const auto e = x.norm_exponent();
    out.table.add({integer(static_cast<long long>(path)), integer(nth_prime(i)), num(time), text(format_padic(x)),
                   e ? Cell(integer(*e)) : blank});
  };
  for (std::size_t path = 0; path < cfg.n_paths; ++path) {
    const AdelicPathBundle bundle = sampler.sample(start, base.substream(path));
    for (std::size_t i = 0; i < N; ++i) {
      const PathSample& s = bundle.paths[i];
      if (const auto* e = std::get_if<EventPath>(&s)) {
        add(path, i, 0.0, e->start);
        for (const auto& ev : e->events) add(path, i, ev.time, ev.position);
      } else {
        const auto& sk = std::get<PathSkeleton>(s);
        for (std::size_t k = 0; k < sk.times.size(); ++k) add(path, i, sk.times[k], sk.values[k]);
      }
    }
  }
  out.derived = adelic_derived(sigma, cfg.b, T, N);
  out.derived["sample_mode"] = mode;
  return out;
}

RunResult cmd_exit_count(const ExperimentConfig& cfg) {
  const SigmaSequence sigma = sigma_sequence(cfg);
  const double T = cfg.T.front();
  if (!(T > 0.0)) throw ConfigError("exit-count needs a positive horizon T");
  const std::size_t N = truncation(cfg, sigma, T);
  const ExitCountDistribution dist = exit_count_pmf(sigma, cfg.b, T, N, std::max(cfg.k_max, N));

  // Monte Carlo over bundles: count components that leave Z_p by T.
  const std::size_t n = cfg.n_paths;
  const RngStream base(cfg.seed, 0);
  constexpr std::size_t kBlock = 4096;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<long long>> hist(n_blocks, std::vector<long long>(N + 1, 0));
  parallel_for_blocks(n_blocks, cfg.workers, [&](std::size_t blk) {
    AdelicPathSampler sampler(sigma, cfg.b, T, PathMode::events(0), N);
    for (std::size_t k = blk * kBlock; k < std::min(n, (blk + 1) * kBlock); ++k) {
      const AdelicPathBundle bundle = sampler.sample(AdelicPoint(), base.substream(k));
      std::size_t exits = 0;
      for (std::size_t i = 0; i < N; ++i) exits += bundle.exits_unit_ball(i) ? 1 : 0;
      ++hist[blk][exits];
    }
  });
  std::vector<double> mc(N + 1, 0.0);
  for (const auto& h : hist)
    for (std::size_t k = 0; k <= N; ++k) mc[k] += static_cast<double>(h[k]) / static_cast<double>(n);
  double tv = 0.0, pmf_sum = 0.0;
  for (std::size_t k = 0; k <= N; ++k) {
    const double pk = k < dist.pmf.size() ? dist.pmf[k] : 0.0;
    tv += 0.5 * std::abs(mc[k] - pk);
    pmf_sum += pk;
  }

  RunResult out;
  out.table = {"adelic.exit_count.v1",
               {"section", "k", "pmf", "lo", "hi", "mc", "bound", "bound_ok", "exact", "moment_bound", "value"},
               {}};
  bool all_ok = true;
  for (std::size_t k = 0; k <= cfg.k_max && k < dist.bounds.size(); ++k) {
    const double pk = k < dist.pmf.size() ? dist.pmf[k] : 0.0;
    const double bound = dist.moment_bound_terms[k];
    // At k = 0 the bound is P(N_T = 0) itself; elsewhere it is strict.
    const bool ok = k == 0 ? dist.bounds[0].contains(bound, 1e-15) : (pk < bound && dist.bounds[k].hi < bound);
    all_ok = all_ok && ok;
    out.table.add({text("pmf"), integer(static_cast<long long>(k)), num(pk), num(dist.bounds[k].lo),
                   num(dist.bounds[k].hi), num(k < mc.size() ? mc[k] : 0.0), num(bound), Cell(ok), blank, blank,
                   blank});
  }
  for (int m = 1; m <= cfg.moments; ++m) {
    const ExitMoment mom = exit_count_moment(sigma, cfg.b, T, N, m);
    out.table.add({text("moment"), integer(m), blank, blank, blank, blank, blank, Cell(mom.exact < mom.bound),
                   num(mom.exact), num(mom.bound), blank});
  }
  out.table.add({text("summary_pmf_sum"), blank, blank, blank, blank, blank, blank, blank, blank, blank,
                 num(pmf_sum)});
  out.table.add({text("summary_tail_prob"), blank, blank, blank, blank, blank, blank, blank, blank, blank,
                 num(dist.tail_prob)});
  out.table.add({text("summary_tv_mc"), blank, blank, blank, blank, blank, blank, blank, blank, blank, num(tv)});
  out.derived = adelic_derived(sigma, cfg.b, T, N);
  out.derived["beta_total"] = {dist.beta_total.lo, dist.beta_total.hi};
  out.derived["all_bounds_hold"] = all_ok;
  return out;
}

RunResult cmd_operator(const ExperimentConfig& cfg) {
  const SigmaSequence sigma = sigma_sequence(cfg);
  const std::size_t N = truncation(cfg, sigma, max_T(cfg) > 0 ? max_T(cfg) : 1.0, needed_primes(cfg));
  std::vector<AdelicPoint> points = cfg.points;
  if (points.empty()) points.emplace_back();
  RunResult out;
  out.table = {"adelic.operator.v1", {"point", "quantity", "prime", "re", "im", "radius", "lo", "hi"}, {}};
  for (std::size_t k = 0; k < points.size(); ++k) {
    const AdelicPoint& x = points[k];
    const auto pt = integer(static_cast<long long>(k));
    std::map<std::size_t, bool> indices;
    for (const auto& [i, f] : cfg.observable.factors()) indices[i] = true;
    for (const auto& [i, v] : x.active()) indices[i] = true;
    for (const auto& [i, unused] : indices) {
      const std::uint32_t p = nth_prime(i);
      const SBFunction* f = cfg.observable.factor(i);
      const SBFunction g = f ? *f : SBFunction::vacuum(p);
      if (const PAdic* xi = x.component(i)) {
        const auto d = vladimirov_apply(KernelParams(p, cfg.b, 1.0), g, *xi);
        out.table.add({pt, text("vladimirov_factor"), integer(p), num(d.real()), num(d.imag()), blank, blank, blank});
      }
      out.table.add({pt, text("norm_m_omega"), integer(p), num(norm_m_omega(p, cfg.b)), blank, blank, blank, blank});
    }
    const ComplexInterval d = adelic_vladimirov_apply(sigma, cfg.b, cfg.observable, x, N);
    out.table.add({pt, text("adelic_vladimirov"), blank, num(d.center.real()), num(d.center.imag()), num(d.radius),
                   blank, blank});
    const Interval m = adelic_multiplier(sigma, cfg.b, x, N);
    out.table.add({pt, text("multiplier"), blank, blank, blank, blank, num(m.lo), num(m.hi)});
  }
  out.table.add({blank, text("vacuum_norm_sq"), blank, num(multiplier_vacuum_norm_sq(sigma, cfg.b, N)), blank,
                 blank, blank, blank});
  out.derived = adelic_derived(sigma, cfg.b, 1.0, N);
  return out;
}

FKRequest fk_request(const ExperimentConfig& cfg, const SigmaSequence& sigma, std::size_t N) {
  FKRequest req;
  req.sigma = sigma;
  req.b = cfg.b;
  req.t = cfg.t;
  req.alpha = cfg.observable;
  req.v = cfg.potential;
  req.n_paths = cfg.n_paths;
  req.N = N;
  req.seed = cfg.seed;
  req.mode = cfg.mode;
  req.h = cfg.h;
  req.workers = cfg.workers;
  return req;
}

RunResult cmd_fk(const ExperimentConfig& cfg) {
  const SigmaSequence sigma = sigma_sequence(cfg);
  const std::size_t N = truncation(cfg, sigma, cfg.t + cfg.fk_s, needed_primes(cfg));
  const FKRequest base = fk_request(cfg, sigma, N);
  std::vector<AdelicPoint> points = cfg.points;
  if (points.empty()) points.emplace_back();
  RunResult out;
  out.table = {"adelic.fk.v1",
               {"task", "point", "t", "value_re", "value_im", "std_error", "reference_re", "reference_im", "z",
                "n_paths", "pass", "detail"},
               {}};
  auto z_of = [](double diff, double se) { return se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY); };
  for (const std::string& task : cfg.fk_tasks) {
    if (task == "expectation") {
      for (std::size_t k = 0; k < points.size(); ++k) {
        FKRequest req = base;
        req.x = points[k];
        const FKEstimate est = fk_expectation(req);
        const auto np = integer(static_cast<long long>(est.n_paths));
        if (cfg.potential.is_zero()) {
          const ComplexInterval ref = free_propagate(sigma, cfg.b, cfg.t, cfg.observable, req.x, N);
          // The estimator targets the N-prime truncation, the upper end of the bracket.
          const std::complex<double> head =
              std::abs(ref.center) > 0.0 ? ref.center + ref.center / std::abs(ref.center) * ref.radius : ref.center;
          const double z = z_of(std::abs(est.value - head), est.std_error);
          out.table.add({text(task), integer(static_cast<long long>(k)), num(cfg.t), num(est.value.real()),
                         num(est.value.imag()), num(est.std_error), num(head.real()), num(head.imag()), num(z), np,
                         Cell(z <= 3.0), text("free reference")});
        } else {
          const double sup = cfg.observable.sup_abs();
          const bool ok = std::abs(est.value) <= sup + 3.0 * est.std_error;
          out.table.add({text(task), integer(static_cast<long long>(k)), num(cfg.t), num(est.value.real()),
                         num(est.value.imag()), num(est.std_error), blank, blank, blank, np, Cell(ok),
                         text("contraction")});
        }
      }
    } else if (task == "kernel" || task == "kernel-symmetry" || task == "product") {
      if (cfg.pairs.empty()) throw ConfigError("fk task '" + task + "' needs endpoint pairs");
      for (std::size_t k = 0; k < cfg.pairs.size(); ++k) {
        FKRequest req = base;
        req.x = cfg.pairs[k].first;
        req.y = cfg.pairs[k].second;
        const auto pk = integer(static_cast<long long>(k));
        const FKEstimate kxy = fk_kernel(req);
        if (task == "kernel") {
          out.table.add({text(task), pk, num(cfg.t), num(kxy.value.real()), blank, num(kxy.std_error),
                         num(*kxy.density), blank, blank, integer(static_cast<long long>(kxy.n_paths)),
                         Cell(kxy.value.real() <= *kxy.density + 3.0 * kxy.std_error), text("density reference")});
        } else if (task == "kernel-symmetry") {
          FKRequest rev = req;
          std::swap(rev.x, *rev.y);
          rev.seed = req.seed + 1;
          const FKEstimate kyx = fk_kernel(rev);
          const double se = std::hypot(kxy.std_error, kyx.std_error);
          const double z = z_of(std::abs(kxy.value - kyx.value), se);
          out.table.add({text(task), pk, num(cfg.t), num(kxy.value.real()), blank, num(se), num(kyx.value.real()),
                         blank, num(z), integer(static_cast<long long>(kxy.n_paths)), Cell(z <= 3.0),
                         text("K(x,y) vs K(y,x)")});
        } else {
          const KernelProduct prod = fk_kernel_product(req);
          const double se = std::hypot(kxy.std_error, prod.total.std_error);
          const double z = z_of(std::abs(kxy.value.real() - prod.total.value.real()), se);
          out.table.add({text(task), pk, num(cfg.t), num(kxy.value.real()), blank, num(se),
                         num(prod.total.value.real()), blank, num(z), integer(static_cast<long long>(kxy.n_paths)),
                         Cell(z <= 3.0), text("joint vs product")});
        }
      }
    } else if (task == "semigroup") {
      const SemigroupReport rep = semigroup_check(base, cfg.fk_s, points);
      for (std::size_t k = 0; k < rep.direct.size(); ++k) {
        const double diff = std::abs(rep.direct[k] - rep.composed[k]);
        const bool ok = rep.analytic ? diff < 1e-10 : diff <= 3.0 * rep.combined_se[k];
        out.table.add({text(task), integer(static_cast<long long>(k)), num(cfg.fk_s + cfg.t),
                       num(rep.direct[k].real()), num(rep.direct[k].imag()), num(rep.combined_se[k]),
                       num(rep.composed[k].real()), num(rep.composed[k].imag()),
                       rep.analytic ? blank : num(z_of(diff, rep.combined_se[k])),
                       integer(static_cast<long long>(cfg.n_paths)), Cell(ok),
                       text(rep.analytic ? "analytic composition" : "nested Monte Carlo")});
      }
    } else if (task == "generator") {
      for (std::size_t k = 0; k < points.size(); ++k) {
        FKRequest req = base;
        req.x = points[k];
        const GeneratorReport rep = generator_check(req, cfg.t_ladder);
        for (std::size_t j = 0; j < rep.t.size(); ++j)
          out.table.add({text(task), integer(static_cast<long long>(k)), num(rep.t[j]),
                         num(rep.difference_quotient[j].real()), num(rep.difference_quotient[j].imag()),
                         num(rep.std_error[j]), num(rep.limit.center.real()), num(rep.limit.center.imag()), blank,
                         integer(static_cast<long long>(cfg.n_paths)), blank,
                         text("error " + format_double(rep.error[j]))});
        out.table.add({text("generator_order"), integer(static_cast<long long>(k)), blank, num(rep.order), blank,
                       blank, num(1.0), blank, blank, blank, Cell(std::abs(rep.order - 1.0) <= 0.3),
                       text("least-squares slope")});
      }
    } else {
      throw ConfigError("unknown fk task '" + task + "'");
    }
  }
  out.derived = adelic_derived(sigma, cfg.b, cfg.t, N);
  out.derived["fk_tasks"] = cfg.fk_tasks;
  out.derived["action_mode"] = to_string(cfg.mode);
  return out;
}

RunResult cmd_validate(const ExperimentConfig& cfg) {
  ValidationOptions opt;
  opt.seed = cfg.raw.contains("seed") ? cfg.seed : opt.seed;
  opt.workers = cfg.workers;
  opt.quick = cfg.quick;
  opt.inject_fault = cfg.inject_fault;
  const auto checks = run_validation(opt);
  RunResult out;
  out.table = {"adelic.validate.v1", {"id", "name", "observed", "tolerance", "pass", "seconds", "detail"}, {}};
  bool all = true;
  json tol = json::object();
  for (const auto& c : checks) {
    all = all && c.pass;
    tol[c.id] = c.tolerance;
    out.table.add({text(c.id), text(c.name), num(c.observed), num(c.tolerance), Cell(c.pass), num(c.seconds),
                   text(c.detail)});
  }
  out.derived = {{"checks", checks.size()}, {"all_pass", all}, {"tolerances", tol}, {"seed", opt.seed},
                 {"inject_fault", opt.inject_fault}};
  out.exit_code = all ? kOk : kCheckFailure;
  return out;
}

RunResult cmd_bench(const ExperimentConfig& cfg) {
  using clock = std::chrono::steady_clock;
  RunResult out;
  out.table = {"adelic.bench.v1", {"benchmark", "workers", "iterations", "seconds", "per_second"}, {}};
  auto record = [&](const std::string& name, unsigned workers, std::size_t iters, clock::time_point t0) {
    const double s = std::chrono::duration<double>(clock::now() - t0).count();
    out.table.add({text(name), integer(workers), integer(static_cast<long long>(iters)), num(s),
                   num(static_cast<double>(iters) / std::max(s, 1e-12))});
  };
  const KernelParams params(cfg.p, cfg.b, single_sigma(cfg));
  const std::size_t n = cfg.n_paths;
  auto t0 = clock::now();
  double sink = 0.0;
  for (std::size_t k = 0; k < n; ++k) sink += density(params, cfg.t, static_cast<int>(k % 16) - 8).value;
  record("density", 1, n, t0);
  t0 = clock::now();
  RngStream rng(cfg.seed, 0);
  for (std::size_t k = 0; k < n; ++k)
    sink += static_cast<double>(sample_event_path(params, PAdic::zero(cfg.p), cfg.t, 0, rng).events.size());
  record("event_path", 1, n, t0);
  std::vector<unsigned> worker_counts{1};
  if (cfg.workers > 1) worker_counts.push_back(cfg.workers);
  for (unsigned w : worker_counts) {
    FKRequest req;
    req.N = 8;
    req.t = cfg.t;
    req.n_paths = n;
    req.seed = cfg.seed;
    req.workers = w;
    t0 = clock::now();
    sink += fk_expectation(req).value.real();
    record("fk_expectation_N8", w, n, t0);
  }
  out.derived = {{"checksum", sink}};
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"density", "exit", "sample", "exit-count",
                                              "operator", "fk", "validate", "bench"};
  return names;
}

RunResult run_command(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "density") return cmd_density(cfg);
  if (command == "exit") return cmd_exit(cfg);
  if (command == "sample") return cmd_sample(cfg);
  if (command == "exit-count") return cmd_exit_count(cfg);
  if (command == "operator") return cmd_operator(cfg);
  if (command == "fk") return cmd_fk(cfg);
  if (command == "validate") return cmd_validate(cfg);
  if (command == "bench") return cmd_bench(cfg);
  throw ConfigError("unknown command '" + command + "'");
}

json make_manifest(const std::string& command, const ExperimentConfig& cfg, const RunResult& result,
                   double wall_seconds) {
  json m;
  m["artifact"] = "adelic";
  m["version"] = kArtifactVersion;
  m["command"] = command;
  m["config"] = cfg.raw;
  m["seed"] = result.derived.value("seed", cfg.seed);
  m["stream_scheme"] = kStreamScheme;
  m["workers"] = cfg.workers;
  m["output"] = cfg.output;
  m["format"] = cfg.format == Format::csv ? "csv" : "json";
  m["schema"] = result.table.schema;
  m["rows"] = result.table.rows.size();
  m["exit_code"] = result.exit_code;
  m["wall_seconds"] = wall_seconds;
  m["tolerances"] = {{"series_rel_tol", SeriesPolicy{}.rel_tol},
                     {"radial_coverage", RadialLaw::kDefaultCoverage},
                     {"truncation_eps", cfg.eps},
                     {"mc_z_threshold", 3.0},
                     {"analytic_semigroup", 1e-10},
                     {"generator_order_slack", 0.3}};
  m["derived"] = result.derived;
  return m;
}

}  // namespace adelic::harness
