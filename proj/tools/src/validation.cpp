#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "adelic/heat_kernel.hpp"
#include "adelic/primes.hpp"
#include "adelic/sampler.hpp"
#include "adelic_harness/harness.hpp"

namespace adelic::harness {

namespace {

struct Scale {
  std::size_t mc;        // main Monte Carlo sample count
  std::size_t fk_paths;  // paths per FK estimate
  std::size_t gen_paths;
};

Scale scale_for(bool quick) { return quick ? Scale{20000, 20000, 100000} : Scale{100000, 100000, 200000}; }

double tv(const std::map<int, double>& a, const std::map<int, double>& b) {
  std::map<int, double> all = a;
  for (const auto& [k, v] : b) all.try_emplace(k, 0.0);
  double s = 0.0;
  for (const auto& [k, unused] : all) {
    const auto ia = a.find(k), ib = b.find(k);
    s += std::abs((ia == a.end() ? 0.0 : ia->second) - (ib == b.end() ? 0.0 : ib->second));
  }
  return 0.5 * s;
}

std::map<int, double> normalise(const std::map<int, long>& counts) {
  long n = 0;
  for (const auto& [k, c] : counts) n += c;
  std::map<int, double> out;
  for (const auto& [k, c] : counts) out[k] = static_cast<double>(c) / static_cast<double>(n);
  return out;
}

SBFunction ball_fn(std::uint32_t p, std::int64_t c, int r, double coeff = 1.0) {
  return SBFunction::indicator(Ball(PAdic::from_integer(p, c, 12), r), coeff);
}

AdelicPoint point2(std::int64_t a, std::int64_t c) {
  AdelicPoint x;
  x.set(0, PAdic::from_integer(2, a, 10));
  x.set(1, PAdic::from_integer(3, c, 10));
  return x;
}

CheckResult normalization(const ValidationOptions&) {
  double worst = 0.0;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (double b : {0.5, 1.0, 2.0})
      for (double sigma : {0.25, 1.0})
        for (double t : {0.1, 1.0, 10.0}) {
          const RadialLaw law(KernelParams(p, b, sigma), t);
          double s = 0.0;
          for (double m : law.masses()) s += m;
          worst = std::max(worst, std::abs(s - 1.0));
        }
  return {"1", "kernel normalization", worst, 1e-10, worst < 1e-10, 0.0, "54 grid points"};
}

CheckResult exit_law(const ValidationOptions& o, const Scale& sc) {
  const KernelParams k(2, 1.0, 1.0);
  double a = alpha(k);
  if (o.inject_fault == "alpha") a *= 1.1;
  const double analytic = std::exp(-k.sigma * a * 1.0);
  const RngStream base(o.seed, 0);
  long stays = 0;
  for (std::size_t i = 0; i < sc.mc; ++i) {
    RngStream s = base.substream(i);
    stays += sample_event_path(k, PAdic::zero(2), 1.0, 0, s).events.empty() ? 1 : 0;
  }
  const double mc = static_cast<double>(stays) / static_cast<double>(sc.mc);
  const double se = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(sc.mc));
  const double z = std::abs(mc - analytic) / se;
  return {"2", "exit law", z, 3.0, z <= 3.0, 0.0,
          "mc=" + format_double(mc) + " analytic=" + format_double(analytic) + " se=" + format_double(se)};
}

CheckResult sampler_cross(const ValidationOptions& o, const Scale& sc) {
  const KernelParams k(3, 1.0, 1.0);
  IncrementSampler inc(k);
  RngStream ev_rng(o.seed, 10), sk_rng(o.seed, 11);
  const PAdic origin = PAdic::zero(3);
  auto cls = [&](const PAdic& z) {
    const auto d = z.distance_exponent(origin);
    return d ? std::max(*d, 0) : 0;
  };
  std::map<int, long> ev, sk;
  for (std::size_t i = 0; i < sc.mc; ++i) {
    ++ev[cls(sample_event_path(k, origin, 1.0, 0, ev_rng).end())];
    ++sk[cls(inc.sample(1.0, sk_rng))];
  }
  const double d_end = tv(normalise(ev), normalise(sk));

  const KernelParams k2(2, 1.0, 1.0);
  RngStream os_rng(o.seed, 12);
  std::map<int, long> landing;
  std::size_t events = 0;
  while (events < sc.mc) {
    const EventPath path = sample_event_path(k2, PAdic::zero(2), 20.0, 0, os_rng);
    const PAdic* prev = &path.start;
    for (const auto& e : path.events) {
      ++landing[*e.position.distance_exponent(*prev)];
      prev = &e.position;
      ++events;
    }
  }
  std::map<int, double> ref;
  for (int j = 1; j < 60; ++j) ref[j] = overshoot_law(k2, 0, j);
  const double d_over = tv(normalise(landing), ref);
  const bool pass = d_end < 0.01 && d_over < 0.02;
  return {"3", "sampler cross-validation", d_end, 0.01, pass, 0.0,
          "end-law TV=" + format_double(d_end) + " overshoot TV=" + format_double(d_over) + " (tol 0.02)"};
}

CheckResult chapman_kolmogorov(const ValidationOptions&) {
  double worst = 0.0;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (double b : {0.5, 1.0, 2.0})
      for (double t : {0.1, 1.0, 10.0}) {
        const KernelParams k(p, b, 1.0);
        const RadialLaw half(k, t / 2);
        const RadialConvolution conv = radial_convolution(half, half);
        for (int m = conv.lo; m < conv.lo + static_cast<int>(conv.mass.size()); ++m)
          worst = std::max(worst, std::abs(conv.at(m) - sphere_mass(k, t, m).value));
      }
  return {"4", "Chapman-Kolmogorov", worst, 1e-8, worst < 1e-8, 0.0, "sup over radius classes"};
}

CheckResult dirac_limit(const ValidationOptions&) {
  double worst_margin = INFINITY;
  bool pass = true;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (double sigma : {0.25, 1.0}) {
      const KernelParams k(p, 1.0, sigma);
      double prev = 0.0;
      for (int e = 6; e >= 0; --e) {
        const double t = std::pow(10.0, -e);
        const double m = ball_mass(k, t, 0).value;
        worst_margin = std::min(worst_margin, m - std::exp(-sigma * t));
        pass = pass && m >= std::exp(-sigma * t) && (prev == 0.0 || m <= prev);
        prev = m;
      }
      pass = pass && std::abs(ball_mass(k, 1e-6, 0).value - 1.0) < 2e-6;
    }
  // Adelic unit-ball bracket against exp(-t sum sigma_i).
  const SigmaSequence s = SigmaSequence::inverse_square();
  for (int e = 0; e <= 6; ++e) {
    const double t = std::pow(10.0, -e);
    const Interval br = adelic_ball_probability(s, 1.0, t, {}, 20);
    const double floor = std::exp(-t * s.total_sigma().hi);
    worst_margin = std::min(worst_margin, br.lo - floor);
    pass = pass && br.lo >= floor && br.hi <= 1.0;
  }
  pass = pass && adelic_ball_probability(s, 1.0, 1e-6, {}, 20).lo > 1.0 - 1e-6;
  return {"5", "Dirac limit and bounds", worst_margin, 0.0, pass, 0.0, "min margin over exp(-sigma t)"};
}

CheckResult exit_count(const ValidationOptions& o, const Scale& sc) {
  const SigmaSequence s = SigmaSequence::inverse_square();
  const std::size_t N = *prime_index(47) + 1;
  const ExitCountDistribution d = exit_count_pmf(s, 1.0, 1.0, N, 10);
  bool pass = d.bounds[0].contains(d.moment_bound_terms[0], 1e-15);
  for (std::size_t k = 1; k <= 10; ++k) pass = pass && d.pmf[k] < d.moment_bound_terms[k];
  const ExitMoment m1 = exit_count_moment(s, 1.0, 1.0, N, 1);
  pass = pass && m1.exact < m1.bound;

  AdelicPathSampler sampler(s, 1.0, 1.0, PathMode::events(0), N);
  const RngStream root(o.seed, 20);
  std::map<int, long> counts;
  for (std::size_t i = 0; i < sc.mc; ++i) {
    const AdelicPathBundle bundle = sampler.sample(AdelicPoint(), root.substream(i));
    int c = 0;
    for (std::size_t j = 0; j < N; ++j) c += bundle.exits_unit_ball(j) ? 1 : 0;
    ++counts[c];
  }
  std::map<int, double> ref;
  for (std::size_t k = 0; k < d.pmf.size(); ++k) ref[static_cast<int>(k)] = d.pmf[k];
  const double dist = tv(normalise(counts), ref);
  pass = pass && dist < 0.01;
  return {"6", "exit-count law", dist, 0.01, pass, 0.0,
          "N=" + std::to_string(N) + " mean=" + format_double(m1.exact) + " bound=" + format_double(m1.bound)};
}

CheckResult vacuum_norm(const ValidationOptions&) {
  double worst = 0.0;
  bool in_range = true;
  // Closed form against a Riemann sum over the spheres |x| = p^{-k}.
  for (std::uint32_t p : prime_table()) {
    if (p > 97) break;
    for (double b = 0.1; b <= 8.0 + 1e-12; b += 0.1) {
      const double v = norm_m_omega(p, b);
      double quad = 0.0;
      for (int k = 0; k < 2000; ++k) {
        const double term = (1.0 - 1.0 / p) * std::pow(static_cast<double>(p), -k * (2.0 * b + 1.0));
        quad += term;
        if (term < 1e-18) break;
      }
      worst = std::max(worst, std::abs(v - quad));
      in_range = in_range && v > 0.5 && v < 2.0;
    }
  }
  return {"7", "vacuum multiplier norm", worst, 1e-12, worst < 1e-12 && in_range, 0.0, "p <= 97, b in [0.1, 8]"};
}

CheckResult fk_free(const ValidationOptions& o, const Scale& sc) {
  FKRequest req;
  req.t = 0.5;
  req.N = 6;
  req.n_paths = sc.fk_paths;
  req.seed = o.seed;
  req.workers = o.workers;
  req.alpha.set(0, ball_fn(2, 0, -1) + ball_fn(2, 1, 0, 0.5));
  req.alpha.set(1, ball_fn(3, 1, 0));
  double worst = 0.0;
  const std::vector<std::pair<std::int64_t, std::int64_t>> pts{{0, 1}, {1, 1}, {2, 4}, {3, 7}, {6, 2}};
  for (const auto& [a, c] : pts) {
    req.x = point2(a, c);
    const FKEstimate est = fk_expectation(req);
    const ComplexInterval ref = free_propagate(req.sigma, req.b, req.t, req.alpha, req.x, req.N);
    const double head = ref.center.real() + ref.radius;
    worst = std::max(worst, std::abs(est.value.real() - head) / est.std_error);
  }
  return {"8", "Feynman-Kac free reduction", worst, 3.0, worst <= 3.0, 0.0, "max z over 5 points"};
}

CheckResult kernel_symmetry(const ValidationOptions& o, const Scale& sc) {
  FKRequest req;
  req.sigma = SigmaSequence::explicit_list({1.0});
  req.t = 1.0;
  req.N = 1;
  req.n_paths = sc.fk_paths / 4;
  req.v.add(0, 1.0, ball_fn(2, 0, -1) + ball_fn(2, 1, -2, 2.0));
  double worst = 0.0;
  const std::vector<std::pair<std::int64_t, std::int64_t>> pairs{{0, 1}, {1, 2}, {0, 4}};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    req.x = AdelicPoint();
    req.x.set(0, PAdic::from_integer(2, pairs[k].first, 10));
    req.y = AdelicPoint();
    req.y->set(0, PAdic::from_integer(2, pairs[k].second, 10));
    req.seed = o.seed + 2 * k;
    const FKEstimate kxy = fk_kernel(req);
    std::swap(req.x, *req.y);
    req.seed = o.seed + 2 * k + 1;
    const FKEstimate kyx = fk_kernel(req);
    worst = std::max(worst, std::abs(kxy.value - kyx.value) / std::hypot(kxy.std_error, kyx.std_error));
  }
  return {"9", "kernel symmetry", worst, 3.0, worst <= 3.0, 0.0, "max z over 3 pairs, p=2"};
}

CheckResult product_factorization(const ValidationOptions& o, const Scale& sc) {
  FKRequest req;
  req.sigma = SigmaSequence::explicit_list({1.0, 0.5});
  req.t = 1.0;
  req.N = 2;
  req.n_paths = sc.fk_paths / 4;
  req.seed = o.seed;
  req.v.add(0, 0.8, SBFunction::vacuum(2));
  req.v.add(1, 0.6, SBFunction::vacuum(3));
  req.x = point2(0, 1);
  req.y = point2(1, 4);
  const FKEstimate joint = fk_kernel(req);
  const KernelProduct prod = fk_kernel_product(req);
  const double z = std::abs(joint.value.real() - prod.total.value.real()) /
                   std::hypot(joint.std_error, prod.total.std_error);
  return {"10", "product factorization", z, 3.0, z <= 3.0, 0.0,
          "joint=" + format_double(joint.value.real()) + " product=" + format_double(prod.total.value.real())};
}

CheckResult generator(const ValidationOptions& o, const Scale& sc) {
  FKRequest req;
  req.t = 0.5;
  req.N = 2;
  req.n_paths = sc.gen_paths;
  req.seed = o.seed;
  req.workers = o.workers;
  req.alpha.set(0, ball_fn(2, 0, -2) + ball_fn(2, 1, -1, 0.5));
  req.v.add(0, 2.0, ball_fn(2, 0, -1));
  double worst = 0.0;
  std::string detail = "orders";
  for (std::int64_t a : {0, 2, 1}) {
    req.x = AdelicPoint();
    req.x.set(0, PAdic::from_integer(2, a, 10));
    const GeneratorReport rep = generator_check(req, {1e-1, 1e-2, 1e-3});
    worst = std::max(worst, std::abs(rep.order - 1.0));
    detail += " " + format_double(rep.order);
  }
  return {"11", "generator", worst, 0.3, worst <= 0.3, 0.0, detail};
}

CheckResult reproducibility(const ValidationOptions& o) {
  bool same = true;
  std::string detail;
  const std::vector<std::pair<std::string, json>> runs{
      {"exit", {{"p", 2}, {"sigma", 1.0}, {"T", {0.5, 1.0}}, {"n_paths", 20000}, {"epochs", 16}}},
      {"exit-count", {{"T", 1.0}, {"primes_upto", 50}, {"n_paths", 10000}}},
      {"fk",
       {{"t", 0.5},
        {"N", 4},
        {"n_paths", 5000},
        {"observable", {{"factors", {{{"prime", 2}, {"terms", {{{"center_digits", {0}}, {"radius_exp", -1}}}}}}}}},
        {"potential",
         {{"components", {{{"prime", 2}, {"weight", 1.0}, {"terms", {{{"center_digits", {1}}, {"radius_exp", -1}}}}}}}}},
        {"points", {{{"components", {{{"prime", 2}, {"digits", {1, 0, 1}}}}}}}}}},
  };
  for (const auto& [cmd, cfg] : runs) {
    std::string first;
    for (unsigned w : {1u, 4u, 8u}) {
      json raw = cfg;
      raw["seed"] = o.seed;
      raw["workers"] = w;
      const std::string out = render(run_command(cmd, parse_config(raw)).table, Format::csv);
      if (w == 1)
        first = out;
      else
        same = same && out == first;
    }
    detail += (detail.empty() ? "" : ", ") + cmd;
  }
  return {"12", "reproducibility across workers", same ? 0.0 : 1.0, 0.0, same, 0.0, detail + " at workers 1/4/8"};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  const Scale sc = scale_for(options.quick);
  const std::vector<std::function<CheckResult()>> checks{
      [&] { return normalization(options); },
      [&] { return exit_law(options, sc); },
      [&] { return sampler_cross(options, sc); },
      [&] { return chapman_kolmogorov(options); },
      [&] { return dirac_limit(options); },
      [&] { return exit_count(options, sc); },
      [&] { return vacuum_norm(options); },
      [&] { return fk_free(options, sc); },
      [&] { return kernel_symmetry(options, sc); },
      [&] { return product_factorization(options, sc); },
      [&] { return generator(options, sc); },
      [&] { return reproducibility(options); },
  };
  std::vector<CheckResult> out;
  for (const auto& run : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = run();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace adelic::harness
