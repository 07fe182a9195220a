#include "adelic/schwartz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adelic/error.hpp"

namespace adelic {

namespace {

double clamped_exp(double x) {
  if (x > 700.0) return std::numeric_limits<double>::infinity();
  if (x < -745.0) return 0.0;
  return std::exp(x);
}

void require_prime(const SBFunction& f, std::uint32_t p) {
  if (f.prime() != p) throw ConfigError("SB function prime mismatch");
}

// Region of `ball` outside the disjoint sub-balls `holes`, split into balls.
void emit_region(const Ball& ball, const std::vector<Ball>& holes, std::complex<double> value,
                 std::vector<SBTerm>& out) {
  if (holes.empty()) {
    if (value != 0.0) out.push_back({ball, value});
    return;
  }
  for (const Ball& child : ball.children()) {
    std::vector<Ball> inside;
    bool covered = false;
    for (const Ball& h : holes) {
      if (h == child) {
        covered = true;
        break;
      }
      if (child.contains(h)) inside.push_back(h);
    }
    if (!covered) emit_region(child, inside, value, out);
  }
}

}  // namespace

SBFunction::SBFunction(std::uint32_t p, std::vector<SBTerm> terms) : p_(p), terms_(std::move(terms)) {
  check_prime(p);
  for (const auto& t : terms_) require_prime(SBFunction(p_), t.ball.prime());
}

SBFunction SBFunction::indicator(const Ball& ball, std::complex<double> coeff) {
  return SBFunction(ball.prime(), {{ball, coeff}});
}

std::complex<double> SBFunction::operator()(const PAdic& x) const {
  if (x.prime() != p_) throw ConfigError("eval_sb: prime mismatch");
  std::complex<double> v = 0.0;
  for (const auto& t : terms_)
    if (t.ball.contains(x)) v += t.coeff;
  return v;
}

std::complex<double> eval_sb(const SBFunction& f, const PAdic& x) { return f(x); }

SBFunction SBFunction::canonical() const {
  // Merge equal balls, largest radius first.
  std::vector<SBTerm> sorted = terms_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SBTerm& a, const SBTerm& b) { return a.ball.radius_exp() > b.ball.radius_exp(); });
  std::vector<SBTerm> nodes;
  for (const auto& t : sorted) {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const SBTerm& n) { return n.ball == t.ball; });
    if (it == nodes.end())
      nodes.push_back(t);
    else
      it->coeff += t.coeff;
  }
  // Laminar forest: the parent is the smallest earlier ball containing the node.
  const std::size_t n = nodes.size();
  std::vector<std::optional<std::size_t>> parent(n);
  std::vector<std::complex<double>> value(n);
  std::vector<std::vector<Ball>> holes(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (nodes[j].ball.contains(nodes[i].ball) &&
          (!parent[i] || nodes[*parent[i]].ball.radius_exp() > nodes[j].ball.radius_exp()))
        parent[i] = j;
    value[i] = nodes[i].coeff + (parent[i] ? value[*parent[i]] : 0.0);
    if (parent[i]) holes[*parent[i]].push_back(nodes[i].ball);
  }
  std::vector<SBTerm> out;
  for (std::size_t i = 0; i < n; ++i) emit_region(nodes[i].ball, holes[i], value[i], out);
  std::sort(out.begin(), out.end(), [](const SBTerm& a, const SBTerm& b) {
    if (a.ball.radius_exp() != b.ball.radius_exp()) return a.ball.radius_exp() > b.ball.radius_exp();
    return a.ball.center().to_string() < b.ball.center().to_string();
  });
  return SBFunction(p_, std::move(out));
}

bool SBFunction::is_canonical() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff == 0.0) return false;
    for (std::size_t j = i + 1; j < terms_.size(); ++j)
      if (!terms_[i].ball.disjoint(terms_[j].ball)) return false;
  }
  return true;
}

bool SBFunction::is_vacuum() const {
  const SBFunction c = canonical();
  return c.terms_.size() == 1 && c.terms_[0].coeff == 1.0 && c.terms_[0].ball == Ball::unit(p_);
}

std::optional<int> SBFunction::finest_radius() const {
  if (terms_.empty()) return std::nullopt;
  int r = terms_[0].ball.radius_exp();
  for (const auto& t : terms_) r = std::min(r, t.ball.radius_exp());
  return r;
}

double SBFunction::sup_abs() const {
  double s = 0.0;
  for (const auto& t : canonical().terms_) s = std::max(s, std::abs(t.coeff));
  return s;
}

bool SBFunction::is_real_nonnegative() const {
  for (const auto& t : canonical().terms_)
    if (t.coeff.imag() != 0.0 || t.coeff.real() < 0.0) return false;
  return true;
}

std::complex<double> SBFunction::integral() const {
  std::complex<double> s = 0.0;
  for (const auto& t : terms_) s += t.coeff * t.ball.measure();
  return s;
}

Rational SBFunction::integral_rational() const {
  Rational s(0);
  for (const auto& t : terms_) {
    const double c = t.coeff.real();
    if (t.coeff.imag() != 0.0 || c != std::round(c) || std::abs(c) > 1e15)
      throw ConfigError("integral_rational needs integer coefficients");
    s += Rational(static_cast<std::int64_t>(c)) * t.ball.measure_exact();
  }
  return s;
}

SBFunction SBFunction::operator+(const SBFunction& other) const {
  require_prime(other, p_);
  std::vector<SBTerm> t = terms_;
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  return SBFunction(p_, std::move(t));
}

SBFunction SBFunction::scaled(std::complex<double> c) const {
  std::vector<SBTerm> t = terms_;
  for (auto& term : t) term.coeff *= c;
  return SBFunction(p_, std::move(t));
}

SeriesValue vacuum_laplacian(std::uint32_t p, double b, std::optional<int> m, const SeriesPolicy& policy) {
  policy.validate();
  const double lnp = std::log(static_cast<double>(p));
  const double q = 1.0 - 1.0 / static_cast<double>(p);
  const double decay = (b + 1.0) * lnp;
  const double tail_factor = q / -std::expm1(-decay);
  SeriesValue out;
  long top = 0;
  if (m && *m >= 1) {
    // The shell |xi| = p^{1-m} contributes -p^{(1-m)b} p^{-m}.
    top = -static_cast<long>(*m);
    out.value = -clamped_exp((1.0 - *m) * b * lnp - *m * lnp);
    out.terms = 1;
  }
  // Shells |xi| = p^k with k <= top have x xi integral and contribute p^{kb} p^k (1 - 1/p).
  for (long k = top;; --k) {
    if (out.terms >= policy.max_terms)
      throw NumericError("Vladimirov series exceeded max_terms = " + std::to_string(policy.max_terms));
    out.value += q * clamped_exp(static_cast<double>(k) * decay);
    ++out.terms;
    const double rest = tail_factor * clamped_exp(static_cast<double>(k - 1) * decay);
    if (rest <= policy.rel_tol * std::abs(out.value)) {
      out.tail_bound = rest;
      return out;
    }
  }
}

double ball_laplacian(std::uint32_t p, double b, const Ball& ball, const PAdic& x, const SeriesPolicy& policy) {
  if (ball.prime() != p || x.prime() != p) throw ConfigError("ball_laplacian: prime mismatch");
  const int r = ball.radius_exp();
  const double scale = clamped_exp(-static_cast<double>(r) * b * std::log(static_cast<double>(p)));
  if (ball.contains(x)) return scale * vacuum_laplacian(p, b, std::nullopt, policy).value;
  const int d = *x.distance_exponent(ball.center());
  return scale * vacuum_laplacian(p, b, d - r, policy).value;
}

std::complex<double> vladimirov_apply(const KernelParams& params, const SBFunction& f, const PAdic& x,
                                      const SeriesPolicy& policy) {
  require_prime(f, params.p);
  std::complex<double> v = 0.0;
  for (const auto& t : f.terms()) v += t.coeff * ball_laplacian(params.p, params.b, t.ball, x, policy);
  return v;
}

std::complex<double> laplacian_pairing(std::uint32_t p, double b, const SBFunction& f, const SBFunction& g,
                                       const SeriesPolicy& policy) {
  require_prime(f, p);
  require_prime(g, p);
  const double P = p;
  const double lnp = std::log(P);
  std::complex<double> total = 0.0;
  for (const auto& tf : f.terms()) {
    const int r = tf.ball.radius_exp();
    const double scale = std::exp(-r * b * lnp);
    // Radial profile of Delta 1_{B_r(c)} at distance p^m from c.
    auto profile = [&](int m) {
      return scale * vacuum_laplacian(p, b, m > r ? std::optional<int>(m - r) : std::nullopt, policy).value;
    };
    for (const auto& tg : g.terms()) {
      const int s = tg.ball.radius_exp();
      double integral = 0.0;
      if (tf.ball.contains(tg.ball)) {
        // Delta 1_{B_r(c)} is constant on B_r(c).
        integral = profile(r) * std::pow(P, s);
      } else if (tg.ball.contains(tf.ball)) {
        // B_s(c_g) = B_s(c_f): sum the profile over spheres about c_f.
        for (int m = s;; --m) {
          const double term = profile(m) * std::pow(P, m) * (1.0 - 1.0 / P);
          integral += term;
          if (m < r && std::abs(term) < 1e-18 * std::max(1.0, std::abs(integral))) break;
        }
      } else {
        const int d = *tf.ball.center().distance_exponent(tg.ball.center());
        integral = profile(d) * std::pow(P, s);
      }
      total += tf.coeff * std::conj(tg.coeff) * integral;
    }
  }
  return total;
}

double norm_m_omega(std::uint32_t p, double b) {
  const double lnp = std::log(static_cast<double>(p));
  return (1.0 - 1.0 / static_cast<double>(p)) / -std::expm1(-(2.0 * b + 1.0) * lnp);
}

double multiplier_vacuum_norm_sq(const SigmaSequence& sigma, double b, std::size_t N) {
  double linear = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double s = sigma.sigma(i);
    if (s == 0.0) continue;
    const std::uint32_t p = nth_prime(i);
    const double a = alpha(p, b);
    linear += s * a;
    diag += s * s * (norm_m_omega(p, b) - a * a);
  }
  return linear * linear + diag;
}

SimpleAdelicSB& SimpleAdelicSB::set(std::size_t index, SBFunction f) {
  if (f.prime() != nth_prime(index)) throw ConfigError("SB factor prime does not match its index");
  factors_.insert_or_assign(index, f.canonical());
  return *this;
}

const SBFunction* SimpleAdelicSB::factor(std::size_t index) const {
  auto it = factors_.find(index);
  return it == factors_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> SimpleAdelicSB::max_index() const {
  if (factors_.empty()) return std::nullopt;
  return factors_.rbegin()->first;
}

int SimpleAdelicSB::finest_radius(std::size_t index) const {
  const SBFunction* f = factor(index);
  if (!f) return 0;
  return f->finest_radius().value_or(0);
}

std::complex<double> SimpleAdelicSB::factor_value(std::size_t index, const PAdic& x) const {
  const SBFunction* f = factor(index);
  if (f) return (*f)(x);
  return x.in_ball(PAdic::zero(x.prime()), 0) ? 1.0 : 0.0;
}

std::complex<double> SimpleAdelicSB::operator()(const AdelicPoint& a) const {
  std::complex<double> v = 1.0;
  for (const auto& [i, f] : factors_) {
    const PAdic* x = a.component(i);
    if (!x) {
      if (!f.is_vacuum()) throw PrecisionError("non-vacuum factor at an unresolved component");
      continue;
    }
    v *= f(*x);
  }
  for (const auto& [i, x] : a.active())
    if (!factor(i)) v *= factor_value(i, x);
  return v;
}

double SimpleAdelicSB::sup_abs() const {
  double s = 1.0;
  for (const auto& [i, f] : factors_) s *= f.sup_abs();
  return s;
}

SimplePotential& SimplePotential::add(std::size_t index, double weight, SBFunction shape) {
  if (shape.prime() != nth_prime(index)) throw ConfigError("potential shape prime does not match its index");
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw ConfigError("potential weights must be nonnegative");
  SBFunction c = shape.canonical();
  if (!c.is_real_nonnegative()) throw ConfigError("potential shapes must be real and nonnegative");
  if (components_.count(index)) throw ConfigError("potential component specified twice");
  const double bound = c.sup_abs();
  components_.emplace(index, Component{weight, std::move(c), bound});
  return *this;
}

std::optional<std::size_t> SimplePotential::max_index() const {
  if (components_.empty()) return std::nullopt;
  return components_.rbegin()->first;
}

std::optional<int> SimplePotential::finest_radius(std::size_t index) const {
  auto it = components_.find(index);
  if (it == components_.end()) return std::nullopt;
  return it->second.shape.finest_radius();
}

double SimplePotential::component_value(std::size_t index, const PAdic& x) const {
  auto it = components_.find(index);
  if (it == components_.end()) return 0.0;
  return it->second.weight * it->second.shape(x).real();
}

double SimplePotential::operator()(const AdelicPoint& a) const {
  double v = 0.0;
  for (const auto& [i, c] : components_) {
    const PAdic* x = a.component(i);
    if (!x) {
      if (!c.shape.is_vacuum()) throw PrecisionError("potential component at an unresolved component");
      v += c.weight;
      continue;
    }
    v += c.weight * c.shape(*x).real();
  }
  return v;
}

double SimplePotential::sup() const {
  double s = 0.0;
  for (const auto& [i, c] : components_) s += c.weight * c.bound;
  return s;
}

Interval adelic_multiplier(const SigmaSequence& sigma, double b, const AdelicPoint& a, std::size_t N) {
  if (auto m = a.max_active_index(); m && *m >= N) throw ConfigError("active prime beyond the truncation");
  double lo = 0.0;
  for (const auto& [i, x] : a.active())
    if (!x.is_zero()) lo += sigma.sigma(i) * std::pow(x.abs(), b);
  return {lo, lo + sigma.tail_sigma(N).hi};
}

ComplexInterval adelic_vladimirov_apply(const SigmaSequence& sigma, double b, const SimpleAdelicSB& f,
                                        const AdelicPoint& a, std::size_t N, const SeriesPolicy& policy) {
  std::vector<std::size_t> S;
  for (const auto& [i, x] : a.active()) S.push_back(i);
  for (const auto& [i, g] : f.factors())
    if (!a.is_active(i)) S.push_back(i);
  std::sort(S.begin(), S.end());
  for (std::size_t i : S)
    if (i >= N) throw ConfigError("non-vacuum factor or active prime beyond the truncation");

  std::vector<std::complex<double>> F(S.size()), D(S.size());
  for (std::size_t k = 0; k < S.size(); ++k) {
    const std::size_t i = S[k];
    const std::uint32_t p = nth_prime(i);
    const PAdic* x = a.component(i);
    const SBFunction* g = f.factor(i);
    const SBFunction g_or_vac = g ? *g : SBFunction::vacuum(p);
    if (!x) {
      if (!g_or_vac.is_vacuum()) throw PrecisionError("non-vacuum factor at an unresolved component");
      F[k] = 1.0;
      D[k] = alpha(p, b);
      continue;
    }
    F[k] = g_or_vac(*x);
    D[k] = vladimirov_apply(KernelParams(p, b, 1.0), g_or_vac, *x, policy);
  }
  std::complex<double> all = 1.0;
  for (const auto& v : F) all *= v;
  std::complex<double> centre = 0.0;
  double magnitude = 0.0;
  for (std::size_t k = 0; k < S.size(); ++k) {
    std::complex<double> others = 1.0;
    for (std::size_t l = 0; l < S.size(); ++l)
      if (l != k) others *= F[l];
    const std::complex<double> term = sigma.sigma(S[k]) * D[k] * others;
    centre += term;
    magnitude += std::abs(term);
  }
  // Vacuum factors at components inside Z_p give (Delta Omega)(a_j) = alpha_j.
  double vac = 0.0;
  for (std::size_t j = 0; j < N; ++j)
    if (!std::binary_search(S.begin(), S.end(), j)) vac += sigma.beta(j, b);
  centre += all * vac;
  magnitude += std::abs(all) * vac;
  const Interval tail = sigma.tail_beta(N, b);
  centre += all * tail.mid();
  const double radius = std::abs(all) * 0.5 * tail.width() + 1e-13 * (magnitude + std::abs(all) * tail.hi);
  return {centre, radius};
}

}  // namespace adelic
