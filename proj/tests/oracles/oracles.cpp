#include "oracles/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using adelic::PAdic;

double shell_integral(const PAdic& x, int k) {
  const std::uint32_t p = x.prime();
  const int m = *x.norm_exponent();
  const double sphere = std::pow(p, k) * (1.0 - 1.0 / p);
  // xi ranges over p^{-k} * unit; x xi is integral when m + k <= 0.
  const int free_digits = m + k;
  if (free_digits <= 0) return sphere;
  if (free_digits > 3) throw std::invalid_argument("shell_integral: enumeration too large");
  // Classes of xi modulo p^m: leading digit 1..p-1 then free_digits-1 digits.
  const int count_rest = free_digits - 1;
  long classes = 1;
  for (int i = 0; i < count_rest; ++i) classes *= p;
  std::complex<double> acc = 0.0;
  for (std::uint32_t lead = 1; lead < p; ++lead) {
    for (long c = 0; c < classes; ++c) {
      std::vector<std::uint32_t> digits{lead};
      long rest = c;
      for (int i = 0; i < count_rest; ++i) {
        digits.push_back(static_cast<std::uint32_t>(rest % p));
        rest /= p;
      }
      const PAdic xi = PAdic::from_digits(p, -k, digits).extended(64);
      acc += adelic::character(x.extended(64) * xi);
    }
  }
  // Each class is a ball of measure p^{-m}.
  return acc.real() * std::pow(p, -m);
}

double fourier_density(const adelic::KernelParams& params, double t, int m) {
  const std::uint32_t p = params.p;
  std::vector<std::uint32_t> digits{1};
  for (int i = 1; i < 40; ++i) digits.push_back(static_cast<std::uint32_t>((7 * i + 3) % p));
  const PAdic x = PAdic::from_digits(p, -m, digits);
  const double A = params.sigma * t;
  double total = 0.0;
  // Shells beyond k = -m + 3 are outside the enumeration budget; the
  // test suite checks separately that k = -m + 2, -m + 3 vanish.
  for (int k = -m + 1; k >= -m - 4000; --k) {
    const double weight = std::exp(-A * std::pow(static_cast<double>(p), k * params.b));
    const double term = weight * shell_integral(x, k);
    total += term;
    if (k < -m && std::pow(static_cast<double>(p), k) < 1e-18 * std::abs(total)) break;
  }
  return total;
}

double fourier_ball_mass(const adelic::KernelParams& params, double t, int nu) {
  const double p = params.p;
  double total = 0.0;
  for (int m = nu; m > nu - 4000; --m) {
    const double shell = std::pow(p, m) * (1.0 - 1.0 / p);
    const double term = fourier_density(params, t, m) * shell;
    total += term;
    if (term < 1e-18 * total) break;
  }
  return total;
}

double vacuum_laplacian_closed(std::uint32_t p, double b, int m) {
  const double P = p;
  const double a = std::pow(P, b) * (P - 1.0) / (std::pow(P, b + 1.0) - 1.0);
  if (m <= 0) return a;
  return -std::pow(P, -m * (b + 1.0)) * std::pow(P, b + 1.0) * (std::pow(P, b) - 1.0) /
         (std::pow(P, b + 1.0) - 1.0);
}

double norm_quadrature(std::uint32_t p, double b) {
  const double P = p;
  double total = 0.0;
  for (int m = 0; m > -100000; --m) {
    const double term = std::pow(P, 2.0 * b * m) * std::pow(P, m) * (1.0 - 1.0 / P);
    total += term;
    if (term < 1e-19 * total) break;
  }
  return total;
}

double total_variation(const std::map<int, double>& a, const std::map<int, double>& b) {
  double tv = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    tv += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) tv += std::abs(v);
  return 0.5 * tv;
}

std::map<int, double> normalise(const std::map<int, long>& counts) {
  double n = 0.0;
  for (const auto& [k, c] : counts) n += static_cast<double>(c);
  std::map<int, double> out;
  for (const auto& [k, c] : counts) out[k] = static_cast<double>(c) / n;
  return out;
}

double chi_square_pvalue(double statistic, int dof) {
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

}  // namespace oracle
