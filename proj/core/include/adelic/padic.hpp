#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "adelic/rng.hpp"

namespace adelic {

inline constexpr int kDefaultPrecision = 32;
inline constexpr int kValuationLimit = 1 << 20;

using Rational = boost::rational<std::int64_t>;

// Finite-precision p-adic number x = p^v * sum_k d_k p^k, known modulo
// p^N where N is the absolute precision. Two flavours of zero exist: the
// exact zero (sentinel valuation, infinite precision) and a value only
// known to vanish modulo p^N, which is what cancellation produces.
class PAdic {
 public:
  static constexpr int kZeroValuation = std::numeric_limits<int>::max();
  static constexpr int kExact = std::numeric_limits<int>::max();

  PAdic() = default;

  static PAdic zero(std::uint32_t p);
  static PAdic zero_mod(std::uint32_t p, int abs_precision);
  static PAdic from_integer(std::uint32_t p, std::int64_t n, int precision = kDefaultPrecision);
  // Digits d_0.. at positions valuation, valuation+1, ...; absolute
  // precision is valuation + digits.size(). Leading zero digits are stripped.
  static PAdic from_digits(std::uint32_t p, int valuation, std::vector<std::uint32_t> digits);
  static PAdic power_of_p(std::uint32_t p, int k, int precision = kDefaultPrecision);

  std::uint32_t prime() const { return p_; }
  bool is_exact_zero() const { return val_ == kZeroValuation && prec_ == kExact; }
  // True for the exact zero and for values known to vanish modulo p^N.
  bool is_zero() const { return val_ == kZeroValuation; }
  int valuation() const { return val_; }
  int absolute_precision() const { return prec_; }
  int significant_digits() const { return static_cast<int>(digits_.size()); }
  const std::vector<std::uint32_t>& digits() const { return digits_; }

  // Digit at absolute position k (coefficient of p^k). Throws
  // PrecisionError when k is at or beyond the known modulus.
  std::uint32_t digit(int k) const;

  // log_p |x|, or nullopt when x is zero to its known precision.
  std::optional<int> norm_exponent() const;
  // |x| = p^{-v}; 0 when x is zero to its known precision.
  double abs() const;
  Rational abs_exact() const;

  PAdic operator-() const;
  friend PAdic operator+(const PAdic& x, const PAdic& y);
  friend PAdic operator-(const PAdic& x, const PAdic& y);
  friend PAdic operator*(const PAdic& x, const PAdic& y);

  // Reduce to absolute precision n (no-op when n >= current precision).
  PAdic truncated(int n) const;
  // Choose the representative with zero digits up to absolute precision n.
  PAdic extended(int n) const;

  // x == y (mod p^n); throws PrecisionError if n exceeds either precision.
  bool congruent(const PAdic& y, int n) const;
  // |x - c| <= p^r.
  bool in_ball(const PAdic& c, int r) const { return congruent(c, -r); }
  // log_p |x - y| resolved from known digits; nullopt if they agree to the
  // common precision.
  std::optional<int> distance_exponent(const PAdic& y) const;

  std::string to_string() const;

 private:
  PAdic(std::uint32_t p, int val, int prec, std::vector<std::uint32_t> digits);
  static PAdic normalized(std::uint32_t p, int val, std::vector<std::uint32_t> digits, int prec);
  std::uint32_t digit_unchecked(int k) const;
  int low_position(int fallback) const { return is_zero() ? fallback : val_; }

  std::uint32_t p_ = 2;
  int val_ = kZeroValuation;
  int prec_ = kExact;
  std::vector<std::uint32_t> digits_;
};

// Rank-0 additive character exp(2 pi i {x}_p).
std::complex<double> character(const PAdic& x);

void check_prime(std::uint32_t p);
double ball_measure(std::uint32_t p, int r);
Rational ball_measure_exact(std::uint32_t p, int r);
Rational sphere_measure_exact(std::uint32_t p, int r);

// Closed ball {x : |x - center| <= p^r}. The centre is stored reduced
// modulo p^{-r}, so equal balls have identical representations.
class Ball {
 public:
  Ball(const PAdic& center, int radius_exp);
  static Ball unit(std::uint32_t p) { return Ball(PAdic::zero(p), 0); }

  const PAdic& center() const { return center_; }
  int radius_exp() const { return r_; }
  std::uint32_t prime() const { return center_.prime(); }
  double measure() const { return ball_measure(prime(), r_); }
  Rational measure_exact() const { return ball_measure_exact(prime(), r_); }

  bool contains(const PAdic& x) const { return x.in_ball(center_, r_); }
  bool contains(const Ball& other) const;
  bool disjoint(const Ball& other) const;
  bool operator==(const Ball& other) const;

  // The p sub-balls of radius p^{r-1}, ordered by the new digit.
  std::vector<Ball> children() const;

 private:
  PAdic center_;
  int r_;
};

// |x| = p^r exactly: leading digit uniform on 1..p-1, K-1 further digits
// uniform on 0..p-1.
PAdic uniform_sphere(RngStream& rng, std::uint32_t p, int r, int K = kDefaultPrecision);
// Centre plus an offset with K uniform digits starting at position -r.
PAdic uniform_ball(RngStream& rng, const Ball& ball, int K = kDefaultPrecision);

}  // namespace adelic
