#include "adelic/padic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "adelic/error.hpp"

namespace adelic {

namespace {

void require_same_prime(const PAdic& x, const PAdic& y) {
  if (x.prime() != y.prime()) throw ConfigError("p-adic operands have different primes");
}

void check_valuation(int v) {
  if (v < -kValuationLimit || v > kValuationLimit)
    throw NumericError("p-adic valuation outside [-2^20, 2^20]");
}

}  // namespace

void check_prime(std::uint32_t p) {
  if (p < 2) throw ConfigError("prime must be >= 2");
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= p; ++d)
    if (p % d == 0) throw ConfigError("p = " + std::to_string(p) + " is not prime");
}

PAdic::PAdic(std::uint32_t p, int val, int prec, std::vector<std::uint32_t> digits)
    : p_(p), val_(val), prec_(prec), digits_(std::move(digits)) {}

PAdic PAdic::normalized(std::uint32_t p, int val, std::vector<std::uint32_t> digits, int prec) {
  std::size_t lead = 0;
  while (lead < digits.size() && digits[lead] == 0) ++lead;
  if (lead == digits.size()) return zero_mod(p, prec);
  if (lead > 0) digits.erase(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(lead));
  val += static_cast<int>(lead);
  check_valuation(val);
  return PAdic(p, val, prec, std::move(digits));
}

PAdic PAdic::zero(std::uint32_t p) {
  if (p < 2) throw ConfigError("prime must be >= 2");
  return PAdic(p, kZeroValuation, kExact, {});
}

PAdic PAdic::zero_mod(std::uint32_t p, int abs_precision) {
  if (p < 2) throw ConfigError("prime must be >= 2");
  return PAdic(p, kZeroValuation, abs_precision, {});
}

PAdic PAdic::from_integer(std::uint32_t p, std::int64_t n, int precision) {
  if (p < 2) throw ConfigError("prime must be >= 2");
  if (precision < 1) throw ConfigError("precision must be >= 1");
  if (n == 0) return zero(p);
  // Digits of |n|; the magnitude of INT64_MIN fits in uint64.
  std::uint64_t m = n < 0 ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
  int val = 0;
  while (m % p == 0) {
    m /= p;
    ++val;
  }
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(precision), 0);
  for (int k = 0; k < precision && m > 0; ++k) {
    digits[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(m % p);
    m /= p;
  }
  PAdic x(p, val, val + precision, std::move(digits));
  return n < 0 ? -x : x;
}

PAdic PAdic::from_digits(std::uint32_t p, int valuation, std::vector<std::uint32_t> digits) {
  if (p < 2) throw ConfigError("prime must be >= 2");
  if (digits.empty()) throw ConfigError("from_digits needs at least one digit");
  for (auto d : digits)
    if (d >= p) throw ConfigError("digit out of range for prime " + std::to_string(p));
  check_valuation(valuation);
  const int prec = valuation + static_cast<int>(digits.size());
  return normalized(p, valuation, std::move(digits), prec);
}

PAdic PAdic::power_of_p(std::uint32_t p, int k, int precision) {
  if (precision < 1) throw ConfigError("precision must be >= 1");
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(precision), 0);
  digits[0] = 1;
  return from_digits(p, k, std::move(digits));
}

std::uint32_t PAdic::digit_unchecked(int k) const {
  if (is_zero() || k < val_) return 0;
  const auto idx = static_cast<std::size_t>(static_cast<std::int64_t>(k) - val_);
  return idx < digits_.size() ? digits_[idx] : 0;
}

std::uint32_t PAdic::digit(int k) const {
  if (k >= prec_) throw PrecisionError("digit requested beyond known precision");
  return digit_unchecked(k);
}

std::optional<int> PAdic::norm_exponent() const {
  if (is_zero()) return std::nullopt;
  return -val_;
}

double PAdic::abs() const {
  if (is_zero()) return 0.0;
  return std::pow(static_cast<double>(p_), -static_cast<double>(val_));
}

Rational PAdic::abs_exact() const {
  if (is_zero()) return Rational(0);
  return ball_measure_exact(p_, -val_);
}

PAdic PAdic::operator-() const {
  if (is_zero()) return *this;
  std::vector<std::uint32_t> out(digits_.size());
  out[0] = p_ - digits_[0];
  for (std::size_t k = 1; k < digits_.size(); ++k) out[k] = p_ - 1 - digits_[k];
  return PAdic(p_, val_, prec_, std::move(out));
}

PAdic operator+(const PAdic& x, const PAdic& y) {
  require_same_prime(x, y);
  if (x.is_exact_zero()) return y;
  if (y.is_exact_zero()) return x;
  const int n = std::min(x.prec_, y.prec_);
  const int lo = std::min(x.low_position(n), y.low_position(n));
  if (lo >= n) return PAdic::zero_mod(x.p_, n);
  const std::uint32_t p = x.p_;
  std::vector<std::uint32_t> out(static_cast<std::size_t>(n - lo));
  std::uint64_t carry = 0;
  for (int k = lo; k < n; ++k) {
    const std::uint64_t s =
        static_cast<std::uint64_t>(x.digit_unchecked(k)) + y.digit_unchecked(k) + carry;
    out[static_cast<std::size_t>(k - lo)] = static_cast<std::uint32_t>(s % p);
    carry = s / p;
  }
  return PAdic::normalized(p, lo, std::move(out), n);
}

PAdic operator-(const PAdic& x, const PAdic& y) { return x + (-y); }

PAdic operator*(const PAdic& x, const PAdic& y) {
  require_same_prime(x, y);
  const std::uint32_t p = x.p_;
  if (x.is_exact_zero() || y.is_exact_zero()) return PAdic::zero(p);
  if (x.is_zero() && y.is_zero()) return PAdic::zero_mod(p, x.prec_ + y.prec_);
  if (x.is_zero()) return PAdic::zero_mod(p, x.prec_ + y.val_);
  if (y.is_zero()) return PAdic::zero_mod(p, y.prec_ + x.val_);
  const int val = x.val_ + y.val_;
  check_valuation(val);
  const std::size_t K = std::min(x.digits_.size(), y.digits_.size());
  std::vector<std::uint32_t> out(K);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < K; ++i) {
    std::uint64_t acc = carry;
    for (std::size_t j = 0; j <= i; ++j)
      acc += static_cast<std::uint64_t>(x.digits_[j]) * y.digits_[i - j];
    out[i] = static_cast<std::uint32_t>(acc % p);
    carry = acc / p;
  }
  return PAdic(p, val, val + static_cast<int>(K), std::move(out));
}

PAdic PAdic::truncated(int n) const {
  if (n >= prec_) return *this;
  if (is_zero() || n <= val_) return zero_mod(p_, n);
  std::vector<std::uint32_t> out(digits_.begin(), digits_.begin() + (n - val_));
  return normalized(p_, val_, std::move(out), n);
}

PAdic PAdic::extended(int n) const {
  if (is_exact_zero() || n <= prec_) return *this;
  if (is_zero()) return zero_mod(p_, n);
  std::vector<std::uint32_t> out = digits_;
  out.resize(static_cast<std::size_t>(n - val_), 0);
  return PAdic(p_, val_, n, std::move(out));
}

bool PAdic::congruent(const PAdic& y, int n) const {
  require_same_prime(*this, y);
  if (n > prec_ || n > y.prec_)
    throw PrecisionError("congruence modulo p^" + std::to_string(n) + " exceeds known precision");
  const int lo = std::min(low_position(n), y.low_position(n));
  for (int k = lo; k < n; ++k)
    if (digit_unchecked(k) != y.digit_unchecked(k)) return false;
  return true;
}

std::optional<int> PAdic::distance_exponent(const PAdic& y) const {
  require_same_prime(*this, y);
  const int n = std::min(prec_, y.prec_);
  if (n == kExact) return std::nullopt;
  const int lo = std::min(low_position(n), y.low_position(n));
  for (int k = lo; k < n; ++k)
    if (digit_unchecked(k) != y.digit_unchecked(k)) return -k;
  return std::nullopt;
}

std::string PAdic::to_string() const {
  std::ostringstream os;
  os << "p=" << p_;
  if (is_zero()) {
    os << " 0";
  } else {
    os << " v=" << val_ << " [";
    for (std::size_t k = 0; k < digits_.size(); ++k) os << (k ? "," : "") << digits_[k];
    os << "]";
  }
  if (prec_ != kExact) os << " +O(" << p_ << "^" << prec_ << ")";
  return os.str();
}

std::complex<double> character(const PAdic& x) {
  if (x.is_zero() || x.valuation() >= 0) return {1.0, 0.0};
  if (x.absolute_precision() < 0)
    throw PrecisionError("character needs the digits below p^0");
  const double p = static_cast<double>(x.prime());
  double frac = 0.0;
  for (int k = x.valuation(); k <= -1; ++k) frac = (frac + x.digit(k)) / p;
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

double ball_measure(std::uint32_t p, int r) {
  return std::pow(static_cast<double>(p), static_cast<double>(r));
}

Rational ball_measure_exact(std::uint32_t p, int r) {
  std::int64_t m = 1;
  const auto limit = std::numeric_limits<std::int64_t>::max() / p;
  for (int k = 0; k < std::abs(r); ++k) {
    if (m > limit) throw NumericError("exact ball measure overflows int64");
    m *= p;
  }
  return r >= 0 ? Rational(m) : Rational(1, m);
}

Rational sphere_measure_exact(std::uint32_t p, int r) {
  return ball_measure_exact(p, r) - ball_measure_exact(p, r - 1);
}

Ball::Ball(const PAdic& center, int radius_exp) : r_(radius_exp) {
  check_valuation(radius_exp);
  if (center.absolute_precision() < -radius_exp)
    throw PrecisionError("ball centre is not resolved at the ball's radius");
  center_ = center.truncated(-radius_exp);
}

bool Ball::contains(const Ball& other) const {
  return other.r_ <= r_ && other.center_.in_ball(center_, r_);
}

bool Ball::disjoint(const Ball& other) const {
  return !contains(other) && !other.contains(*this);
}

bool Ball::operator==(const Ball& other) const {
  return prime() == other.prime() && r_ == other.r_ && center_.congruent(other.center_, -r_);
}

std::vector<Ball> Ball::children() const {
  const std::uint32_t p = prime();
  const PAdic base = center_.extended(-r_ + 1);
  std::vector<Ball> out;
  out.reserve(p);
  for (std::uint32_t d = 0; d < p; ++d) {
    PAdic c = d == 0 ? base : base + PAdic::from_digits(p, -r_, {d});
    out.emplace_back(c, r_ - 1);
  }
  return out;
}

PAdic uniform_sphere(RngStream& rng, std::uint32_t p, int r, int K) {
  if (K < 1) throw ConfigError("precision must be >= 1");
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(K));
  digits[0] = 1 + rng.uniform_below(p - 1);
  for (int k = 1; k < K; ++k) digits[static_cast<std::size_t>(k)] = rng.uniform_below(p);
  return PAdic::from_digits(p, -r, std::move(digits));
}

PAdic uniform_ball(RngStream& rng, const Ball& ball, int K) {
  if (K < 1) throw ConfigError("precision must be >= 1");
  const std::uint32_t p = ball.prime();
  const int r = ball.radius_exp();
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(K));
  for (auto& d : digits) d = rng.uniform_below(p);
  return ball.center().extended(-r + K) + PAdic::from_digits(p, -r, std::move(digits));
}

}  // namespace adelic
