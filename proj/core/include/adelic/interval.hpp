#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace adelic {

// Closed real interval used for rigorous brackets over prime tails.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double x) { return {x, x}; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(double x, double slack) const { return lo - slack <= x && x <= hi + slack; }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

// Product of intervals with nonnegative endpoints.
inline Interval mul_nonneg(Interval a, Interval b) { return {a.lo * b.lo, a.hi * b.hi}; }

// Disc in the complex plane.
struct ComplexInterval {
  std::complex<double> center;
  double radius = 0.0;

  bool contains(std::complex<double> z, double slack = 0.0) const {
    return std::abs(z - center) <= radius + slack;
  }
};

}  // namespace adelic
