#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace adelic {

// Mean and sum of squared deviations of complex samples.
struct RunningStats {
  std::size_t n = 0;
  std::complex<double> mean = 0.0;
  double m2 = 0.0;

  void add(std::complex<double> x) {
    ++n;
    const std::complex<double> delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += std::norm(delta) * static_cast<double>(n - 1) / static_cast<double>(n);
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }

  static RunningStats merge(const RunningStats& a, const RunningStats& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    RunningStats out;
    out.n = a.n + b.n;
    const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), n = static_cast<double>(out.n);
    const std::complex<double> delta = b.mean - a.mean;
    out.mean = a.mean + delta * (nb / n);
    out.m2 = a.m2 + b.m2 + std::norm(delta) * na * nb / n;
    return out;
  }
};

// Balanced binary-tree merge in index order.
template <class T, class Merge>
T pairwise_reduce(std::vector<T> parts, Merge merge) {
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(merge(parts[i], parts[i + 1]));
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

}  // namespace adelic
