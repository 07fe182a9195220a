#include "adelic/primes.hpp"

#include <algorithm>
#include <string>

#include "adelic/error.hpp"

namespace adelic {

const std::vector<std::uint32_t>& prime_table() {
  static const std::vector<std::uint32_t> table = [] {
    // The 10^4-th prime is 104729.
    constexpr std::uint32_t limit = 104730;
    std::vector<bool> composite(limit, false);
    std::vector<std::uint32_t> out;
    out.reserve(kPrimeTableSize);
    for (std::uint32_t n = 2; n < limit && out.size() < kPrimeTableSize; ++n) {
      if (composite[n]) continue;
      out.push_back(n);
      for (std::uint64_t m = static_cast<std::uint64_t>(n) * n; m < limit; m += n) composite[m] = true;
    }
    return out;
  }();
  return table;
}

std::uint32_t nth_prime(std::size_t index) {
  const auto& t = prime_table();
  if (index >= t.size())
    throw ConfigError("prime index " + std::to_string(index) + " beyond the prime table");
  return t[index];
}

std::optional<std::size_t> prime_index(std::uint32_t p) {
  const auto& t = prime_table();
  auto it = std::lower_bound(t.begin(), t.end(), p);
  if (it == t.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - t.begin());
}

}  // namespace adelic
