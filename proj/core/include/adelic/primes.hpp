#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace adelic {

inline constexpr std::size_t kPrimeTableSize = 10000;

// The first 10^4 primes; index 0 is 2.
const std::vector<std::uint32_t>& prime_table();
// Throws ConfigError past the table.
std::uint32_t nth_prime(std::size_t index);
std::optional<std::size_t> prime_index(std::uint32_t p);

}  // namespace adelic
