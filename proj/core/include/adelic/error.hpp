#pragma once

#include <stdexcept>

namespace adelic {

// Invalid input: bad parameters, prime mismatch, non-summable sigma.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Series truncation failure, underflow of a required density, valuation overflow.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A comparison or evaluation needs digits beyond the known modulus.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adelic
