#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace adelic {

// Philox4x32-10 block function: 4x32-bit counter, 2x32-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// Counter-based random stream. The n-th 64-bit draw depends only on
// (seed, stream_id, n), so a copy of a stream replays the same sequence and
// streams derived by substream() are independent of scheduling.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  // Number of 64-bit words drawn so far.
  std::uint64_t position() const { return draws_; }

  // Child stream keyed by `key`; does not advance this stream.
  RngStream substream(std::uint64_t key) const;

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_pos();
  // Uniform integer in [0, n), unbiased; n >= 1.
  std::uint32_t uniform_below(std::uint32_t n);
  double exponential(double rate);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t draws_ = 0;
  std::uint64_t buffer_[2] = {0, 0};
};

}  // namespace adelic
