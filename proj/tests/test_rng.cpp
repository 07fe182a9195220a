#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "adelic/rng.hpp"

using namespace adelic;

TEST(Philox, KnownAnswerVectors) {
  // Published Philox4x32-10 test vectors.
  const auto zero = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(zero, (std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  const auto ones = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(ones, (std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  const auto pi = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(pi, (std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, ReplayFromSameKey) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  RngStream c = a;
  EXPECT_EQ(c.next_u64(), a.next_u64());
}

TEST(RngStream, SubstreamsDiffer) {
  const RngStream base(42, 0);
  std::set<std::uint64_t> first;
  for (std::uint64_t k = 0; k < 1000; ++k) first.insert(base.substream(k).substream(3).next_u64());
  EXPECT_EQ(first.size(), 1000u);
  EXPECT_NE(RngStream(1, 0).next_u64(), RngStream(2, 0).next_u64());
}

TEST(RngStream, UniformMomentsAndRange) {
  RngStream r(5, 0);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(RngStream, UniformBelowCovers) {
  RngStream r(6, 0);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[r.uniform_below(7)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  EXPECT_THROW(r.uniform_below(0), std::invalid_argument);
}

TEST(RngStream, ExponentialMean) {
  RngStream r(7, 0);
  double s = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) s += r.exponential(2.0);
  EXPECT_NEAR(s / n, 0.5, 4 * 0.5 / std::sqrt(n));
}
