#include <gtest/gtest.h>

#include <cmath>

#include "psdrank/bounds.hpp"
#include "psdrank/error.hpp"

using namespace psdrank;

TEST(Triangular, Values) {
  EXPECT_EQ(triangular(0), 0);
  EXPECT_EQ(triangular(2), 3);
  EXPECT_EQ(triangular(8), 36);
  EXPECT_THROW(triangular(-1), Error);
}

TEST(Pataki, Examples) {
  const auto a = pataki_range(3, 3);
  EXPECT_EQ(a.ranks, (std::vector<int>{1, 2}));
  EXPECT_EQ(a.strict_ranks, (std::vector<int>{2}));
  EXPECT_EQ(pataki_range(4, 6).ranks, (std::vector<int>{1, 2}));
  EXPECT_EQ(pataki_range(2, 1).ranks, (std::vector<int>{1}));
  for (int m = 1; m <= 6; ++m) EXPECT_EQ(pataki_range(m, triangular(m)).ranks, (std::vector<int>{0})) << m;
}

TEST(Pataki, RejectsOutOfRange) {
  EXPECT_THROW(pataki_range(3, 0), Error);
  EXPECT_THROW(pataki_range(3, 7), Error);
  EXPECT_THROW(pataki_range(0, 1), Error);
}

TEST(Pataki, RoundTripInequalities) {
  for (int m = 1; m <= 10; ++m) {
    for (long n = 1; n <= triangular(m); ++n) {
      const auto range = pataki_range(m, n);
      EXPECT_FALSE(range.ranks.empty());
      for (int r = 0; r <= m; ++r) {
        const long tmr = (m - r) * (m - r + 1) / 2;
        const long tr = r * (r + 1) / 2;
        const bool expected = n >= tmr && tr <= m * (m + 1) / 2 - n;
        EXPECT_EQ(range.contains(r), expected) << m << ' ' << n << ' ' << r;
      }
      for (int r : range.strict_ranks) {
        EXPECT_TRUE(range.contains(r));
        EXPECT_GT(n, (m - r) * (m - r + 1) / 2);
      }
    }
  }
}

TEST(Bezout, Values) {
  EXPECT_EQ(bezout_kkt_count(1), 2);
  EXPECT_EQ(bezout_kkt_count(2), 16);
  EXPECT_EQ(bezout_kkt_count(4), 65536);
  EXPECT_EQ(max_vertices(1), 2);
  EXPECT_EQ(max_vertices(2), 16);
  EXPECT_EQ(max_vertices(3), 512);
  EXPECT_THROW(bezout_kkt_count(0), Error);
}

TEST(PsdBound, Examples) {
  EXPECT_DOUBLE_EQ(psd_rank_lower_bound(1).bound, 0.0);
  EXPECT_EQ(psd_rank_lower_bound(1).ceil_bound, 0);
  const auto five = psd_rank_lower_bound(5);
  EXPECT_NEAR(five.bound, std::sqrt(std::log2(5.0)), 1e-12);
  EXPECT_NEAR(five.bound, 1.524, 5e-4);
  EXPECT_EQ(five.ceil_bound, 2);
  EXPECT_THROW(psd_rank_lower_bound(0), Error);
}

TEST(PsdBound, InvertsBezoutExactly) {
  for (int m = 1; m <= 20; ++m) {
    const auto b = psd_rank_lower_bound(bezout_kkt_count(m));
    EXPECT_EQ(b.bound, static_cast<double>(m));
    EXPECT_EQ(b.ceil_bound, m);
    EXPECT_EQ(bezout_kkt_count(m), max_vertices(m));
  }
}

TEST(LpBound, Examples) {
  EXPECT_DOUBLE_EQ(lp_extension_lower_bound(1), 0.0);
  EXPECT_NEAR(lp_extension_lower_bound(5), 2.3219, 1e-4);
  EXPECT_EQ(lp_extension_lower_bound(BigInt(1) << 37), 37.0);
  EXPECT_THROW(lp_extension_lower_bound(0), Error);
}
