#include <gtest/gtest.h>

#include "psdrank/error.hpp"
#include "psdrank/polynomial.hpp"

using namespace psdrank;

TEST(Polynomial, Arithmetic) {
  const auto x = Polynomial::variable(0);
  const auto y = Polynomial::variable(1);
  const auto p = (x + y) * (x - y);
  EXPECT_EQ(p, x * x - y * y);
  EXPECT_EQ(p.total_degree(), 2);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(Polynomial::constant(3).total_degree(), 0);
  EXPECT_DOUBLE_EQ(p.evaluate({3, 2}), 5.0);
  EXPECT_EQ(BigRational(1, 2) * (x + x), x);
}

TEST(Polynomial, MonomialHelpers) {
  EXPECT_EQ(monomial_product({{0, 1}, {2, 1}}, {{0, 2}, {1, 1}}), (Monomial{{0, 3}, {1, 1}, {2, 1}}));
  EXPECT_EQ(monomial_degree({{0, 3}, {4, 2}}), 5);
}

TEST(Rational, FromDoubleIsShortestDecimal) {
  EXPECT_EQ(rational_from_double(0.1), BigRational(1, 10));
  EXPECT_EQ(rational_from_double(-2.5), BigRational(-5, 2));
  EXPECT_EQ(rational_from_double(0.0), BigRational(0));
  EXPECT_EQ(rational_from_double(1e-20), BigRational(1, BigInt("100000000000000000000")));
  EXPECT_THROW(rational_from_double(std::numeric_limits<double>::infinity()), Error);
}

TEST(Rational, StringRoundTrip) {
  for (const BigRational& r : {BigRational(0), BigRational(-7, 3), BigRational(5), BigRational(1, 1024)}) {
    EXPECT_EQ(parse_rational(rational_to_string(r)), r);
  }
  EXPECT_EQ(rational_to_string(BigRational(-7, 3)), "-7/3");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}
