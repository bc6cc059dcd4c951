#include "stratsp/rational.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using stratsp::Rational;

TEST(Rational, NormalizesOnConstruction) {
  Rational r(10, 4);
  EXPECT_EQ(r.num, 5);
  EXPECT_EQ(r.den, 2);
  Rational s(-3, -6);
  EXPECT_EQ(s.num, 1);
  EXPECT_EQ(s.den, 2);
  Rational z(0, 7);
  EXPECT_EQ(z.num, 0);
  EXPECT_EQ(z.den, 1);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, Arithmetic) {
  Rational a(1, 2), b(1, 3);
  EXPECT_EQ(a + b, Rational(5, 6));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 6));
  EXPECT_EQ(a / b, Rational(3, 2));
  EXPECT_THROW(a / Rational(0), std::domain_error);
}

TEST(Rational, Comparisons) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_LE(Rational(2, 4), Rational(1, 2));
  EXPECT_GT(Rational(7, 2), Rational(3));
  EXPECT_GE(Rational(-1, 2), Rational(-2, 3));
  EXPECT_NE(Rational(1, 2), Rational(1, 3));
}

TEST(Rational, OverflowChecked) {
  long long big = (1LL << 62);
  EXPECT_THROW(Rational(big, 1) * Rational(big, 1), std::overflow_error);
  EXPECT_THROW(Rational(big, 1) + Rational(big, 1), std::overflow_error);
}

TEST(Rational, ParseIntegersAndFractions) {
  EXPECT_EQ(Rational::parse("3"), Rational(3));
  EXPECT_EQ(Rational::parse("-5/2"), Rational(-5, 2));
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
}

TEST(Rational, ParseDecimals) {
  EXPECT_EQ(Rational::parse("0.5"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("-2.75"), Rational(-11, 4));
  EXPECT_EQ(Rational::parse("1.0"), Rational(1));
  EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("-0.5"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse(".25"), Rational(1, 4));
}

TEST(Rational, ParseRejectsGarbage) {
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1.5x"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1."), std::invalid_argument);
}

TEST(Rational, ValueAndString) {
  EXPECT_DOUBLE_EQ(Rational(3, 4).value(), 0.75);
  EXPECT_EQ(Rational(8, 3).str(), "8/3");
  EXPECT_EQ(Rational(4, 2).str(), "2");
  EXPECT_TRUE(Rational(6, 3).is_integer());
  EXPECT_FALSE(Rational(6, 4).is_integer());
}
