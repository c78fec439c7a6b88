#include "toca/rational.h"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

namespace toca {
namespace {

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("2/3"), Rational(2, 3));
  EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
  EXPECT_EQ(parse_rational("0.5"), Rational(1, 2));
  EXPECT_EQ(parse_rational(".25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("7."), Rational(7));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_EQ(parse_rational(" 10000 "), Rational(10000));
  EXPECT_EQ(parse_rational("123456789012345678901234567890"),
            Rational(BigInt("123456789012345678901234567890")));
}

TEST(ParseRational, Rejects) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", ".", "1e5", "--1"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  }
}

TEST(RationalFormat, RoundTrip) {
  EXPECT_EQ(to_string(Rational(3, 6)), "1/2");
  EXPECT_EQ(to_string(Rational(-4)), "-4");
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-1000, 1000), den(1, 1000);
  for (int i = 0; i < 200; ++i) {
    Rational r(BigInt(num(rng)), BigInt(den(rng)));
    EXPECT_EQ(parse_rational(to_string(r)), r);
  }
}

TEST(RationalRounding, FloorCeil) {
  EXPECT_EQ(ceil(Rational(5, 2)), 3);
  EXPECT_EQ(floor(Rational(5, 2)), 2);
  EXPECT_EQ(ceil(Rational(-5, 2)), -2);
  EXPECT_EQ(floor(Rational(-5, 2)), -3);
  EXPECT_EQ(ceil(Rational(3)), 3);
  EXPECT_EQ(floor(Rational(3)), 3);
  EXPECT_EQ(ceil(Rational(0)), 0);
}

TEST(RecoverRational, FindsSmallDenominators) {
  EXPECT_EQ(recover_rational(2.5), Rational(5, 2));
  EXPECT_EQ(recover_rational(1.0 / 3.0), Rational(1, 3));
  EXPECT_EQ(recover_rational(14.0 / 3.0), Rational(14, 3));
  EXPECT_EQ(recover_rational(-0.6), Rational(-3, 5));
  EXPECT_EQ(recover_rational(0.0), Rational(0));
  EXPECT_EQ(recover_rational(4.2 + 1e-12), Rational(21, 5));
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(0, 100000), den(1, 999);
  for (int i = 0; i < 500; ++i) {
    Rational r(num(rng), den(rng));
    EXPECT_EQ(recover_rational(to_double(r)), r);
  }
}

TEST(ExactRational, MatchesBinaryValue) {
  EXPECT_EQ(exact_rational(0.5), Rational(1, 2));
  EXPECT_EQ(exact_rational(1e6), Rational(1000000));
  EXPECT_EQ(exact_rational(-3.0), Rational(-3));
  EXPECT_NE(exact_rational(0.1), Rational(1, 10));
  EXPECT_EQ(to_double(exact_rational(0.1)), 0.1);
  EXPECT_THROW(exact_rational(std::numeric_limits<double>::infinity()),
               std::invalid_argument);
}

TEST(ToInt64, Range) {
  EXPECT_EQ(to_int64(BigInt(42)), 42);
  EXPECT_THROW(to_int64(BigInt("100000000000000000000")), std::overflow_error);
}

}  // namespace
}  // namespace toca
