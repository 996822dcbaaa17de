#include "hbsg/errors.hpp"
#include "hbsg/exact.hpp"

#include <gtest/gtest.h>

using namespace hbsg;

TEST(Rational, Parsing) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-7/2"), Rational(-7, 2));
  EXPECT_EQ(parse_rational("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_rational("1.5e-3"), Rational(3, 2000));
  EXPECT_EQ(rational_from_double(0.05), Rational(1, 20));
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
}

TEST(PowerProduct, ExactComparisons) {
  // 16^(3.9) vs 65536
  PowerProduct a(1);
  a.times(16, Rational(39, 10));
  EXPECT_EQ(compare(PowerProduct(65536), a).order, std::strong_ordering::greater);
  // 2^(1/2) * 2^(1/2) == 2
  PowerProduct root(1);
  root.times(2, Rational(1, 2)).times(2, Rational(1, 2));
  const auto c = compare(root, PowerProduct(2));
  EXPECT_EQ(c.order, std::strong_ordering::equal);
  EXPECT_TRUE(c.exact);
  PowerProduct zero(0);
  EXPECT_TRUE(zero.is_zero());
  EXPECT_EQ(compare(zero, PowerProduct(1)).order, std::strong_ordering::less);
}

TEST(PowerProduct, Rounding) {
  PowerProduct p(1);
  p.times(16, Rational(3, 2));  // 64
  EXPECT_EQ(*ceil_value(p), 64);
  EXPECT_EQ(*floor_value(p), 64);
  PowerProduct q(1);
  q.times(2, Rational(1, 2));
  EXPECT_EQ(*ceil_value(q), 2);
  EXPECT_EQ(*floor_value(q), 1);
  EXPECT_FALSE(p.exact_integer().has_value());
  PowerProduct r(3);
  r.times(4, 2);
  EXPECT_EQ(*r.exact_integer(), 48);
}

TEST(PowerProduct, HugeExponentsFallBackToLogs) {
  PowerProduct big(1);
  big.times(3, Rational(1000001, 7));
  PowerProduct other(1);
  other.times(2, Rational(2000000, 7));
  // 3^(1000001/7) < 4^(1000000/7)
  const auto c = compare(big, other, 1024);
  EXPECT_EQ(c.order, std::strong_ordering::less);
  EXPECT_FALSE(c.exact);
}
