#include "hbsg/bsg.hpp"
#include "hbsg/errors.hpp"
#include "hbsg/oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hbsg;
using namespace hbsg::testing;

TEST(EnergyDensity, Values) {
  EXPECT_EQ(energy_density(ints({0, 1}), ints({0, 1})), Rational(3, 4));
  EXPECT_EQ(energy_density(ints({5}), ints({5})), Rational(1));
  EXPECT_EQ(energy_density(interval(0, 8), interval(0, 8)), Rational(344, 512));
  EXPECT_THROW(energy_density(ints({0, 1}), ints({0})), InvalidArgument);
}

TEST(Bsg, ApIsAcceptedWhole) {
  const ElemSet ap = interval(0, 8);
  const auto r = bsg_extract(ap, ap);
  EXPECT_EQ(r.source, "full-set");
  EXPECT_EQ(r.x_prime, ap);
  EXPECT_EQ(r.energy, 344u);
  EXPECT_EQ(r.doubled_size, 15u);
  EXPECT_TRUE(r.pass());
}

TEST(Bsg, Singleton) {
  const ElemSet x = ints({3});
  const auto r = bsg_extract(x, x);
  EXPECT_EQ(r.x_prime, x);
  EXPECT_EQ(r.doubled_size, 1u);
  EXPECT_TRUE(r.pass());
}

TEST(Bsg, StricterExponentForcesSearch) {
  // with a tiny kappa the full set of a Sidon-like set fails the doubling bound
  const ElemSet x = ints({0, 1, 3, 7, 12, 20, 30, 44});
  BsgConfig cfg;
  cfg.kappa = Rational(1, 100);
  const auto r = bsg_extract(x, x, cfg);
  EXPECT_NE(r.source, "full-set");
  EXPECT_TRUE(r.x_prime.is_subset_of(x));
}

TEST(BsgProperty, FlagsMatchIndependentMeasurement) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const ElemSet x = random_set(rng, window(), 1, 14);
    BsgConfig cfg;
    cfg.kappa = trial % 2 ? Rational(20) : Rational(1, 4);
    const auto r = bsg_extract(x, x, cfg);
    ASSERT_TRUE(r.x_prime.is_subset_of(x));
    const std::uint64_t e = oracle::brute_energy(x, x);
    EXPECT_EQ(r.energy, e);
    const std::uint64_t doubled = oracle::brute_sumset(r.x_prime, r.x_prime).size();
    EXPECT_EQ(r.doubled_size, doubled);
    const BigInt n = x.size();
    Expression size_rhs = Expression(factor("E", e)).times(factor("n", n));
    size_rhs.factors[0].exponent = cfg.kappa;
    size_rhs.factors[1].exponent = 1 - 3 * cfg.kappa;
    Expression dbl_rhs = Expression(factor("E", e, {}, -cfg.kappa)).times(factor("n", n, {}, 1 + 3 * cfg.kappa));
    EXPECT_EQ(r.size_cert.pass,
              oracle::holds(oracle::compare_expressions(Expression(factor("|X'|", r.x_prime.size())), size_rhs),
                            Relation::ge));
    EXPECT_EQ(r.doubling_cert.pass,
              oracle::holds(oracle::compare_expressions(Expression(factor("|X'+X'|", doubled)), dbl_rhs),
                            Relation::le));
  }
}
