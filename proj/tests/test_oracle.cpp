#include "hbsg/errors.hpp"
#include "hbsg/oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hbsg;
using namespace hbsg::testing;

TEST(Oracle, HandValues) {
  EXPECT_EQ(oracle::brute_energy(ints({0, 1}), ints({0, 1})), 6u);
  EXPECT_EQ(oracle::brute_energy(interval(0, 8), interval(0, 8)), 344u);
  EXPECT_EQ(oracle::brute_sumset(ints({0, 1, 3}), ints({0, 1, 3})).size(), 6u);
  EXPECT_EQ(oracle::brute_iterated(ints({0, 1}), 3), ints({0, 1, 2, 3}));
  EXPECT_EQ(oracle::brute_difference(ints({0, 1}), ints({0, 1})), ints({-1, 0, 1}));
}

TEST(Oracle, GroupArithmetic) {
  const auto z7 = GroupSpec::cyclic(7);
  EXPECT_EQ(oracle::add(z7, {5}, {4}).value, 2);
  EXPECT_EQ(oracle::negate(z7, {3}).value, 4);
  const auto f32 = GroupSpec::vector_space(3, 2);
  // (1,2) + (2,2) = (0,1)
  EXPECT_EQ(oracle::add(f32, {1 * 3 + 2}, {2 * 3 + 2}).value, 1);
  EXPECT_EQ(oracle::negate(f32, {1 * 3 + 2}).value, 2 * 3 + 1);
  EXPECT_THROW(oracle::add(GroupSpec::integer_window(0, 5), {3}, {3}), WindowOverflow);
}

TEST(Oracle, SigmaOfSmallSets) {
  const ElemSet a = ints({0, 1});
  EXPECT_TRUE(oracle::brute_sigma(StringSet::none(a, 2)).empty());
  const std::vector<AString> gone{str(a.spec(), {1, 1, 1})};
  // only (1,1,1) sums to 3
  EXPECT_EQ(oracle::brute_sigma(StringSet::with_deletions(a, 3, gone)), ints({0, 1, 2}));
  const ElemSet b = ints({0, 1, 2, 3});
  const std::vector<AString> two{str(b.spec(), {0, 1}), str(b.spec(), {2, 3})};
  EXPECT_EQ(oracle::brute_sigma(StringSet::from_strings(b, 2, two)), ints({1, 5}));
}

TEST(Oracle, AllStringsIsLexicographic) {
  const auto all = oracle::all_strings(ints({0, 1}), 2);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(all[1], str(window(), {0, 1}));
  EXPECT_EQ(all[2], str(window(), {1, 0}));
}

TEST(Oracle, BestSubsetGrowth) {
  const ElemSet ap = interval(0, 8);
  const auto best = oracle::best_subset_growth(ap, 2, 4);
  EXPECT_EQ(best.size, 7u);
  EXPECT_EQ(best.best, ints({0, 1, 2, 3}));
  const auto whole = oracle::best_subset_growth(ap, 2, 8);
  EXPECT_EQ(whole.best, ap);
  EXPECT_EQ(whole.size, 15u);
}

TEST(Oracle, BestSubsetPrefersProgressionPart) {
  const ElemSet mixed = ints({0, 1, 2, 3, 4, 17, 40, 95});
  const auto best = oracle::best_subset_growth(mixed, 2, 5);
  EXPECT_EQ(best.best, ints({0, 1, 2, 3, 4}));
  EXPECT_EQ(best.size, 9u);
}

TEST(Oracle, CompareExpressions) {
  // 61 < 16^(3/2) = 64
  const Expression lhs(factor("s", 61));
  const Expression rhs(factor("a", 16, {}, Rational(3, 2)));
  EXPECT_EQ(oracle::compare_expressions(lhs, rhs).sign, -1);
  EXPECT_TRUE(oracle::holds(oracle::compare_expressions(lhs, rhs), Relation::lt));
  // 8^(1/3) == 2
  const oracle::Verdict v = oracle::compare_expressions(Expression(factor("x", 8, {}, Rational(1, 3))),
                                                Expression(Rational(2)));
  EXPECT_EQ(v.sign, 0);
  EXPECT_TRUE(v.exact);
  // 0 * anything == 0
  EXPECT_EQ(oracle::compare_expressions(Expression(factor("z", 0)), Expression(Rational(0))).sign, 0);
}

TEST(Oracle, LimitsAreEnforced) {
  oracle::OracleLimits tight;
  tight.max_enumeration = 10;
  EXPECT_THROW(oracle::all_strings(interval(0, 4), 2, tight), BudgetExceeded);
}
