#include "hbsg/errors.hpp"
#include "hbsg/json_io.hpp"
#include "hbsg/oracle.hpp"
#include "hbsg/pipeline.hpp"
#include "hbsg/sumset.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hbsg;
using namespace hbsg::testing;

namespace {

StringSet deleted_fraction(const ElemSet& a, int k, std::uint64_t seed, std::uint64_t per_mille) {
  std::mt19937_64 rng(seed);
  const std::uint64_t total = StringSet::full(a, k).universe();
  auto codes = harness::sample_distinct(rng, total, total * per_mille / 1000);
  return StringSet::from_codes(a, k, {codes.begin(), codes.end()}, StringSet::Form::complement);
}

PipelineParams demo_params() {
  PipelineParams p;
  p.epsilon = Rational(1, 5);
  p.c = Rational(3, 2);
  p.delta = Rational(1, 20);
  return p;
}

}  // namespace

TEST(Params, Validation) {
  PipelineParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.descent_exponent(), Rational(2999, 3000));
  p.epsilon = Rational(1, 2);
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.c = 1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.ell_list = {0};
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Hypotheses, FullProductAp) {
  PipelineParams p = demo_params();
  p.delta = Rational(1, 10);
  const ElemSet a = interval(0, 16);
  const auto certs = check_hypotheses(a, StringSet::full(a, 4), p);
  ASSERT_EQ(certs.size(), 2u);
  EXPECT_TRUE(certs[0].pass);
  EXPECT_TRUE(certs[1].pass);
  EXPECT_EQ(certs[1].lhs.factors.front().value, 61);
}

TEST(Hypotheses, EmptyAndSaturated) {
  const ElemSet a = interval(0, 16);
  EXPECT_FALSE(check_hypotheses(a, StringSet::none(a, 4), demo_params())[0].pass);

  const auto z5 = GroupSpec::cyclic(5);
  const ElemSet small = ElemSet::from_values(z5, {0, 1, 2});
  PipelineParams p = demo_params();
  p.c = Rational(6, 5);
  const auto certs = check_hypotheses(small, StringSet::full(small, 4), p);
  EXPECT_TRUE(certs[0].pass);
  EXPECT_FALSE(certs[1].pass);  // |Sigma| = 5 >= 3^(6/5)
}

TEST(Pipeline, ViolatedHypothesesHalt) {
  const ElemSet a = interval(0, 16);
  const auto r = run_pipeline(a, StringSet::none(a, 4), demo_params());
  EXPECT_EQ(r.status, RunStatus::diagnostic_halt);
  EXPECT_FALSE(r.halt_reason.empty());
  EXPECT_FALSE(r.containment.has_value());
}

TEST(Pipeline, FullProductIterationIsFixedPoint) {
  const ElemSet a = interval(0, 16);
  Pipeline p(a, StringSet::full(a, 4), demo_params());
  ASSERT_TRUE(p.start());
  p.iteration_step();
  EXPECT_EQ(p.state().x, str(a.spec(), {0, 0}));
  EXPECT_EQ(p.state().s.size(), 65536u);
}

TEST(Pipeline, FullProductRunsToFinalLeg) {
  const ElemSet a = interval(0, 16);
  const auto r = run_pipeline(a, StringSet::full(a, 4), demo_params());
  ASSERT_NE(r.status, RunStatus::diagnostic_halt) << r.halt_reason;
  EXPECT_FALSE(r.a_prime.empty());
  EXPECT_TRUE(r.a_prime.is_subset_of(a));
  ASSERT_TRUE(r.containment.has_value());
  EXPECT_TRUE(r.containment->pass);
  EXPECT_EQ(r.containment->missing, 0u);
  ASSERT_EQ(r.growth.size(), 2u);
  for (const auto& row : r.growth) {
    EXPECT_EQ(row.size, iterated_sumset(r.a_prime, row.ell).size());
  }
}

TEST(Pipeline, DemoReplayIsByteIdentical) {
  const ElemSet a = interval(0, 16);
  const StringSet s = deleted_fraction(a, 4, 7, 100);
  const auto first = run_pipeline(a, s, demo_params());
  const auto second = run_pipeline(a, s, demo_params());
  EXPECT_NE(first.status, RunStatus::diagnostic_halt) << first.halt_reason;
  EXPECT_EQ(to_json(first).dump(), to_json(second).dump());
}

TEST(Pipeline, StatusFollowsBindingFailures) {
  const ElemSet a = interval(0, 16);
  const auto r = run_pipeline(a, deleted_fraction(a, 4, 3, 100), demo_params());
  if (r.status == RunStatus::diagnostic_halt) GTEST_SKIP() << r.halt_reason;
  EXPECT_EQ(r.status == RunStatus::proved_at_scale, r.ledger.binding_failures() == 0);
}

TEST(Pipeline, SingletonHeadsPassGrowth) {
  // two strings whose halves share a sum but no tail: A' is a singleton
  const ElemSet a = interval(0, 4);
  const std::vector<AString> one{str(a.spec(), {1, 1, 1, 1}), str(a.spec(), {0, 2, 1, 1})};
  PipelineParams p = demo_params();
  p.delta = Rational(4);  // makes |S| >= |A|^(k - delta) = 1 hold
  const auto r = run_pipeline(a, StringSet::from_strings(a, 4, one), p);
  ASSERT_NE(r.status, RunStatus::diagnostic_halt) << r.halt_reason;
  EXPECT_EQ(r.a_prime.size(), 1u);
  for (const auto& row : r.growth) {
    EXPECT_EQ(row.size, 1u);
    EXPECT_TRUE(row.bound.pass);
  }
}

TEST(PipelineProperty, SmallRunsAuditCleanAndContain) {
  std::mt19937_64 rng(61);
  int ran = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const ElemSet a = interval(static_cast<std::int64_t>(harness::uniform_below(rng, 5)),
                               5 + static_cast<std::int64_t>(harness::uniform_below(rng, 4)));
    PipelineParams p = demo_params();
    p.c = Rational(2);
    const StringSet s = deleted_fraction(a, 4, trial, 50);
    const auto r = run_pipeline(a, s, p);
    if (r.status == RunStatus::diagnostic_halt) continue;
    ++ran;
    ASSERT_TRUE(r.containment.has_value());
    EXPECT_TRUE(r.containment->pass);
    const auto audit = oracle::audit_ledger(r.ledger, r.store);
    EXPECT_TRUE(audit.ok()) << (audit.issues.empty() ? "" : audit.issues.front().what);
    for (const auto& row : r.growth) {
      EXPECT_EQ(row.size, oracle::brute_iterated(r.a_prime, row.ell).size());
    }
  }
  EXPECT_GT(ran, 6);
}
