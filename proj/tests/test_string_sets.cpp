#include "hbsg/errors.hpp"
#include "hbsg/oracle.hpp"
#include "hbsg/strings.hpp"
#include "hbsg/sumset.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hbsg;
using namespace hbsg::testing;

namespace {

std::vector<AString> members(const StringSet& s) { return s.strings(); }

}  // namespace

TEST(StringSet, EncodingIsMixedRadixFirstCoordinateMajor) {
  const ElemSet a = ints({-1, 4, 9});
  const StringSet full = StringSet::full(a, 3);
  EXPECT_EQ(full.size(), 27u);
  const AString s = str(a.spec(), {4, -1, 9});
  EXPECT_EQ(full.encode(s), 1u * 9 + 0 * 3 + 2);
  EXPECT_EQ(full.decode(11), s);
  EXPECT_EQ(full.radix_power(2), 9u);
  EXPECT_THROW(full.encode(str(a.spec(), {4, 5, 9})), InvalidArgument);
}

TEST(StringSet, FullProductSizes) {
  EXPECT_EQ(StringSet::full(interval(0, 16), 4).size(), 65536u);
  EXPECT_EQ(StringSet::none(interval(0, 3), 2).size(), 0u);
}

TEST(StringSet, FormsAgree) {
  std::mt19937_64 rng(5);
  const ElemSet a = interval(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const StringSet s = random_strings(rng, a, 3, 1 + trial % 4, 4);
    const StringSet e = s.as_explicit();
    const StringSet c = s.as_complement();
    EXPECT_EQ(e.form(), StringSet::Form::explicit_list);
    EXPECT_EQ(c.form(), StringSet::Form::complement);
    EXPECT_EQ(e, c);
    EXPECT_EQ(e.member_codes(), c.member_codes());
    EXPECT_EQ(e.size(), c.size());
    EXPECT_EQ(sigma(e), sigma(c));
  }
}

TEST(StringSet, DeletionsAndMembership) {
  const ElemSet a = ints({0, 1});
  const auto g = a.spec();
  std::vector<AString> deleted{str(g, {1, 0})};
  const StringSet s = StringSet::with_deletions(a, 2, deleted);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_FALSE(s.contains(str(g, {1, 0})));
  EXPECT_TRUE(s.contains(str(g, {0, 1})));
  EXPECT_EQ(members(s), (std::vector<AString>{str(g, {0, 0}), str(g, {0, 1}), str(g, {1, 1})}));
}

TEST(Sigma, SmallExamples) {
  const ElemSet a = ints({0, 1});
  EXPECT_EQ(sigma(StringSet::full(a, 2)), ints({0, 1, 2}));
  EXPECT_EQ(sigma(StringSet::full(interval(0, 16), 4)), interval(0, 61));
  const StringSet one = StringSet::from_strings(a, 3, std::vector<AString>{str(a.spec(), {1, 0, 1})});
  EXPECT_EQ(sigma(one), ints({2}));
  EXPECT_TRUE(sigma(StringSet::none(a, 2)).empty());
}

TEST(Fibers, SmallExample) {
  const ElemSet a = ints({0, 1});
  const auto g = a.spec();
  const StringSet s = StringSet::from_strings(
      a, 2, std::vector<AString>{str(g, {0, 0}), str(g, {0, 1}), str(g, {1, 1})});
  EXPECT_EQ(right_fiber(s, str(g, {0})).size(), 2u);
  EXPECT_EQ(members(right_fiber(s, str(g, {1}))), std::vector<AString>{str(g, {1})});
  EXPECT_EQ(left_fiber(s, str(g, {1})).size(), 2u);
  EXPECT_EQ(members(left_fiber(s, str(g, {0}))), std::vector<AString>{str(g, {0})});
  EXPECT_EQ(members(append_suffix(right_fiber(s, str(g, {1})), str(g, {0}))),
            std::vector<AString>{str(g, {1, 0})});
}

TEST(Fibers, MatchOracleAndPartitionS) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const GroupSpec g = random_group(rng);
    const ElemSet a = random_set(rng, g, 2, 5);
    const int k = 2 + trial % 3;
    const StringSet s = random_strings(rng, a, k, 2, 3);
    EXPECT_EQ(sigma(s), oracle::brute_sigma(s));
    for (int j = 1; j < k; ++j) {
      std::uint64_t total = 0;
      for (const auto& x : oracle::all_strings(a, j)) {
        const StringSet r = right_fiber(s, x);
        EXPECT_EQ(r.strings(), oracle::brute_fiber(s, x));
        total += r.size();
      }
      EXPECT_EQ(total, s.size());
      for (const auto& y : oracle::all_strings(a, k - j)) {
        EXPECT_EQ(left_fiber(s, y).strings(), oracle::brute_left_fiber(s, y));
      }
    }
  }
}

TEST(Fibers, RestrictByRightCountsOverlaps) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const ElemSet a = random_set(rng, window(), 2, 5);
    const StringSet s = random_strings(rng, a, 4, 3, 4);
    for (const auto& x : oracle::all_strings(a, 2)) {
      const StringSet r = right_fiber(s, x);
      const StringSet restricted = restrict_by_right(s, r);
      EXPECT_EQ(restricted.size(), oracle::brute_fiber_overlap(s, x));
      for (const auto& m : restricted.strings()) EXPECT_TRUE(s.contains(m));
    }
  }
}

TEST(Reduction, PowerOfTwoIdentity) {
  const StringSet s = StringSet::full(interval(0, 3), 4);
  const auto r = reduce_to_power_of_two(s);
  EXPECT_EQ(r.reduced_k, 4);
  EXPECT_TRUE(r.suffix.coords.empty());
  EXPECT_TRUE(r.certs.empty());
  EXPECT_EQ(r.reduced, s);
}

TEST(Reduction, OddLengthKeepsDensityAndSums) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const ElemSet a = random_set(rng, window(), 2, 4);
    const int k = trial % 2 ? 3 : 6;
    const StringSet s = random_strings(rng, a, k, 3, 4);
    if (s.empty()) continue;
    const auto r = reduce_to_power_of_two(s);
    EXPECT_EQ(r.reduced_k, k == 3 ? 2 : 4);
    EXPECT_EQ(r.suffix.length(), static_cast<std::size_t>(k - r.reduced_k));
    for (const auto& c : r.certs) EXPECT_TRUE(c.pass) << c.op;
    for (const auto& m : r.reduced_with_suffix.strings()) EXPECT_TRUE(s.contains(m));
    EXPECT_TRUE(sigma(r.reduced_with_suffix).is_subset_of(sigma(s)));
  }
}

TEST(GraphSumset, CompleteGraphIsSumset) {
  const ElemSet a = ints({0, 1, 3});
  const ElemSet b = ints({0, 10});
  EXPECT_EQ(graph_restricted_sumset(a, b, BipartiteGraph::complete(3, 2)), sumset(a, b));
  const BipartiteGraph diag(3, 2, {{0, 0}, {2, 1}, {2, 1}});
  EXPECT_EQ(diag.edge_count(), 2u);
  EXPECT_EQ(graph_restricted_sumset(a, b, diag), ints({0, 13}));
  EXPECT_THROW(BipartiteGraph(2, 2, {{2, 0}}), InvalidArgument);
}

TEST(GraphSumset, MatchesOracle) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupSpec g = random_group(rng);
    const ElemSet a = random_set(rng, g, 1, 10);
    const ElemSet b = random_set(rng, g, 1, 10);
    std::vector<BipartiteGraph::Edge> edges;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (harness::uniform_below(rng, 2)) edges.emplace_back(i, j);
    const BipartiteGraph graph(a.size(), b.size(), edges);
    EXPECT_EQ(graph_restricted_sumset(a, b, graph), oracle::brute_graph_sumset(a, b, graph));
  }
}

TEST(SsvCheck, CompleteGraphOnAp) {
  const ElemSet a = interval(0, 8);
  const auto report = ssv_bound_check(a, a, BipartiteGraph::complete(8, 8), a, a, Rational(1),
                                      Rational(2));
  for (const auto& c : report.hypotheses) EXPECT_TRUE(c.pass) << c.op;
  EXPECT_TRUE(report.conclusions_pass());
}
