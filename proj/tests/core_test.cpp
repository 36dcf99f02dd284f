#include <gtest/gtest.h>

#include <random>
#include <set>

#include "difnet/core.hpp"
#include "support/oracles.hpp"

namespace difnet {
namespace {

TEST(InfectionTime, SentinelOrdersAfterFiniteTimes) {
  EXPECT_TRUE(InfectionTime(1e300) < kUninfected);
  EXPECT_FALSE(kUninfected.infected());
  EXPECT_TRUE(InfectionTime(0.0).infected());
  EXPECT_THROW(kUninfected.value(), std::logic_error);
  EXPECT_THROW(InfectionTime(std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_THROW(InfectionTime(std::nan("")), std::invalid_argument);
}

TEST(Validate, AllUninfected) {
  CascadeSet set(3);
  set.add(Cascade{kUninfected, kUninfected, kUninfected});
  const auto v = validate(set);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].cascade, 0u);
  EXPECT_EQ(v[0].message, "no infected node");
}

TEST(Validate, NegativeTime) {
  CascadeSet set(3);
  set.add(Cascade{0.0, 1.0, kUninfected});
  set.add(Cascade{0.0, -2.0, kUninfected});
  const auto v = validate(set);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].cascade, 1u);
  EXPECT_EQ(v[0].node, NodeId{1});
  EXPECT_EQ(v[0].message, "negative time");
}

TEST(Validate, WellFormed) {
  CascadeSet set(3);
  set.add(Cascade{0.0, 1.0, kUninfected});
  EXPECT_TRUE(validate(set).empty());
}

TEST(CascadeSet, RejectsWrongLength) {
  CascadeSet set(3);
  EXPECT_THROW(set.add(Cascade{0.0, 1.0}), std::invalid_argument);
}

TEST(CandidatePairs, SingleOrderedPair) {
  CascadeSet set(3);
  set.add(Cascade{0.0, 1.0, kUninfected});
  EXPECT_EQ(candidate_pairs(set), (std::vector<Edge>{{0, 1}}));
}

TEST(CandidatePairs, TiesCannotTransmit) {
  CascadeSet set(2);
  set.add(Cascade{0.0, 0.0});
  EXPECT_TRUE(candidate_pairs(set).empty());
}

TEST(CandidatePairs, UnionOverCascades) {
  CascadeSet set(3);
  set.add(Cascade{0.0, 1.0, kUninfected});
  set.add(Cascade{kUninfected, 0.0, 1.0});
  EXPECT_EQ(candidate_pairs(set), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(CandidatePairs, MatchesPairScanAndIsMonotone) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const CascadeSet set = testing::random_cascade_set(rng, 8, 4, 6);
    std::set<Edge> expected;
    for (const Cascade& c : set.cascades()) {
      for (NodeId a = 0; a < 8; ++a) {
        for (NodeId b = 0; b < 8; ++b) {
          if (a != b && c.time(a).infected() && c.time(b).infected() && c.time(a) < c.time(b)) {
            expected.insert({a, b});
          }
        }
      }
    }
    const auto pairs = candidate_pairs(set);
    EXPECT_EQ(std::set<Edge>(pairs.begin(), pairs.end()), expected);
    EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end()));

    CascadeSet bigger = set;
    bigger.add(testing::random_cascade(rng, 8, 6));
    const auto more = candidate_pairs(bigger);
    EXPECT_TRUE(std::includes(more.begin(), more.end(), pairs.begin(), pairs.end()));
  }
}

TEST(Network, RejectsInvalidEdges) {
  EXPECT_THROW(Network(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Network(3, {{0, 1}, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(Network(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(Network(3, {{0, 1}}, {0.0}), std::invalid_argument);
  EXPECT_THROW(Network(3, {{0, 1}}, {1.0, 2.0}), std::invalid_argument);
}

TEST(Network, SortsEdgesWithRatesAndIndexes) {
  const Network net(4, {{2, 1}, {0, 3}, {0, 1}}, {0.7, 0.9, 1.1});
  ASSERT_EQ(net.edge_count(), 3u);
  EXPECT_EQ(net.edges()[0], (Edge{0, 1}));
  EXPECT_DOUBLE_EQ(net.rate(0), 1.1);
  EXPECT_EQ(net.edges()[2], (Edge{2, 1}));
  EXPECT_DOUBLE_EQ(net.rate(2), 0.7);
  EXPECT_TRUE(net.contains({0, 3}));
  EXPECT_FALSE(net.contains({3, 0}));
  const auto in1 = net.in_neighbors(1);
  EXPECT_EQ(std::vector<NodeId>(in1.begin(), in1.end()), (std::vector<NodeId>{0, 2}));
  EXPECT_EQ(net.out_range(0), (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(net.out_range(3).first, net.out_range(3).second);
}

}  // namespace
}  // namespace difnet
