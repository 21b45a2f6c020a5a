#include <gtest/gtest.h>

#include <random>

#include "lrvs/superdistrict.hpp"

using namespace lrvs;

namespace {

DualGraph scattered(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<PrecinctAttributes> nodes;
  for (int i = 0; i < n; ++i) {
    PrecinctAttributes p;
    char id[8];
    std::snprintf(id, sizeof id, "s%03d", i);
    p.id = id;
    p.population = 100;
    const std::int64_t total = 50 + static_cast<std::int64_t>(gen() % 50);
    const std::int64_t dem = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(total + 1));
    p.votes = {VoteCount{total - dem, dem}};
    nodes.push_back(p);
  }
  return DualGraph::build({"E"}, nodes, {});
}

}  // namespace

TEST(SuperDistrict, ToySwapGainIsExact) {
  // A holds 10 of 30 Democratic votes; trading a (1 of 5) precinct for a
  // (4 of 10) precinct gives 13 of 35.
  const double gain = swap_gain(10, 30, 1, 5, 4, 10);
  EXPECT_NEAR(gain, 4.0 / 105.0, 1e-16);
  EXPECT_NEAR(10.0 / 30.0 + gain, 13.0 / 35.0, 1e-16);
  EXPECT_THROW(swap_gain(10, 30, 10, 30, 0, 0), std::domain_error);
}

TEST(SuperDistrict, SeedFillsHalfByDescendingShare) {
  const auto g = scattered(40, 1);
  const auto [a, b] = seed_by_share(g, 0);
  EXPECT_EQ(a.members.size() + b.members.size(), 40u);
  EXPECT_EQ(a.population, 2000);
  double min_a = 1.0, max_b = 0.0;
  for (NodeIndex v : a.members) {
    const auto& x = g.node(v).votes[0];
    min_a = std::min(min_a, static_cast<double>(x.dem) / static_cast<double>(x.two_party()));
  }
  for (NodeIndex v : b.members) {
    const auto& x = g.node(v).votes[0];
    max_b = std::max(max_b, static_cast<double>(x.dem) / static_cast<double>(x.two_party()));
  }
  EXPECT_GE(min_a, max_b);
}

TEST(SuperDistrict, GreedySharesIncreaseStrictlyAndTerminate) {
  const auto g = scattered(60, 2);
  // Start from a poor split so there is room to improve.
  std::vector<NodeIndex> a, b;
  for (NodeIndex v = 0; v < 60; ++v) (v % 2 ? a : b).push_back(v);
  const auto sa = SuperDistrictState::from_members(g, 0, a);
  const auto sb = SuperDistrictState::from_members(g, 0, b);
  const auto r = greedy_improve(g, 0, sa, sb, 0.01);
  ASSERT_FALSE(r.swaps.empty());
  double prev = sa.dem_share();
  for (const auto& s : r.swaps) {
    EXPECT_GT(s.share_after, prev);
    prev = s.share_after;
  }
  EXPECT_DOUBLE_EQ(r.a.dem_share(), prev);
  EXPECT_EQ(r.a.population + r.b.population, g.total_population());
  // Local optimum: no feasible swap improves A.
  for (NodeIndex o : r.a.members)
    for (NodeIndex i : r.b.members) EXPECT_LE(swap_gain(g, 0, r.a, o, i), 1e-15);
}

TEST(SuperDistrict, SplitKeepsPopulationAndReportsFeasibility) {
  const auto g = scattered(40, 3);
  const auto [a, b] = seed_by_share(g, 0);
  const auto s = split_superdistrict(g, 0, a, g.total_population() / 4.0, 0.05, true);
  EXPECT_EQ(s.parts[0].population + s.parts[1].population, a.population);
  EXPECT_EQ(s.parts[0].members.size() + s.parts[1].members.size(), a.members.size());
  if (s.feasible) {
    EXPECT_GT(s.parts[0].dem_share(), 0.5);
    EXPECT_GT(s.parts[1].dem_share(), 0.5);
  }
  EXPECT_THROW(split_superdistrict(g, 0, SuperDistrictState{}, 1.0, 0.01), std::invalid_argument);
}

TEST(SuperDistrict, SearchBuildsFourDistrictPlan) {
  const auto g = scattered(80, 4);
  const auto r = run_superdistrict_search(g, 0, 0.02);
  EXPECT_EQ(r.plan.k(), 4u);
  EXPECT_EQ(r.plan.size(), 80u);
  EXPECT_GE(r.greedy.a.dem_share(), r.seeded_a.dem_share());
}
