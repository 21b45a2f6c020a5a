#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "lrvs/spanning_tree.hpp"
#include "oracles.hpp"

using namespace lrvs;

namespace {

using EdgeSet = std::vector<std::pair<NodeIndex, NodeIndex>>;

EdgeSet edge_set(const SpanningTree& t) {
  EdgeSet out;
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (t.parent[i] >= 0) {
      NodeIndex a = t.nodes[i], b = t.nodes[t.parent[i]];
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
  std::sort(out.begin(), out.end());
  return out;
}

DualGraph path(std::vector<std::int64_t> pops) {
  std::vector<PrecinctAttributes> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < pops.size(); ++i) {
    PrecinctAttributes p;
    p.id = "n" + std::to_string(i);
    p.population = pops[i];
    p.votes = {VoteCount{1, 1}};
    nodes.push_back(p);
    if (i) edges.emplace_back("n" + std::to_string(i - 1), p.id);
  }
  return DualGraph::build({"E"}, nodes, edges);
}

std::vector<NodeIndex> all_nodes(const DualGraph& g) {
  std::vector<NodeIndex> v(g.num_nodes());
  std::iota(v.begin(), v.end(), NodeIndex{0});
  return v;
}

}  // namespace

TEST(SpanningTree, IsATreeOverTheRegion) {
  const auto g = oracle::grid(4, 5);
  Rng rng(1);
  const auto nodes = all_nodes(g);
  for (int i = 0; i < 50; ++i) {
    const auto t = random_spanning_tree(g, nodes, rng);
    ASSERT_EQ(t.nodes.size(), 20u);
    EXPECT_EQ(std::count(t.parent.begin(), t.parent.end(), -1), 1);
    const auto es = edge_set(t);
    EXPECT_EQ(es.size(), 19u);
    for (const auto& [a, b] : es) {
      const auto& n = g.neighbors(a);
      EXPECT_TRUE(std::binary_search(n.begin(), n.end(), b));
    }
    EXPECT_EQ(t.total_population(), 20);
    // Parents precede children in `order`.
    std::vector<int> pos(t.nodes.size());
    for (std::size_t k = 0; k < t.order.size(); ++k) pos[t.order[k]] = static_cast<int>(k);
    for (std::size_t k = 0; k < t.nodes.size(); ++k)
      if (t.parent[k] >= 0) EXPECT_LT(pos[t.parent[k]], pos[k]);
  }
}

TEST(SpanningTree, RejectsEmptyOrDisconnectedRegion) {
  const auto g = oracle::grid(3, 3);
  Rng rng(2);
  EXPECT_THROW(random_spanning_tree(g, std::vector<NodeIndex>{}, rng), std::invalid_argument);
  EXPECT_THROW(random_spanning_tree(g, std::vector<NodeIndex>{0, 8}, rng), std::invalid_argument);
}

TEST(SpanningTree, DistinctTreesMatchKirchhoffCount) {
  const auto g = oracle::grid(3, 3);
  ASSERT_EQ(oracle::kirchhoff_count(g), 192.0);
  Rng rng(5);
  std::map<EdgeSet, int> seen;
  const auto nodes = all_nodes(g);
  for (int i = 0; i < 20000; ++i) ++seen[edge_set(random_spanning_tree(g, nodes, rng))];
  EXPECT_EQ(seen.size(), 192u);
  // Uniform: each tree about 104 times; 4 sigma is about 41.
  for (const auto& [_, c] : seen) {
    EXPECT_GT(c, 104 - 45);
    EXPECT_LT(c, 104 + 45);
  }
}

TEST(SpanningTree, SubRegionTreeStaysInside) {
  const auto g = oracle::grid(3, 3);
  Rng rng(9);
  const std::vector<NodeIndex> region{0, 1, 2, 5};
  const auto t = random_spanning_tree(g, region, rng);
  auto got = t.nodes;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, region);
}

TEST(TreeCut, AllPathEdgesQualifyAtWideTolerance) {
  const auto g = path({3, 1, 1, 3});
  Rng rng(3);
  const auto t = random_spanning_tree(g, all_nodes(g), rng);
  EXPECT_EQ(balanced_cut_candidates(t, 4.0, 0.3).size(), 3u);
  EXPECT_EQ(balanced_cut_candidates(t, 4.0, 0.01).size(), 1u);
}

TEST(TreeCut, PartsAreBalancedAndPartitionTheTree) {
  const auto g = oracle::grid(4, 4);
  Rng rng(4);
  int found = 0;
  for (int i = 0; i < 200; ++i) {
    const auto t = random_spanning_tree(g, all_nodes(g), rng);
    const auto cut = balanced_tree_cut(t, 0.0, rng);
    if (!cut) continue;
    ++found;
    EXPECT_EQ(cut->subtree.size(), 8u);
    EXPECT_EQ(cut->rest.size(), 8u);
    std::vector<int> lab(16, 0);
    for (NodeIndex v : cut->subtree) lab[v] = 1;
    EXPECT_TRUE(oracle::induced_connected(g, lab, 0));
    EXPECT_TRUE(oracle::induced_connected(g, lab, 1));
  }
  EXPECT_GT(found, 0);
}

TEST(TreeCut, NoBalancedEdgeGivesNullopt) {
  const auto g = path({1, 10, 1});
  Rng rng(6);
  const auto t = random_spanning_tree(g, all_nodes(g), rng);
  EXPECT_FALSE(balanced_tree_cut(t, 0.05, rng).has_value());
}
