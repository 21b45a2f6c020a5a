#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lrvs/graph.hpp"
#include "lrvs/rng.hpp"

namespace lrvs {

/// Rooted spanning tree of an induced region. Everything is indexed by the
/// position of a node in `nodes`.
struct SpanningTree {
  std::vector<NodeIndex> nodes;
  std::vector<int> parent;                       // -1 at the root
  std::vector<int> order;                        // parents before children
  std::vector<std::int64_t> subtree_population;  // population below and including each node

  std::int64_t total_population() const {
    return order.empty() ? 0 : subtree_population[order.front()];
  }
};

/// Uniform spanning tree of the subgraph induced by `region` (Wilson's
/// loop-erased random walk). Throws std::invalid_argument if the region is
/// empty or disconnected.
SpanningTree random_spanning_tree(const DualGraph& graph, std::span<const NodeIndex> region, Rng& rng);

struct TreeCut {
  std::vector<NodeIndex> subtree;  // side below the removed edge
  std::vector<NodeIndex> rest;
};

/// Local indices of nodes whose parent edge splits the tree into two parts
/// each within `tolerance * target` of `target`.
std::vector<int> balanced_cut_candidates(const SpanningTree& tree, double target, double tolerance);

/// Removes a uniformly chosen balanced edge; std::nullopt if none qualifies.
std::optional<TreeCut> balanced_tree_cut(const SpanningTree& tree, double target, double tolerance,
                                         Rng& rng);
/// Target defaults to half the tree population.
std::optional<TreeCut> balanced_tree_cut(const SpanningTree& tree, double tolerance, Rng& rng);

}  // namespace lrvs
