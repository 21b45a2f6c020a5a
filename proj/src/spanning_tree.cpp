#include "lrvs/spanning_tree.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace lrvs {

SpanningTree random_spanning_tree(const DualGraph& graph, std::span<const NodeIndex> region, Rng& rng) {
  if (region.empty()) throw std::invalid_argument("spanning tree of an empty region");
  const std::size_t n = region.size();

  std::unordered_map<NodeIndex, int> local;
  local.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) local.emplace(region[i], static_cast<int>(i));

  std::vector<std::vector<int>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (NodeIndex w : graph.neighbors(region[i])) {
      auto it = local.find(w);
      if (it != local.end()) adj[i].push_back(it->second);
    }

  {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
    }
    if (reached != n) throw std::invalid_argument("spanning tree region is disconnected");
  }

  SpanningTree tree;
  tree.nodes.assign(region.begin(), region.end());
  tree.parent.assign(n, -1);
  std::vector<bool> in_tree(n, false);
  const int root = static_cast<int>(rng.below(n));
  in_tree[root] = true;

  // Wilson: walk from each vertex until the tree is hit, remembering only the
  // last exit from every vertex (implicit loop erasure), then retrace.
  std::vector<int> next(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    int u = static_cast<int>(s);
    while (!in_tree[u]) {
      const auto& nb = adj[u];
      next[u] = nb[rng.below(nb.size())];
      u = next[u];
    }
    u = static_cast<int>(s);
    while (!in_tree[u]) {
      in_tree[u] = true;
      tree.parent[u] = next[u];
      u = next[u];
    }
  }

  // Root-first order via children lists.
  std::vector<std::vector<int>> children(n);
  for (std::size_t i = 0; i < n; ++i)
    if (tree.parent[i] >= 0) children[tree.parent[i]].push_back(static_cast<int>(i));
  tree.order.reserve(n);
  tree.order.push_back(root);
  for (std::size_t head = 0; head < tree.order.size(); ++head)
    for (int c : children[tree.order[head]]) tree.order.push_back(c);

  tree.subtree_population.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) tree.subtree_population[i] = graph.node(region[i]).population;
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it)
    if (tree.parent[*it] >= 0) tree.subtree_population[tree.parent[*it]] += tree.subtree_population[*it];
  return tree;
}

std::vector<int> balanced_cut_candidates(const SpanningTree& tree, double target, double tolerance) {
  const auto total = static_cast<double>(tree.total_population());
  const double slack = tolerance * target;
  std::vector<int> out;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.parent[i] < 0) continue;
    const auto below = static_cast<double>(tree.subtree_population[i]);
    if (std::abs(below - target) <= slack && std::abs(total - below - target) <= slack)
      out.push_back(static_cast<int>(i));
  }
  return out;
}

std::optional<TreeCut> balanced_tree_cut(const SpanningTree& tree, double target, double tolerance,
                                         Rng& rng) {
  const auto candidates = balanced_cut_candidates(tree, target, tolerance);
  if (candidates.empty()) return std::nullopt;
  const int cut = candidates[rng.below(candidates.size())];

  std::vector<bool> below(tree.nodes.size(), false);
  below[cut] = true;
  for (int v : tree.order)
    if (tree.parent[v] >= 0 && below[tree.parent[v]]) below[v] = true;

  TreeCut out;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    (below[i] ? out.subtree : out.rest).push_back(tree.nodes[i]);
  return out;
}

std::optional<TreeCut> balanced_tree_cut(const SpanningTree& tree, double tolerance, Rng& rng) {
  return balanced_tree_cut(tree, static_cast<double>(tree.total_population()) / 2.0, tolerance, rng);
}

}  // namespace lrvs
