#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the metric or sampler code it is checking.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "lrvs/graph.hpp"
#include "lrvs/partition.hpp"

namespace oracle {

using lrvs::DualGraph;
using lrvs::NodeIndex;
using lrvs::PrecinctAttributes;
using lrvs::VoteCount;

inline std::string grid_id(int r, int c, int cols) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "p%03d", r * cols + c);
  return buf;
}

/// rows x cols rook-adjacent grid with one election "E". Node index equals
/// r * cols + c because ids are zero-padded.
inline DualGraph grid(int rows, int cols,
                      const std::function<void(int, int, PrecinctAttributes&)>& fill = {}) {
  std::vector<PrecinctAttributes> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      PrecinctAttributes p;
      p.id = grid_id(r, c, cols);
      p.population = 1;
      p.votes = {VoteCount{1, 1}};
      p.centroid = {static_cast<double>(c), static_cast<double>(r)};
      p.area = 1.0;
      if (fill) fill(r, c, p);
      nodes.push_back(std::move(p));
      if (c + 1 < cols) edges.emplace_back(grid_id(r, c, cols), grid_id(r, c + 1, cols));
      if (r + 1 < rows) edges.emplace_back(grid_id(r, c, cols), grid_id(r + 1, c, cols));
    }
  return DualGraph::build({"E"}, std::move(nodes), edges);
}

inline bool induced_connected(const DualGraph& g, const std::vector<int>& label, int which) {
  std::vector<NodeIndex> members;
  for (NodeIndex v = 0; v < label.size(); ++v)
    if (label[v] == which) members.push_back(v);
  if (members.empty()) return false;
  std::vector<char> seen(label.size(), 0);
  std::queue<NodeIndex> q;
  q.push(members.front());
  seen[members.front()] = 1;
  std::size_t count = 0;
  while (!q.empty()) {
    NodeIndex v = q.front();
    q.pop();
    ++count;
    for (NodeIndex w : g.neighbors(v))
      if (!seen[w] && label[w] == which) {
        seen[w] = 1;
        q.push(w);
      }
  }
  return count == members.size();
}

/// Every valid two-district plan, as label vectors with node 0 in district 0.
inline std::vector<std::vector<int>> enumerate_two_district_plans(const DualGraph& g, double tolerance) {
  const std::size_t n = g.num_nodes();
  const double ideal = static_cast<double>(g.total_population()) / 2.0;
  std::vector<std::vector<int>> out;
  for (std::uint64_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
    std::vector<int> label(n, 0);
    std::int64_t pop1 = 0;
    for (std::size_t v = 1; v < n; ++v)
      if (mask >> (v - 1) & 1) {
        label[v] = 1;
        pop1 += g.node(static_cast<NodeIndex>(v)).population;
      }
    const double pop0 = static_cast<double>(g.total_population() - pop1);
    if (std::abs(static_cast<double>(pop1) - ideal) > tolerance * ideal ||
        std::abs(pop0 - ideal) > tolerance * ideal)
      continue;
    if (induced_connected(g, label, 0) && induced_connected(g, label, 1)) out.push_back(label);
  }
  return out;
}

/// Two-district plan in the same normal form as the enumeration.
inline std::vector<int> normal_form(const lrvs::Plan& plan) {
  std::vector<int> label(plan.size());
  const auto first = plan[0];
  for (std::size_t v = 0; v < plan.size(); ++v) label[v] = plan[v] == first ? 0 : 1;
  return label;
}

/// Spanning-tree count by the matrix-tree theorem.
inline double kirchhoff_count(const DualGraph& g) {
  const std::size_t n = g.num_nodes();
  if (n <= 1) return 1.0;
  std::vector<std::vector<long double>> L(n - 1, std::vector<long double>(n - 1, 0.0L));
  for (const auto& e : g.edges()) {
    for (NodeIndex a : {e.u, e.v})
      if (a > 0) L[a - 1][a - 1] += 1.0L;
    if (e.u > 0 && e.v > 0) {
      L[e.u - 1][e.v - 1] -= 1.0L;
      L[e.v - 1][e.u - 1] -= 1.0L;
    }
  }
  long double det = 1.0L;
  const std::size_t m = n - 1;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t p = i;
    for (std::size_t r = i + 1; r < m; ++r)
      if (std::fabs(L[r][i]) > std::fabs(L[p][i])) p = r;
    if (L[p][i] == 0.0L) return 0.0;
    if (p != i) {
      std::swap(L[p], L[i]);
      det = -det;
    }
    det *= L[i][i];
    for (std::size_t r = i + 1; r < m; ++r) {
      const long double f = L[r][i] / L[i][i];
      for (std::size_t c = i; c < m; ++c) L[r][c] -= f * L[i][c];
    }
  }
  return static_cast<double>(std::round(det));
}

// ---------------------------------------------------------------------------
// Metric oracles. District data is given as raw (rep, dem) counts.

struct Tally {
  std::int64_t rep = 0;
  std::int64_t dem = 0;
};

inline double rep_share(const Tally& t) { return static_cast<double>(t.rep) / static_cast<double>(t.rep + t.dem); }

inline double statewide(const std::vector<Tally>& ds) {
  std::int64_t rep = 0, tot = 0;
  for (const auto& d : ds) {
    rep += d.rep;
    tot += d.rep + d.dem;
  }
  return static_cast<double>(rep) / static_cast<double>(tot);
}

/// Republican seat share after shifting every district by v - V.
inline double seats_at(const std::vector<Tally>& ds, double v) {
  const double V = statewide(ds);
  int won = 0;
  for (const auto& d : ds)
    if (rep_share(d) + (v - V) > 0.5) ++won;
  return static_cast<double>(won) / static_cast<double>(ds.size());
}

/// Seat share minus 1/2 at v = 1/2, comparing rep_d / T_d with R / T in
/// integers; a district exactly at the statewide share is half a seat.
inline double bias_exact(const std::vector<Tally>& ds) {
  std::int64_t R = 0, T = 0;
  for (const auto& d : ds) {
    R += d.rep;
    T += d.rep + d.dem;
  }
  double seats = 0.0;
  for (const auto& d : ds) {
    const std::int64_t lhs = d.rep * T, rhs = R * (d.rep + d.dem);
    seats += lhs > rhs ? 1.0 : lhs == rhs ? 0.5 : 0.0;
  }
  return seats / static_cast<double>(ds.size()) - 0.5;
}

/// Midpoint rule on a uniform grid of `cells` cells. Exact when every
/// breakpoint of the seats-votes curve lies on the grid.
inline double gini_quadrature(const std::vector<Tally>& ds, int cells = 1 << 16) {
  const double h = 1.0 / cells;
  double area = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double v = (i + 0.5) * h;
    area += std::abs(seats_at(ds, v) - (1.0 - seats_at(ds, 1.0 - v))) * h;
  }
  return area;
}

/// (wasted D - wasted R) / total, counted in half-votes to stay in integers.
inline double efficiency_gap_wasted(const std::vector<Tally>& ds) {
  std::int64_t wasted2_r = 0, wasted2_d = 0, total = 0;
  for (const auto& d : ds) {
    const std::int64_t t = d.rep + d.dem;
    total += t;
    if (d.rep > d.dem) {
      wasted2_r += 2 * d.rep - t;
      wasted2_d += 2 * d.dem;
    } else {
      wasted2_d += 2 * d.dem - t;
      wasted2_r += 2 * d.rep;
    }
  }
  return static_cast<double>(wasted2_d - wasted2_r) / (2.0 * static_cast<double>(total));
}

/// Declination in its usual form on Democratic shares (positive favors
/// Republicans): 2/pi * (theta_win - theta_lose) with arm angles measured
/// from the point (fraction of Democratic losses, 1/2).
inline double declination_dem(std::vector<double> dem_shares) {
  std::vector<double> lose, win;
  for (double s : dem_shares) (s >= 0.5 ? win : lose).push_back(s);
  const double n = static_cast<double>(dem_shares.size());
  const double ybar_lose = std::accumulate(lose.begin(), lose.end(), 0.0) / static_cast<double>(lose.size());
  const double ybar_win = std::accumulate(win.begin(), win.end(), 0.0) / static_cast<double>(win.size());
  const double theta_lose = std::atan((1.0 - 2.0 * ybar_lose) / (static_cast<double>(lose.size()) / n));
  const double theta_win = std::atan((2.0 * ybar_win - 1.0) / (static_cast<double>(win.size()) / n));
  return 2.0 / std::numbers::pi * (theta_win - theta_lose);
}

inline double buffered_declination(const std::vector<Tally>& ds, double buffer = 0.75) {
  std::vector<double> dem;
  for (const auto& d : ds) dem.push_back(1.0 - rep_share(d));
  dem.push_back(buffer);
  dem.push_back(1.0 - buffer);
  return declination_dem(dem);
}

/// Average absolute partisan dislocation computed precinct by precinct.
inline double aapd(const DualGraph& g, const std::vector<int>& label, int k, std::size_t e = 0) {
  const std::size_t n = g.num_nodes();
  std::int64_t state_total = 0;
  for (const auto& p : g.nodes()) state_total += p.votes[e].two_party();
  const double quota = static_cast<double>(state_total) / k;

  std::vector<std::int64_t> drep(k, 0), dtot(k, 0);
  for (std::size_t v = 0; v < n; ++v) {
    drep[label[v]] += g.nodes()[v].votes[e].rep;
    dtot[label[v]] += g.nodes()[v].votes[e].two_party();
  }
  double sum = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& c = g.nodes()[v].centroid;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto dist = [&](std::size_t w) {
      if (w == v) return -1.0;
      const auto& p = g.nodes()[w].centroid;
      return std::hypot(p.x - c.x, p.y - c.y);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
    std::int64_t rep = 0, tot = 0;
    for (std::size_t w : order) {
      rep += g.nodes()[w].votes[e].rep;
      tot += g.nodes()[w].votes[e].two_party();
      if (static_cast<double>(tot) >= quota) break;
    }
    const double neighborhood = static_cast<double>(rep) / static_cast<double>(tot);
    const double district = static_cast<double>(drep[label[v]]) / static_cast<double>(dtot[label[v]]);
    sum += std::abs(district - neighborhood);
  }
  return sum / static_cast<double>(n);
}

inline bool close_rel(double got, double want, double rel = 1e-9, double abs_floor = 1e-12) {
  return std::abs(got - want) <= std::max(rel * std::max(std::abs(got), std::abs(want)), abs_floor);
}

}  // namespace oracle
