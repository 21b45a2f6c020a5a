#include "lrvs/superdistrict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lrvs {

namespace {

using Wide = __int128;

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0
};

bool greater(const Fraction& a, const Fraction& b) {
  return static_cast<Wide>(a.num) * b.den > static_cast<Wide>(b.num) * a.den;
}

double share_of(const VoteCount& v) {
  return v.two_party() > 0 ? static_cast<double>(v.dem) / static_cast<double>(v.two_party()) : 0.0;
}

}  // namespace

SuperDistrictState SuperDistrictState::from_members(const DualGraph& graph, std::size_t election,
                                                    std::vector<NodeIndex> members) {
  SuperDistrictState s;
  std::sort(members.begin(), members.end());
  for (NodeIndex v : members) {
    const auto& n = graph.node(v);
    s.dem += n.votes.at(election).dem;
    s.rep += n.votes.at(election).rep;
    s.population += n.population;
  }
  s.members = std::move(members);
  return s;
}

std::pair<SuperDistrictState, SuperDistrictState> seed_by_share(const DualGraph& graph, std::size_t election) {
  std::vector<NodeIndex> order(graph.num_nodes());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  // Node order is id order, so a stable sort breaks share ties by id.
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return share_of(graph.node(a).votes.at(election)) > share_of(graph.node(b).votes.at(election));
  });
  const double half = static_cast<double>(graph.total_population()) / 2.0;
  std::vector<NodeIndex> a, b;
  std::int64_t pop = 0;
  for (NodeIndex v : order) {
    if (static_cast<double>(pop) < half) {
      a.push_back(v);
      pop += graph.node(v).population;
    } else {
      b.push_back(v);
    }
  }
  return {SuperDistrictState::from_members(graph, election, std::move(a)),
          SuperDistrictState::from_members(graph, election, std::move(b))};
}

double swap_gain(std::int64_t dem, std::int64_t two_party, std::int64_t out_dem, std::int64_t out_total,
                 std::int64_t in_dem, std::int64_t in_total) {
  const std::int64_t new_total = two_party - out_total + in_total;
  if (new_total == 0 || two_party == 0) throw std::domain_error("swap leaves no two-party votes");
  return static_cast<double>(dem - out_dem + in_dem) / static_cast<double>(new_total) -
         static_cast<double>(dem) / static_cast<double>(two_party);
}

double swap_gain(const DualGraph& graph, std::size_t election, const SuperDistrictState& state, NodeIndex out,
                 NodeIndex in) {
  const auto& o = graph.node(out).votes.at(election);
  const auto& i = graph.node(in).votes.at(election);
  return swap_gain(state.dem, state.two_party(), o.dem, o.two_party(), i.dem, i.two_party());
}

GreedyResult greedy_improve(const DualGraph& graph, std::size_t election, SuperDistrictState a,
                            SuperDistrictState b, double pop_tolerance) {
  const double half = static_cast<double>(graph.total_population()) / 2.0;
  const double slack = pop_tolerance * half;
  GreedyResult result;

  while (true) {
    const Fraction current{a.dem, a.two_party() > 0 ? a.two_party() : 1};
    bool found = false;
    Fraction best = current;
    std::size_t best_out = 0, best_in = 0;
    for (std::size_t i = 0; i < a.members.size(); ++i) {
      const auto& on = graph.node(a.members[i]);
      const auto& ov = on.votes[election];
      for (std::size_t j = 0; j < b.members.size(); ++j) {
        const auto& in = graph.node(b.members[j]);
        const double new_pop = static_cast<double>(a.population - on.population + in.population);
        if (std::abs(new_pop - half) > slack) continue;
        const auto& iv = in.votes[election];
        const Fraction candidate{a.dem - ov.dem + iv.dem, a.two_party() - ov.two_party() + iv.two_party()};
        if (candidate.den <= 0) continue;
        if (greater(candidate, best)) {
          best = candidate;
          best_out = i;
          best_in = j;
          found = true;
        }
      }
    }
    if (!found) break;

    const NodeIndex out = a.members[best_out];
    const NodeIndex in = b.members[best_in];
    const auto& on = graph.node(out);
    const auto& in_node = graph.node(in);
    a.dem += in_node.votes[election].dem - on.votes[election].dem;
    a.rep += in_node.votes[election].rep - on.votes[election].rep;
    a.population += in_node.population - on.population;
    b.dem += on.votes[election].dem - in_node.votes[election].dem;
    b.rep += on.votes[election].rep - in_node.votes[election].rep;
    b.population += on.population - in_node.population;
    a.members.erase(a.members.begin() + static_cast<std::ptrdiff_t>(best_out));
    a.members.insert(std::upper_bound(a.members.begin(), a.members.end(), in), in);
    b.members.erase(b.members.begin() + static_cast<std::ptrdiff_t>(best_in));
    b.members.insert(std::upper_bound(b.members.begin(), b.members.end(), out), out);
    result.swaps.push_back({out, in, a.dem_share()});
  }
  result.a = std::move(a);
  result.b = std::move(b);
  return result;
}

namespace {

struct HalfTotals {
  std::int64_t pop = 0, dem = 0, two_party = 0;
  double share() const { return two_party > 0 ? static_cast<double>(dem) / static_cast<double>(two_party) : 0.0; }
};

struct SplitScore {
  double pop_excess = 0.0;
  double min_share = 0.0;

  bool better_than(const SplitScore& o) const {
    constexpr double eps = 1e-12;
    if (pop_excess < o.pop_excess - eps) return true;
    if (pop_excess > o.pop_excess + eps) return false;
    return min_share > o.min_share + eps;
  }
};

}  // namespace

SplitResult split_superdistrict(const DualGraph& graph, std::size_t election, const SuperDistrictState& state,
                                double target_population, double pop_tolerance, bool require_majority) {
  if (state.members.empty()) throw std::invalid_argument("cannot split an empty super district");
  const std::size_t n = state.members.size();
  const double slack = pop_tolerance * target_population;

  std::vector<NodeIndex> order = state.members;
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return share_of(graph.node(a).votes.at(election)) > share_of(graph.node(b).votes.at(election));
  });

  std::vector<int> side(n, 0);  // indexed like state.members
  std::array<HalfTotals, 2> t{};
  auto pos_of = [&](NodeIndex v) {
    return static_cast<std::size_t>(std::lower_bound(state.members.begin(), state.members.end(), v) -
                                    state.members.begin());
  };
  auto add = [&](HalfTotals& h, NodeIndex v, int sign) {
    const auto& node = graph.node(v);
    h.pop += sign * node.population;
    h.dem += sign * node.votes[election].dem;
    h.two_party += sign * node.votes[election].two_party();
  };
  for (NodeIndex v : order) {
    const int s = t[1].pop < t[0].pop ? 1 : 0;
    side[pos_of(v)] = s;
    add(t[s], v, +1);
  }

  auto score = [&](const std::array<HalfTotals, 2>& h) {
    SplitScore sc;
    for (const auto& x : h)
      sc.pop_excess += std::max(0.0, std::abs(static_cast<double>(x.pop) - target_population) - slack);
    sc.min_share = require_majority ? std::min(h[0].share(), h[1].share()) : 0.0;
    return sc;
  };
  auto feasible = [&](const std::array<HalfTotals, 2>& h) {
    const SplitScore sc = score(h);
    return sc.pop_excess == 0.0 && (!require_majority || sc.min_share > 0.5);
  };

  // Local repair: best single move or pairwise swap until feasible or stuck.
  const std::size_t max_rounds = 10 * n + 10;
  for (std::size_t round = 0; round < max_rounds && !feasible(t); ++round) {
    SplitScore best = score(t);
    std::array<HalfTotals, 2> best_t = t;
    std::ptrdiff_t move_i = -1, move_j = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const NodeIndex vi = state.members[i];
      std::array<HalfTotals, 2> trial = t;
      add(trial[side[i]], vi, -1);
      add(trial[1 - side[i]], vi, +1);
      const SplitScore sc = score(trial);
      if (sc.better_than(best)) {
        best = sc;
        best_t = trial;
        move_i = static_cast<std::ptrdiff_t>(i);
        move_j = -1;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (side[i] != 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (side[j] != 1) continue;
        std::array<HalfTotals, 2> trial = t;
        add(trial[0], state.members[i], -1);
        add(trial[1], state.members[i], +1);
        add(trial[1], state.members[j], -1);
        add(trial[0], state.members[j], +1);
        const SplitScore sc = score(trial);
        if (sc.better_than(best)) {
          best = sc;
          best_t = trial;
          move_i = static_cast<std::ptrdiff_t>(i);
          move_j = static_cast<std::ptrdiff_t>(j);
        }
      }
    }
    if (move_i < 0) break;
    side[move_i] = 1 - side[move_i];
    if (move_j >= 0) side[move_j] = 1 - side[move_j];
    t = best_t;
  }

  std::array<std::vector<NodeIndex>, 2> members;
  for (std::size_t i = 0; i < n; ++i) members[side[i]].push_back(state.members[i]);
  SplitResult r;
  r.parts = {SuperDistrictState::from_members(graph, election, std::move(members[0])),
             SuperDistrictState::from_members(graph, election, std::move(members[1]))};
  r.feasible = !r.parts[0].members.empty() && !r.parts[1].members.empty() && feasible(t);
  return r;
}

SuperDistrictOutcome run_superdistrict_search(const DualGraph& graph, std::size_t election,
                                              double pop_tolerance) {
  SuperDistrictOutcome out;
  std::tie(out.seeded_a, out.seeded_b) = seed_by_share(graph, election);
  out.greedy = greedy_improve(graph, election, out.seeded_a, out.seeded_b, pop_tolerance);
  const double quarter = static_cast<double>(graph.total_population()) / 4.0;
  out.democratic_split = split_superdistrict(graph, election, out.greedy.a, quarter, pop_tolerance, true);
  out.remainder_split = split_superdistrict(graph, election, out.greedy.b, quarter, pop_tolerance, false);

  std::vector<District> assignment(graph.num_nodes(), 0);
  const std::array<const SuperDistrictState*, 4> parts{
      &out.democratic_split.parts[0], &out.democratic_split.parts[1], &out.remainder_split.parts[0],
      &out.remainder_split.parts[1]};
  for (District d = 0; d < 4; ++d)
    for (NodeIndex v : parts[d]->members) assignment[v] = d;
  out.plan = Plan(std::move(assignment), 4);
  return out;
}

}  // namespace lrvs
