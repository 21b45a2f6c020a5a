#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lrvs/graph.hpp"
#include "lrvs/partition.hpp"

namespace lrvs {

// Greedy search for a noncontiguous plan with two Democratic-majority
// districts: grow one half-state "super district" past 50% Democratic by
// precinct swaps, then split it in two. Contiguity is never required here.

struct SuperDistrictState {
  std::vector<NodeIndex> members;  // ascending
  std::int64_t dem = 0;
  std::int64_t rep = 0;
  std::int64_t population = 0;

  std::int64_t two_party() const noexcept { return dem + rep; }
  double dem_share() const noexcept {
    return two_party() > 0 ? static_cast<double>(dem) / static_cast<double>(two_party()) : 0.0;
  }

  static SuperDistrictState from_members(const DualGraph& graph, std::size_t election,
                                         std::vector<NodeIndex> members);
};

/// Precincts by Democratic two-party share, descending (ties by id), fill A
/// until its population first reaches half the state; the rest is B.
std::pair<SuperDistrictState, SuperDistrictState> seed_by_share(const DualGraph& graph, std::size_t election);

/// Change in Democratic share of a state with `dem` of `two_party` votes when
/// a precinct with (out_dem of out_total) leaves and (in_dem of in_total) joins.
double swap_gain(std::int64_t dem, std::int64_t two_party, std::int64_t out_dem, std::int64_t out_total,
                 std::int64_t in_dem, std::int64_t in_total);
double swap_gain(const DualGraph& graph, std::size_t election, const SuperDistrictState& state,
                 NodeIndex out, NodeIndex in);

struct Swap {
  NodeIndex out = 0;  // leaves A
  NodeIndex in = 0;   // joins A
  double share_after = 0.0;
};

struct GreedyResult {
  SuperDistrictState a;
  SuperDistrictState b;
  std::vector<Swap> swaps;
};

/// Repeatedly applies the population-feasible swap with the largest positive
/// gain in A's Democratic share (ties by (out id, in id)) until none remains.
/// Feasible means both states stay within pop_tolerance of half the state.
GreedyResult greedy_improve(const DualGraph& graph, std::size_t election, SuperDistrictState a,
                            SuperDistrictState b, double pop_tolerance);

struct SplitResult {
  std::array<SuperDistrictState, 2> parts;
  /// Both parts within tolerance of the target population and, when a
  /// majority was required, both above 50% Democratic.
  bool feasible = false;
};

/// Splits a state into two halves near `target_population`. With
/// require_majority the repair phase also pushes both halves above 50%
/// Democratic. Throws std::invalid_argument for an empty state.
SplitResult split_superdistrict(const DualGraph& graph, std::size_t election, const SuperDistrictState& state,
                                double target_population, double pop_tolerance, bool require_majority = true);

struct SuperDistrictOutcome {
  SuperDistrictState seeded_a;
  SuperDistrictState seeded_b;
  GreedyResult greedy;
  SplitResult democratic_split;
  SplitResult remainder_split;
  Plan plan;  // districts 0 and 1 from the super district, 2 and 3 from the rest
};

SuperDistrictOutcome run_superdistrict_search(const DualGraph& graph, std::size_t election,
                                              double pop_tolerance = 0.01);

}  // namespace lrvs
