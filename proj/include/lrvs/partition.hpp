#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lrvs/graph.hpp"

namespace lrvs {

using District = std::uint32_t;

/// A districting plan: one district label in [0, k) per node, in graph node order.
class Plan {
public:
  Plan() = default;
  /// Throws std::invalid_argument if a label is out of range or a district is empty.
  Plan(std::vector<District> assignment, std::uint32_t k);

  std::uint32_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return assignment_.size(); }
  District operator[](std::size_t v) const { return assignment_[v]; }
  const std::vector<District>& assignment() const noexcept { return assignment_; }

  /// Relabels a single node. Does not check that districts stay nonempty.
  void assign(std::size_t v, District d) { assignment_[v] = d; }

  friend bool operator==(const Plan&, const Plan&) = default;

private:
  std::vector<District> assignment_;
  std::uint32_t k_ = 0;
};

struct DistrictTally {
  District district = 0;
  std::int64_t population = 0;
  std::vector<VoteCount> votes;  // per election
};

std::vector<DistrictTally> tally(const DualGraph& graph, const Plan& plan);

/// Max over districts of |pop_d - ideal| / ideal with ideal = total / k.
double population_deviation(const DualGraph& graph, const Plan& plan);
double population_deviation(const std::vector<std::int64_t>& district_pops, std::int64_t total);

bool is_contiguous(const DualGraph& graph, const Plan& plan);
/// True iff the nodes labelled d induce a connected, nonempty subgraph.
bool district_connected(const DualGraph& graph, const Plan& plan, District d);

std::size_t cut_edges(const DualGraph& graph, const Plan& plan);

/// Label-permutation invariant 64-bit digest.
std::uint64_t canonical_hash(const Plan& plan);
/// Labels renumbered in order of first appearance along the node order.
std::vector<District> canonical_labels(const Plan& plan);

/// Plan files: one "precinct-id,district" line per precinct. Labels may be any
/// nonnegative integers; they are compacted to [0, k) preserving order.
Plan load_plan(const DualGraph& graph, const std::filesystem::path& path);
Plan parse_plan(const DualGraph& graph, const std::string& text);
std::string serialize_plan(const DualGraph& graph, const Plan& plan);
void save_plan(const DualGraph& graph, const Plan& plan, const std::filesystem::path& path);

}  // namespace lrvs
