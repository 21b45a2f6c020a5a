#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lrvs {

using NodeIndex = std::uint32_t;

struct VoteCount {
  std::int64_t rep = 0;
  std::int64_t dem = 0;

  std::int64_t two_party() const noexcept { return rep + dem; }
  VoteCount& operator+=(const VoteCount& o) noexcept {
    rep += o.rep;
    dem += o.dem;
    return *this;
  }
  friend bool operator==(const VoteCount&, const VoteCount&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct PrecinctAttributes {
  std::string id;
  std::int64_t population = 0;
  /// One entry per election, indexed like DualGraph::elections().
  std::vector<VoteCount> votes;
  Point centroid;
  double area = 0.0;

  friend bool operator==(const PrecinctAttributes&, const PrecinctAttributes&) = default;
};

struct Edge {
  NodeIndex u = 0;
  NodeIndex v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable precinct adjacency graph. Nodes are ordered by id; edges are stored
/// with u < v and sorted. Safe to share read-only across chain workers.
class DualGraph {
public:
  DualGraph() = default;

  /// Builds a graph from unordered nodes and id-pair edges. Sorts nodes by id and
  /// checks every invariant; throws DataError on violation.
  static DualGraph build(std::vector<std::string> elections,
                         std::vector<PrecinctAttributes> nodes,
                         const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_elections() const noexcept { return elections_.size(); }

  const std::vector<std::string>& elections() const noexcept { return elections_; }
  /// Index of an election id; throws DataError(Schema) if absent.
  std::size_t election_index(const std::string& election) const;

  const PrecinctAttributes& node(NodeIndex v) const { return nodes_[v]; }
  const std::vector<PrecinctAttributes>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Neighbors of v, ascending.
  const std::vector<NodeIndex>& neighbors(NodeIndex v) const { return adjacency_[v]; }
  /// Indices into edges() of the edges incident to v, parallel to neighbors(v).
  const std::vector<std::size_t>& incident_edges(NodeIndex v) const { return incident_[v]; }

  /// Node index for an id, or npos.
  std::size_t find(const std::string& id) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::int64_t total_population() const noexcept { return total_population_; }
  VoteCount total_votes(std::size_t election) const;

  friend bool operator==(const DualGraph& a, const DualGraph& b) {
    return a.elections_ == b.elections_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

private:
  std::vector<std::string> elections_;
  std::vector<PrecinctAttributes> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::vector<std::vector<std::size_t>> incident_;
  std::map<std::string, NodeIndex> index_;
  std::int64_t total_population_ = 0;
};

/// Reads the JSON graph document. Throws DataError (Parse, Schema or Invariant).
DualGraph load_graph(const std::filesystem::path& path);
DualGraph parse_graph(const std::string& text);
std::string serialize_graph(const DualGraph& graph);
void save_graph(const DualGraph& graph, const std::filesystem::path& path);

struct ValidationReport {
  bool connected = false;
  std::size_t components = 0;
  std::size_t isolated = 0;
  std::int64_t population = 0;
  std::vector<VoteCount> votes;  // per election
};

ValidationReport validate_graph(const DualGraph& graph);

/// Connected components of the subgraph induced by nodes with mask[v] true.
/// Returns the component count; component[v] is -1 outside the mask.
std::size_t induced_components(const DualGraph& graph, const std::vector<bool>& mask,
                               std::vector<int>* component = nullptr);

/// A precinct flagged for merging. pieces >= 2 marks a precinct made of
/// disconnected pieces; pieces <= 1 marks a precinct wholly enclosed by
/// another. piece_contacts optionally counts piece-level adjacencies per
/// neighbor id; neighbors absent from it count once.
struct DefectivePrecinct {
  int pieces = 1;
  std::map<std::string, int> piece_contacts;
};

struct MergeReport {
  std::vector<std::pair<std::string, std::string>> merged;  // (merged id, survivor id)
  std::ptrdiff_t node_delta = 0;
};

std::pair<DualGraph, MergeReport> merge_defective_precincts(
    const DualGraph& graph, const std::map<std::string, DefectivePrecinct>& defects);

/// Convenience overload taking the plain id -> piece-count map.
std::pair<DualGraph, MergeReport> merge_defective_precincts(
    const DualGraph& graph, const std::map<std::string, int>& piece_counts);

/// Reads a defect list: JSON object mapping id to a piece count or to
/// {"pieces": n, "contacts": {"neighbor": count}}.
std::map<std::string, DefectivePrecinct> load_defects(const std::filesystem::path& path);

}  // namespace lrvs
