#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lrvs/graph.hpp"
#include "lrvs/partition.hpp"
#include "lrvs/rng.hpp"

namespace lrvs {

enum class Proposal { UniformFlip, WeightedFlip, Recom };

std::string to_string(Proposal p);
/// Accepts "uniform-flip", "weighted-flip", "recom". Throws std::invalid_argument.
Proposal parse_proposal(const std::string& text);

struct ChainConfig {
  Proposal proposal = Proposal::Recom;
  std::uint64_t steps = 1;
  std::uint64_t seed = 0;
  double pop_tolerance = 0.01;
  std::optional<std::size_t> cut_edge_bound;
  double gibbs_beta = 0.0;
  /// Fresh spanning trees drawn per ReCom proposal before giving up.
  int tree_retries = 50;
  Plan start;
};

struct Constraints {
  double pop_tolerance = 0.01;
  std::optional<std::size_t> cut_edge_bound;
};

/// Mutable chain position: the plan plus incrementally maintained district
/// populations, district sizes and the set of cut edges.
class ChainState {
public:
  ChainState(const DualGraph& graph, Plan plan);

  const Plan& plan() const noexcept { return plan_; }
  std::uint32_t k() const noexcept { return plan_.k(); }
  const std::vector<std::int64_t>& district_population() const noexcept { return population_; }
  const std::vector<std::size_t>& district_size() const noexcept { return size_; }
  double ideal_population() const noexcept { return ideal_; }

  std::size_t cut_edge_count() const noexcept { return cut_.size(); }
  /// i-th member of the cut-edge set, as an index into graph.edges().
  std::size_t cut_edge(std::size_t i) const { return cut_[i]; }

  void move_node(NodeIndex v, District to);

private:
  void refresh_edges_of(NodeIndex v);

  const DualGraph* graph_;
  Plan plan_;
  std::vector<std::int64_t> population_;
  std::vector<std::size_t> size_;
  double ideal_ = 0.0;
  std::vector<std::size_t> cut_;
  std::vector<std::size_t> cut_pos_;
};

/// Throws DataError(Constraint) naming the first violated constraint.
void check_constraints(const DualGraph& graph, const Plan& plan, const Constraints& constraints);
bool satisfies_constraints(const DualGraph& graph, const Plan& plan, const Constraints& constraints);

enum class StepOutcome { Start, Accepted, Rejected, Failed };

/// A single-node flip drawn from the cut-edge proposal: pick a cut edge
/// uniformly, pick one endpoint uniformly, move it into the other endpoint's
/// district.
struct FlipMove {
  NodeIndex node = 0;
  District from = 0;
  District to = 0;
  std::size_t neighbors_in_from = 0;  // neighbors of node labelled `from`
  std::size_t neighbors_in_to = 0;
  std::size_t cut_before = 0;
  std::size_t cut_after = 0;

  /// Proposal-probability ratio q(after -> before) / q(before -> after).
  double hastings_ratio() const;
};

FlipMove draw_flip(const DualGraph& graph, const ChainState& state, Rng& rng);
/// Contiguity, population and cut-edge checks for a drawn flip.
bool flip_is_valid(const DualGraph& graph, const ChainState& state, const FlipMove& move,
                   const Constraints& constraints);

/// Metropolis-Hastings flip targeting the uniform distribution on valid plans.
StepOutcome propose_uniform_flip(const DualGraph& graph, ChainState& state, Rng& rng,
                                 const Constraints& constraints);
/// Metropolis-Hastings flip targeting exp(-beta * cut_edges) on valid plans.
StepOutcome propose_weighted_flip(const DualGraph& graph, ChainState& state, Rng& rng,
                                  const Constraints& constraints, double beta);
/// Acceptance probability of a valid flip under the weighted chain.
double weighted_flip_acceptance(const FlipMove& move, double beta);

/// Recombination: merge the two districts across a uniformly chosen cut edge
/// and redraw them from a balanced cut of a uniform spanning tree.
StepOutcome propose_recom(const DualGraph& graph, ChainState& state, Rng& rng,
                          const Constraints& constraints, int tree_retries = 50);

struct ChainStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t failed = 0;
};

using StepObserver = std::function<void(std::uint64_t step, const ChainState& state, StepOutcome outcome)>;

/// Runs config.steps states from config.start with Rng(config.seed). Step 0 is
/// the start plan itself; each later step is one proposal, and rejected or
/// failed proposals repeat the current plan. Throws DataError(Constraint) if
/// the start plan is invalid.
ChainStats run_chain(const DualGraph& graph, const ChainConfig& config, const StepObserver& observer);

}  // namespace lrvs
