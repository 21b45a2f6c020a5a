#include "lrvs/chains.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrvs/error.hpp"
#include "lrvs/spanning_tree.hpp"

namespace lrvs {

namespace {

constexpr std::size_t kNotCut = std::numeric_limits<std::size_t>::max();

bool within(double population, double ideal, double tolerance) {
  return std::abs(population - ideal) / ideal <= tolerance;
}

}  // namespace

std::string to_string(Proposal p) {
  switch (p) {
    case Proposal::UniformFlip: return "uniform-flip";
    case Proposal::WeightedFlip: return "weighted-flip";
    case Proposal::Recom: return "recom";
  }
  return "?";
}

Proposal parse_proposal(const std::string& text) {
  if (text == "uniform-flip") return Proposal::UniformFlip;
  if (text == "weighted-flip") return Proposal::WeightedFlip;
  if (text == "recom") return Proposal::Recom;
  throw std::invalid_argument("unknown proposal '" + text + "'");
}

ChainState::ChainState(const DualGraph& graph, Plan plan)
    : graph_(&graph), plan_(std::move(plan)) {
  if (plan_.size() != graph.num_nodes()) throw std::invalid_argument("plan size does not match graph");
  population_.assign(plan_.k(), 0);
  size_.assign(plan_.k(), 0);
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    population_[plan_[v]] += graph.node(v).population;
    ++size_[plan_[v]];
  }
  ideal_ = static_cast<double>(graph.total_population()) / plan_.k();
  cut_pos_.assign(graph.num_edges(), kNotCut);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto& ed = graph.edges()[e];
    if (plan_[ed.u] != plan_[ed.v]) {
      cut_pos_[e] = cut_.size();
      cut_.push_back(e);
    }
  }
}

void ChainState::refresh_edges_of(NodeIndex v) {
  for (std::size_t e : graph_->incident_edges(v)) {
    const auto& ed = graph_->edges()[e];
    const bool is_cut = plan_[ed.u] != plan_[ed.v];
    const bool was_cut = cut_pos_[e] != kNotCut;
    if (is_cut && !was_cut) {
      cut_pos_[e] = cut_.size();
      cut_.push_back(e);
    } else if (!is_cut && was_cut) {
      const std::size_t pos = cut_pos_[e];
      cut_[pos] = cut_.back();
      cut_pos_[cut_[pos]] = pos;
      cut_.pop_back();
      cut_pos_[e] = kNotCut;
    }
  }
}

void ChainState::move_node(NodeIndex v, District to) {
  const District from = plan_[v];
  if (from == to) return;
  const auto p = graph_->node(v).population;
  population_[from] -= p;
  population_[to] += p;
  --size_[from];
  ++size_[to];
  plan_.assign(v, to);
  refresh_edges_of(v);
}

bool satisfies_constraints(const DualGraph& graph, const Plan& plan, const Constraints& constraints) {
  try {
    check_constraints(graph, plan, constraints);
    return true;
  } catch (const DataError&) {
    return false;
  }
}

void check_constraints(const DualGraph& graph, const Plan& plan, const Constraints& constraints) {
  if (plan.size() != graph.num_nodes())
    throw DataError(ErrorKind::Constraint, "plan size does not match graph");
  if (!is_contiguous(graph, plan))
    throw DataError(ErrorKind::Constraint, "plan has a noncontiguous district");
  const double dev = population_deviation(graph, plan);
  if (dev > constraints.pop_tolerance)
    throw DataError(ErrorKind::Constraint, "population deviation " + std::to_string(dev) +
                                               " exceeds tolerance " +
                                               std::to_string(constraints.pop_tolerance));
  if (constraints.cut_edge_bound && cut_edges(graph, plan) > *constraints.cut_edge_bound)
    throw DataError(ErrorKind::Constraint, "cut edges exceed bound " +
                                               std::to_string(*constraints.cut_edge_bound));
}

double FlipMove::hastings_ratio() const {
  // q(P -> P') = neighbors_in_to / (2 C(P)); q(P' -> P) = neighbors_in_from / (2 C(P')).
  return (static_cast<double>(neighbors_in_from) * static_cast<double>(cut_before)) /
         (static_cast<double>(neighbors_in_to) * static_cast<double>(cut_after));
}

FlipMove draw_flip(const DualGraph& graph, const ChainState& state, Rng& rng) {
  const std::size_t e = state.cut_edge(rng.below(state.cut_edge_count()));
  const auto& edge = graph.edges()[e];
  const bool first = rng.below(2) == 0;
  FlipMove m;
  m.node = first ? edge.u : edge.v;
  const NodeIndex other = first ? edge.v : edge.u;
  const auto& plan = state.plan();
  m.from = plan[m.node];
  m.to = plan[other];
  for (NodeIndex w : graph.neighbors(m.node)) {
    if (plan[w] == m.from) ++m.neighbors_in_from;
    if (plan[w] == m.to) ++m.neighbors_in_to;
  }
  m.cut_before = state.cut_edge_count();
  m.cut_after = m.cut_before + m.neighbors_in_from - m.neighbors_in_to;
  return m;
}

bool flip_is_valid(const DualGraph& graph, const ChainState& state, const FlipMove& move,
                   const Constraints& constraints) {
  if (state.district_size()[move.from] <= 1) return false;
  const auto p = static_cast<double>(graph.node(move.node).population);
  const double ideal = state.ideal_population();
  if (!within(static_cast<double>(state.district_population()[move.from]) - p, ideal, constraints.pop_tolerance) ||
      !within(static_cast<double>(state.district_population()[move.to]) + p, ideal, constraints.pop_tolerance))
    return false;
  if (constraints.cut_edge_bound && move.cut_after > *constraints.cut_edge_bound) return false;

  // The source district must stay connected once the node leaves it.
  const auto& plan = state.plan();
  NodeIndex seed = move.node;
  for (NodeIndex w : graph.neighbors(move.node))
    if (plan[w] == move.from) {
      seed = w;
      break;
    }
  if (seed == move.node) return false;
  std::vector<NodeIndex> stack{seed};
  std::vector<bool> seen(graph.num_nodes(), false);
  seen[seed] = true;
  seen[move.node] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex w : graph.neighbors(v))
      if (!seen[w] && plan[w] == move.from) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == state.district_size()[move.from] - 1;
}

double weighted_flip_acceptance(const FlipMove& move, double beta) {
  const double delta = static_cast<double>(move.cut_after) - static_cast<double>(move.cut_before);
  return std::min(1.0, std::exp(-beta * delta) * move.hastings_ratio());
}

namespace {

StepOutcome finish_flip(ChainState& state, Rng& rng, const FlipMove& move, double acceptance) {
  if (acceptance < 1.0 && rng.uniform() >= acceptance) return StepOutcome::Rejected;
  state.move_node(move.node, move.to);
  return StepOutcome::Accepted;
}

}  // namespace

StepOutcome propose_uniform_flip(const DualGraph& graph, ChainState& state, Rng& rng,
                                 const Constraints& constraints) {
  const FlipMove move = draw_flip(graph, state, rng);
  if (!flip_is_valid(graph, state, move, constraints)) return StepOutcome::Rejected;
  return finish_flip(state, rng, move, std::min(1.0, move.hastings_ratio()));
}

StepOutcome propose_weighted_flip(const DualGraph& graph, ChainState& state, Rng& rng,
                                  const Constraints& constraints, double beta) {
  if (beta < 0.0) throw std::invalid_argument("gibbs_beta must be nonnegative");
  const FlipMove move = draw_flip(graph, state, rng);
  if (!flip_is_valid(graph, state, move, constraints)) return StepOutcome::Rejected;
  return finish_flip(state, rng, move, weighted_flip_acceptance(move, beta));
}

StepOutcome propose_recom(const DualGraph& graph, ChainState& state, Rng& rng,
                          const Constraints& constraints, int tree_retries) {
  const std::size_t e = state.cut_edge(rng.below(state.cut_edge_count()));
  const auto& edge = graph.edges()[e];
  const District a = state.plan()[edge.u];
  const District b = state.plan()[edge.v];

  std::vector<NodeIndex> region;
  region.reserve(state.district_size()[a] + state.district_size()[b]);
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v)
    if (state.plan()[v] == a || state.plan()[v] == b) region.push_back(v);

  for (int attempt = 0; attempt < tree_retries; ++attempt) {
    const SpanningTree tree = random_spanning_tree(graph, region, rng);
    auto cut = balanced_tree_cut(tree, state.ideal_population(), constraints.pop_tolerance, rng);
    if (!cut) continue;

    std::vector<District> previous;
    previous.reserve(region.size());
    for (NodeIndex v : region) previous.push_back(state.plan()[v]);
    for (NodeIndex v : cut->subtree) state.move_node(v, a);
    for (NodeIndex v : cut->rest) state.move_node(v, b);

    if (constraints.cut_edge_bound && state.cut_edge_count() > *constraints.cut_edge_bound) {
      for (std::size_t i = 0; i < region.size(); ++i) state.move_node(region[i], previous[i]);
      return StepOutcome::Rejected;
    }
    return StepOutcome::Accepted;
  }
  return StepOutcome::Failed;
}

ChainStats run_chain(const DualGraph& graph, const ChainConfig& config, const StepObserver& observer) {
  if (config.steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (!(config.pop_tolerance > 0.0 && config.pop_tolerance < 1.0))
    throw std::invalid_argument("pop_tolerance must lie in (0, 1)");
  if (config.gibbs_beta < 0.0) throw std::invalid_argument("gibbs_beta must be nonnegative");
  if (config.start.k() < 2 && config.steps > 1)
    throw std::invalid_argument("chains need at least two districts");

  const Constraints constraints{config.pop_tolerance, config.cut_edge_bound};
  check_constraints(graph, config.start, constraints);

  ChainState state(graph, config.start);
  Rng rng(config.seed);
  ChainStats stats;
  if (observer) observer(0, state, StepOutcome::Start);
  for (std::uint64_t step = 1; step < config.steps; ++step) {
    StepOutcome outcome = StepOutcome::Rejected;
    switch (config.proposal) {
      case Proposal::UniformFlip:
        outcome = propose_uniform_flip(graph, state, rng, constraints);
        break;
      case Proposal::WeightedFlip:
        outcome = propose_weighted_flip(graph, state, rng, constraints, config.gibbs_beta);
        break;
      case Proposal::Recom:
        outcome = propose_recom(graph, state, rng, constraints, config.tree_retries);
        break;
    }
    switch (outcome) {
      case StepOutcome::Accepted: ++stats.accepted; break;
      case StepOutcome::Rejected: ++stats.rejected; break;
      case StepOutcome::Failed: ++stats.failed; break;
      case StepOutcome::Start: break;
    }
    if (observer) observer(step, state, outcome);
  }
  return stats;
}

}  // namespace lrvs
