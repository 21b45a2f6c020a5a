#include "lrvs/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lrvs/error.hpp"
#include "lrvs/rng.hpp"

namespace lrvs {

Plan::Plan(std::vector<District> assignment, std::uint32_t k)
    : assignment_(std::move(assignment)), k_(k) {
  if (k_ == 0) throw std::invalid_argument("plan must have at least one district");
  std::vector<bool> used(k_, false);
  for (District d : assignment_) {
    if (d >= k_)
      throw std::invalid_argument("district label " + std::to_string(d) + " out of range [0, " +
                                  std::to_string(k_) + ")");
    used[d] = true;
  }
  for (std::uint32_t d = 0; d < k_; ++d)
    if (!used[d]) throw std::invalid_argument("district " + std::to_string(d) + " is empty");
}

std::vector<DistrictTally> tally(const DualGraph& graph, const Plan& plan) {
  if (plan.size() != graph.num_nodes())
    throw std::invalid_argument("plan size does not match graph");
  std::vector<DistrictTally> out(plan.k());
  for (District d = 0; d < plan.k(); ++d) {
    out[d].district = d;
    out[d].votes.assign(graph.num_elections(), {});
  }
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    const District d = plan[v];
    if (d >= plan.k()) throw std::invalid_argument("district label out of range");
    const auto& n = graph.node(v);
    out[d].population += n.population;
    for (std::size_t e = 0; e < n.votes.size(); ++e) out[d].votes[e] += n.votes[e];
  }
  return out;
}

double population_deviation(const std::vector<std::int64_t>& district_pops, std::int64_t total) {
  const double ideal = static_cast<double>(total) / static_cast<double>(district_pops.size());
  double worst = 0.0;
  for (auto p : district_pops)
    worst = std::max(worst, std::abs(static_cast<double>(p) - ideal) / ideal);
  return worst;
}

double population_deviation(const DualGraph& graph, const Plan& plan) {
  std::vector<std::int64_t> pops(plan.k(), 0);
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) pops[plan[v]] += graph.node(v).population;
  return population_deviation(pops, graph.total_population());
}

bool district_connected(const DualGraph& graph, const Plan& plan, District d) {
  std::vector<bool> mask(graph.num_nodes());
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) mask[v] = plan[v] == d;
  return induced_components(graph, mask) == 1;
}

bool is_contiguous(const DualGraph& graph, const Plan& plan) {
  // One labelled flood fill: each district must be reached from a single seed.
  std::vector<bool> seen(plan.k(), false);
  std::vector<bool> visited(graph.num_nodes(), false);
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < graph.num_nodes(); ++s) {
    if (visited[s]) continue;
    const District d = plan[s];
    if (seen[d]) return false;
    seen[d] = true;
    visited[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeIndex v = stack.back();
      stack.pop_back();
      for (NodeIndex w : graph.neighbors(v))
        if (!visited[w] && plan[w] == d) {
          visited[w] = true;
          stack.push_back(w);
        }
    }
  }
  return true;
}

std::size_t cut_edges(const DualGraph& graph, const Plan& plan) {
  std::size_t count = 0;
  for (const auto& e : graph.edges())
    if (plan[e.u] != plan[e.v]) ++count;
  return count;
}

std::vector<District> canonical_labels(const Plan& plan) {
  std::vector<District> relabel(plan.k(), static_cast<District>(-1));
  District next = 0;
  std::vector<District> out(plan.size());
  for (std::size_t v = 0; v < plan.size(); ++v) {
    District& r = relabel[plan[v]];
    if (r == static_cast<District>(-1)) r = next++;
    out[v] = r;
  }
  return out;
}

std::uint64_t canonical_hash(const Plan& plan) {
  std::uint64_t h = splitmix64(0x6c72767368617368ULL ^ plan.size());
  for (District d : canonical_labels(plan)) h = splitmix64(h ^ (static_cast<std::uint64_t>(d) + 1));
  return h;
}

Plan parse_plan(const DualGraph& graph, const std::string& text) {
  std::vector<long long> raw(graph.num_nodes(), -1);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw DataError(ErrorKind::Parse, "plan line " + std::to_string(lineno) + ": expected 'id,district'");
    const std::string id = line.substr(0, comma);
    if (lineno == 1 && id == "precinct" && graph.find(id) == DualGraph::npos) continue;  // header
    long long label = -1;
    const char* first = line.data() + comma + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, label);
    if (ec != std::errc() || ptr != last || label < 0)
      throw DataError(ErrorKind::Parse, "plan line " + std::to_string(lineno) + ": bad district label");
    const auto v = graph.find(id);
    if (v == DualGraph::npos)
      throw DataError(ErrorKind::Schema, "plan line " + std::to_string(lineno) +
                                             ": unknown precinct '" + id + "'");
    if (raw[v] >= 0)
      throw DataError(ErrorKind::Invariant, "plan assigns precinct '" + id + "' twice");
    raw[v] = label;
  }
  std::map<long long, District> compact;
  for (std::size_t v = 0; v < raw.size(); ++v) {
    if (raw[v] < 0)
      throw DataError(ErrorKind::Schema, "plan does not assign precinct '" + graph.node(v).id + "'");
    compact.emplace(raw[v], 0);
  }
  District next = 0;
  for (auto& [_, d] : compact) d = next++;
  std::vector<District> assignment(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v) assignment[v] = compact.at(raw[v]);
  return Plan(std::move(assignment), next);
}

Plan load_plan(const DualGraph& graph, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(ErrorKind::Parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_plan(graph, ss.str());
  } catch (const DataError& e) {
    throw DataError(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_plan(const DualGraph& graph, const Plan& plan) {
  std::string out;
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) {
    out += graph.node(v).id;
    out += ',';
    out += std::to_string(plan[v]);
    out += '\n';
  }
  return out;
}

void save_plan(const DualGraph& graph, const Plan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_plan(graph, plan);
}

}  // namespace lrvs
