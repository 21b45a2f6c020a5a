#include "lrvs/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lrvs/error.hpp"

namespace lrvs {

using nlohmann::json;

namespace {

constexpr int kGraphFormatVersion = 1;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(ErrorKind::Parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw DataError(ErrorKind::Schema, where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw DataError(ErrorKind::Schema, where + ": field '" + key + "' has wrong type");
  }
}

}  // namespace

DualGraph DualGraph::build(std::vector<std::string> elections,
                           std::vector<PrecinctAttributes> nodes,
                           const std::vector<std::pair<std::string, std::string>>& edges) {
  DualGraph g;
  {
    std::set<std::string> seen;
    for (const auto& e : elections)
      if (!seen.insert(e).second)
        throw DataError(ErrorKind::Schema, "duplicate election id '" + e + "'");
  }
  for (const auto& n : nodes) {
    if (n.votes.size() != elections.size())
      throw DataError(ErrorKind::Schema, "precinct '" + n.id + "' has " +
                                             std::to_string(n.votes.size()) + " elections, expected " +
                                             std::to_string(elections.size()));
    if (n.population < 0)
      throw DataError(ErrorKind::Invariant, "precinct '" + n.id + "' has negative population");
    for (const auto& v : n.votes)
      if (v.rep < 0 || v.dem < 0)
        throw DataError(ErrorKind::Invariant, "precinct '" + n.id + "' has negative votes");
    if (n.area < 0.0)
      throw DataError(ErrorKind::Invariant, "precinct '" + n.id + "' has negative area");
  }

  std::sort(nodes.begin(), nodes.end(),
            [](const PrecinctAttributes& a, const PrecinctAttributes& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].id == nodes[i - 1].id)
      throw DataError(ErrorKind::Invariant, "duplicate precinct id '" + nodes[i].id + "'");

  g.elections_ = std::move(elections);
  g.nodes_ = std::move(nodes);
  for (NodeIndex i = 0; i < g.nodes_.size(); ++i) {
    g.index_.emplace(g.nodes_[i].id, i);
    g.total_population_ += g.nodes_[i].population;
  }

  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    auto ia = g.index_.find(a);
    if (ia == g.index_.end())
      throw DataError(ErrorKind::Schema, "edge references unknown precinct '" + a + "'");
    auto ib = g.index_.find(b);
    if (ib == g.index_.end())
      throw DataError(ErrorKind::Schema, "edge references unknown precinct '" + b + "'");
    if (ia->second == ib->second)
      throw DataError(ErrorKind::Invariant, "self-loop on precinct '" + a + "'");
    es.push_back({std::min(ia->second, ib->second), std::max(ia->second, ib->second)});
  }
  std::sort(es.begin(), es.end());
  for (std::size_t i = 1; i < es.size(); ++i)
    if (es[i] == es[i - 1])
      throw DataError(ErrorKind::Invariant, "duplicate edge '" + g.nodes_[es[i].u].id + "'-'" +
                                                g.nodes_[es[i].v].id + "'");
  g.edges_ = std::move(es);

  g.adjacency_.assign(g.nodes_.size(), {});
  g.incident_.assign(g.nodes_.size(), {});
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    g.adjacency_[g.edges_[e].u].push_back(g.edges_[e].v);
    g.incident_[g.edges_[e].u].push_back(e);
    g.adjacency_[g.edges_[e].v].push_back(g.edges_[e].u);
    g.incident_[g.edges_[e].v].push_back(e);
  }
  for (std::size_t v = 0; v < g.nodes_.size(); ++v) {
    auto& nb = g.adjacency_[v];
    auto& inc = g.incident_[v];
    std::vector<std::size_t> order(nb.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nb[a] < nb[b]; });
    std::vector<NodeIndex> nb2;
    std::vector<std::size_t> inc2;
    for (auto o : order) {
      nb2.push_back(nb[o]);
      inc2.push_back(inc[o]);
    }
    nb = std::move(nb2);
    inc = std::move(inc2);
  }
  return g;
}

std::size_t DualGraph::election_index(const std::string& election) const {
  auto it = std::find(elections_.begin(), elections_.end(), election);
  if (it == elections_.end())
    throw DataError(ErrorKind::Schema, "unknown election '" + election + "'");
  return static_cast<std::size_t>(it - elections_.begin());
}

std::size_t DualGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? npos : it->second;
}

VoteCount DualGraph::total_votes(std::size_t election) const {
  VoteCount total;
  for (const auto& n : nodes_) total += n.votes.at(election);
  return total;
}

DualGraph parse_graph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(ErrorKind::Parse, e.what());
  }
  if (!doc.is_object()) throw DataError(ErrorKind::Schema, "graph document must be an object");
  if (doc.contains("version")) {
    auto version = require<int>(doc, "version", "graph");
    if (version != kGraphFormatVersion)
      throw DataError(ErrorKind::Schema, "unsupported graph format version " + std::to_string(version));
  }

  auto elections = require<std::vector<std::string>>(doc, "elections", "graph");
  auto it = doc.find("nodes");
  if (it == doc.end() || !it->is_array())
    throw DataError(ErrorKind::Schema, "graph: missing 'nodes' array");

  std::vector<PrecinctAttributes> nodes;
  nodes.reserve(it->size());
  std::size_t position = 0;
  for (const auto& jn : *it) {
    std::string where = "node #" + std::to_string(position++);
    if (!jn.is_object()) throw DataError(ErrorKind::Schema, where + ": not an object");
    PrecinctAttributes p;
    p.id = require<std::string>(jn, "id", where);
    where = "precinct '" + p.id + "'";
    p.population = require<std::int64_t>(jn, "population", where);
    p.centroid.x = require<double>(jn, "x", where);
    p.centroid.y = require<double>(jn, "y", where);
    p.area = jn.contains("area") ? require<double>(jn, "area", where) : 0.0;
    auto votes = jn.find("votes");
    if (votes == jn.end() || !votes->is_object())
      throw DataError(ErrorKind::Schema, where + ": missing 'votes' object");
    for (const auto& [key, _] : votes->items())
      if (std::find(elections.begin(), elections.end(), key) == elections.end())
        throw DataError(ErrorKind::Schema, where + ": unknown election '" + key + "'");
    for (const auto& e : elections) {
      auto ve = votes->find(e);
      if (ve == votes->end())
        throw DataError(ErrorKind::Schema, where + ": missing election '" + e + "'");
      p.votes.push_back({require<std::int64_t>(*ve, "rep", where + " " + e),
                         require<std::int64_t>(*ve, "dem", where + " " + e)});
    }
    nodes.push_back(std::move(p));
  }

  auto je = doc.find("edges");
  if (je == doc.end() || !je->is_array())
    throw DataError(ErrorKind::Schema, "graph: missing 'edges' array");
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(je->size());
  for (const auto& pair : *je) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
      throw DataError(ErrorKind::Schema, "graph: edges must be [id, id] pairs");
    edges.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  return DualGraph::build(std::move(elections), std::move(nodes), edges);
}

DualGraph load_graph(const std::filesystem::path& path) {
  try {
    return parse_graph(read_file(path));
  } catch (const DataError& e) {
    throw DataError(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_graph(const DualGraph& graph) {
  json doc;
  doc["format"] = "lrvs-graph";
  doc["version"] = kGraphFormatVersion;
  doc["elections"] = graph.elections();
  json nodes = json::array();
  for (const auto& n : graph.nodes()) {
    json votes = json::object();
    for (std::size_t e = 0; e < graph.num_elections(); ++e)
      votes[graph.elections()[e]] = {{"rep", n.votes[e].rep}, {"dem", n.votes[e].dem}};
    nodes.push_back({{"id", n.id},
                     {"population", n.population},
                     {"x", n.centroid.x},
                     {"y", n.centroid.y},
                     {"area", n.area},
                     {"votes", std::move(votes)}});
  }
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto& e : graph.edges()) edges.push_back({graph.node(e.u).id, graph.node(e.v).id});
  doc["edges"] = std::move(edges);
  return doc.dump(1) + "\n";
}

void save_graph(const DualGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_graph(graph);
}

std::size_t induced_components(const DualGraph& graph, const std::vector<bool>& mask,
                               std::vector<int>* component) {
  std::vector<int> comp(graph.num_nodes(), -1);
  int count = 0;
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < graph.num_nodes(); ++s) {
    if (!mask[s] || comp[s] >= 0) continue;
    comp[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeIndex v = stack.back();
      stack.pop_back();
      for (NodeIndex w : graph.neighbors(v))
        if (mask[w] && comp[w] < 0) {
          comp[w] = count;
          stack.push_back(w);
        }
    }
    ++count;
  }
  if (component) *component = std::move(comp);
  return static_cast<std::size_t>(count);
}

ValidationReport validate_graph(const DualGraph& graph) {
  ValidationReport r;
  r.components = induced_components(graph, std::vector<bool>(graph.num_nodes(), true));
  r.connected = r.components == 1;
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v)
    if (graph.neighbors(v).empty()) ++r.isolated;
  r.population = graph.total_population();
  for (std::size_t e = 0; e < graph.num_elections(); ++e) r.votes.push_back(graph.total_votes(e));
  return r;
}

std::pair<DualGraph, MergeReport> merge_defective_precincts(
    const DualGraph& graph, const std::map<std::string, DefectivePrecinct>& defects) {
  // Work on mutable id-keyed copies; each defective precinct present in the
  // graph is absorbed, in id order, by its chosen neighbor.
  std::map<std::string, PrecinctAttributes> nodes;
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& n : graph.nodes()) {
    nodes.emplace(n.id, n);
    adj[n.id];
  }
  for (const auto& e : graph.edges()) {
    adj[graph.node(e.u).id].insert(graph.node(e.v).id);
    adj[graph.node(e.v).id].insert(graph.node(e.u).id);
  }

  MergeReport report;
  for (const auto& [id, defect] : defects) {
    auto self = nodes.find(id);
    if (self == nodes.end()) continue;
    const auto& nbrs = adj[id];
    if (nbrs.empty())
      throw DataError(ErrorKind::Invariant, "defective precinct '" + id + "' has no neighbor to merge into");

    // Most piece-level contacts wins; std::set iteration gives the smallest id on ties.
    std::string target;
    int best = -1;
    for (const auto& n : nbrs) {
      auto c = defect.piece_contacts.find(n);
      int contacts = c == defect.piece_contacts.end() ? 1 : c->second;
      if (contacts > best) {
        best = contacts;
        target = n;
      }
    }

    auto& survivor = nodes.at(target);
    const auto& absorbed = self->second;
    const double wa = static_cast<double>(survivor.population);
    const double wb = static_cast<double>(absorbed.population);
    if (wa + wb > 0.0) {
      survivor.centroid = {(wa * survivor.centroid.x + wb * absorbed.centroid.x) / (wa + wb),
                           (wa * survivor.centroid.y + wb * absorbed.centroid.y) / (wa + wb)};
    } else if (survivor.area + absorbed.area > 0.0) {
      const double aa = survivor.area, ab = absorbed.area;
      survivor.centroid = {(aa * survivor.centroid.x + ab * absorbed.centroid.x) / (aa + ab),
                           (aa * survivor.centroid.y + ab * absorbed.centroid.y) / (aa + ab)};
    }
    survivor.population += absorbed.population;
    survivor.area += absorbed.area;
    for (std::size_t e = 0; e < survivor.votes.size(); ++e) survivor.votes[e] += absorbed.votes[e];

    for (const auto& n : nbrs) {
      adj[n].erase(id);
      if (n != target) {
        adj[n].insert(target);
        adj[target].insert(n);
      }
    }
    adj.erase(id);
    nodes.erase(self);
    report.merged.emplace_back(id, target);
  }

  std::vector<PrecinctAttributes> out_nodes;
  out_nodes.reserve(nodes.size());
  for (auto& [_, n] : nodes) out_nodes.push_back(std::move(n));
  std::vector<std::pair<std::string, std::string>> out_edges;
  for (const auto& [a, ns] : adj)
    for (const auto& b : ns)
      if (a < b) out_edges.emplace_back(a, b);

  report.node_delta = static_cast<std::ptrdiff_t>(out_nodes.size()) -
                      static_cast<std::ptrdiff_t>(graph.num_nodes());
  return {DualGraph::build(graph.elections(), std::move(out_nodes), out_edges), std::move(report)};
}

std::pair<DualGraph, MergeReport> merge_defective_precincts(
    const DualGraph& graph, const std::map<std::string, int>& piece_counts) {
  std::map<std::string, DefectivePrecinct> defects;
  for (const auto& [id, pieces] : piece_counts) defects[id].pieces = pieces;
  return merge_defective_precincts(graph, defects);
}

std::map<std::string, DefectivePrecinct> load_defects(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw DataError(ErrorKind::Schema, path.string() + ": expected an object");
  std::map<std::string, DefectivePrecinct> out;
  for (const auto& [id, val] : doc.items()) {
    DefectivePrecinct d;
    if (val.is_number_integer()) {
      d.pieces = val.get<int>();
    } else if (val.is_object()) {
      d.pieces = val.value("pieces", 1);
      if (val.contains("contacts")) d.piece_contacts = val["contacts"].get<std::map<std::string, int>>();
    } else {
      throw DataError(ErrorKind::Schema, path.string() + ": bad defect entry for '" + id + "'");
    }
    out.emplace(id, std::move(d));
  }
  return out;
}

}  // namespace lrvs
