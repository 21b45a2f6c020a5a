#include "lrvs/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrvs/chains.hpp"
#include "lrvs/config.hpp"
#include "lrvs/diagnostics.hpp"
#include "lrvs/ensemble_io.hpp"
#include "lrvs/error.hpp"
#include "lrvs/graph.hpp"
#include "lrvs/metrics.hpp"
#include "lrvs/partition.hpp"
#include "lrvs/superdistrict.hpp"

namespace lrvs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string graph;
  std::string plan;
  std::string config;
  std::string defects;
  std::string out;
  std::vector<std::string> elections;
  std::vector<std::string> ensembles;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> chains;
  double pop_tolerance = 0.01;
  std::size_t bins = 50;
  double density_threshold = 0.05;
  std::size_t scatter_max = 5000;
};

fs::path output_dir(const Options& o) {
  fs::path dir = o.out;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = env && *env ? fs::path(env) : fs::current_path();
  }
  fs::create_directories(dir);
  return dir;
}

/// Accepts a graph file or a bundle directory produced by ingest.
fs::path graph_path(const std::string& arg) {
  fs::path p = arg;
  if (fs::is_directory(p)) p /= "graph.json";
  return p;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<std::size_t> election_indices(const DualGraph& graph, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  if (names.empty()) {
    for (std::size_t e = 0; e < graph.num_elections(); ++e) out.push_back(e);
  } else {
    for (const auto& n : names) out.push_back(graph.election_index(n));
  }
  return out;
}

json votes_json(const DualGraph& graph, const std::vector<VoteCount>& votes) {
  json j = json::object();
  for (std::size_t e = 0; e < votes.size(); ++e)
    j[graph.elections()[e]] = {{"rep", votes[e].rep}, {"dem", votes[e].dem}};
  return j;
}

int cmd_ingest(const Options& o, std::ostream& out) {
  const DualGraph original = load_graph(o.graph);
  DualGraph graph = original;
  MergeReport merge;
  if (!o.defects.empty()) std::tie(graph, merge) = merge_defective_precincts(original, load_defects(o.defects));
  const ValidationReport v = validate_graph(graph);

  const fs::path dir = output_dir(o);
  save_graph(graph, dir / "graph.json");

  json mj;
  mj["merged"] = json::array();
  for (const auto& [from, to] : merge.merged) mj["merged"].push_back({{"merged", from}, {"survivor", to}});
  mj["node_delta"] = merge.node_delta;
  mj["nodes_after"] = graph.num_nodes();
  write_text(dir / "merge_report.json", mj.dump(2) + "\n");

  json vj{{"connected", v.connected},
          {"components", v.components},
          {"isolated", v.isolated},
          {"nodes", graph.num_nodes()},
          {"edges", graph.num_edges()},
          {"population", v.population},
          {"votes", votes_json(graph, v.votes)}};
  if (!o.plan.empty()) {
    // The plan names pre-merge precincts; survivors keep their own label.
    const Plan source = load_plan(original, o.plan);
    std::vector<District> labels(graph.num_nodes());
    for (NodeIndex v = 0; v < graph.num_nodes(); ++v)
      labels[v] = source[original.find(graph.node(v).id)];
    const Plan plan(std::move(labels), source.k());
    save_plan(graph, plan, dir / "plan.csv");
    vj["plan"] = {{"k", plan.k()},
                  {"contiguous", is_contiguous(graph, plan)},
                  {"population_deviation", population_deviation(graph, plan)},
                  {"cut_edges", cut_edges(graph, plan)},
                  {"hash", hex64(canonical_hash(plan))}};
  }
  write_text(dir / "validation_report.json", vj.dump(2) + "\n");

  out << "ingested " << graph.num_nodes() << " precincts, " << graph.num_edges() << " edges ("
      << merge.merged.size() << " merged) into " << dir.string() << "\n";
  if (!v.connected) throw DataError(ErrorKind::Invariant, "graph is disconnected (" +
                                                               std::to_string(v.components) + " components)");
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out) {
  const DualGraph graph = load_graph(graph_path(o.graph));
  RunConfig config;
  try {
    config = load_run_config(o.config);
  } catch (const std::invalid_argument& e) {
    throw DataError(ErrorKind::Schema, e.what());
  }
  if (o.seed) config.chain.seed = *o.seed;
  if (o.chains) config.chains = *o.chains;
  if (!o.plan.empty()) config.start_files = {o.plan};
  if (!o.elections.empty()) config.elections = o.elections;
  if (config.start_files.empty()) throw DataError(ErrorKind::Schema, "no start plan: set 'start' or pass --plan");
  if (config.elections.empty()) config.elections = graph.elections();
  const auto elections = election_indices(graph, config.elections);

  std::vector<Plan> starts;
  const fs::path config_dir = fs::path(o.config).parent_path();
  for (const auto& f : config.start_files) {
    fs::path p = f;
    if (p.is_relative() && !fs::exists(p)) p = config_dir / p;
    starts.push_back(load_plan(graph, p));
  }
  const std::uint32_t k = starts.front().k();
  for (const auto& s : starts)
    if (s.k() != k) throw DataError(ErrorKind::Schema, "start plans have different district counts");
  const Constraints constraints{config.chain.pop_tolerance, config.chain.cut_edge_bound};
  for (const auto& s : starts) check_constraints(graph, s, constraints);

  const DislocationModel dislocation(graph, k);
  const fs::path dir = output_dir(o);
  const std::uint64_t digest = config_digest(config);
  const std::string started = utc_now();

  std::vector<ChainStats> stats(config.chains);
  std::vector<std::string> errors(config.chains);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < config.chains; ++i) {
    workers.emplace_back([&, i] {
      try {
        ChainConfig cc = config.chain;
        cc.start = starts[i % starts.size()];
        cc.seed = chain_seed(config.chain.seed, i);
        EnsembleWriter writer(dir / ("chain_" + std::to_string(i) + ".csv"), config.elections, k,
                              {{"format", "lrvs-ensemble"},
                               {"software_version", kVersion},
                               {"config_digest", hex64(digest)},
                               {"proposal", to_string(cc.proposal)},
                               {"seed", std::to_string(config.chain.seed)},
                               {"chain", std::to_string(i)},
                               {"chain_seed", std::to_string(cc.seed)},
                               {"start_plan", config.start_files[i % starts.size()]},
                               {"start_plan_hash", hex64(canonical_hash(cc.start))},
                               {"started_at", started}});
        stats[i] = run_chain(graph, cc, [&](std::uint64_t step, const ChainState& state, StepOutcome outcome) {
          writer.write(make_record(graph, step, state, outcome, elections, &dislocation, config.metrics));
        });
        writer.close();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw std::runtime_error("chain " + std::to_string(i) + ": " + errors[i]);

  for (std::size_t i = 0; i < config.chains; ++i)
    out << "chain " << i << ": " << config.chain.steps << " records, accepted " << stats[i].accepted
        << ", rejected " << stats[i].rejected << ", failed " << stats[i].failed << "\n";
  return kExitOk;
}

json metric_summary(double enacted, const std::vector<double>& column,
                    const std::vector<std::vector<double>>& per_chain) {
  json j{{"enacted", enacted},
         {"percentile", percentile_of(enacted, column)},
         {"q1", quantile(column, 0.25)},
         {"median", quantile(column, 0.5)},
         {"q3", quantile(column, 0.75)}};
  std::size_t shortest = per_chain.empty() ? 0 : per_chain.front().size();
  for (const auto& c : per_chain) shortest = std::min(shortest, c.size());
  if (per_chain.size() >= 2 && shortest >= 10) {
    const auto r = psrf(per_chain, 0, 1);
    j["psrf"] = std::isfinite(r.value) ? json(r.value) : json("inf");
    if (r.degenerate) j["psrf_degenerate"] = true;
  } else {
    j["psrf"] = nullptr;
  }
  return j;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
  return s;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  if (o.ensembles.empty()) throw DataError(ErrorKind::Schema, "analyze needs at least one --ensemble file");
  const DualGraph graph = load_graph(graph_path(o.graph));
  const Plan enacted = load_plan(graph, o.plan);

  std::vector<EnsembleTable> tables;
  for (const auto& f : o.ensembles) tables.push_back(read_ensemble(f));
  for (const auto& t : tables)
    if (t.columns() != tables.front().columns() || t.k() != tables.front().k())
      throw DataError(ErrorKind::Schema, "ensemble files do not share a column layout");
  if (tables.front().k() != enacted.k())
    throw DataError(ErrorKind::Schema, "enacted plan has " + std::to_string(enacted.k()) +
                                           " districts but the ensemble has " + std::to_string(tables.front().k()));

  std::vector<std::string> elections = o.elections.empty() ? tables.front().elections() : o.elections;
  for (const auto& e : elections)
    if (std::find(tables.front().elections().begin(), tables.front().elections().end(), e) ==
        tables.front().elections().end())
      throw DataError(ErrorKind::Schema, "election '" + e + "' is not in the ensemble");

  // Combined view across all files.
  EnsembleTable combined(tables.front().elections(), tables.front().k());
  for (const auto& t : tables)
    for (std::size_t r = 0; r < t.size(); ++r) {
      std::vector<double> row;
      for (const auto& c : t.columns()) row.push_back(t.column(c)[r]);
      combined.append_row(t.hashes()[r], std::move(row));
    }
  if (combined.size() == 0) throw DataError(ErrorKind::Schema, "ensemble files contain no records");

  const DislocationModel dislocation(graph, enacted.k());
  const auto tallies = tally(graph, enacted);
  const fs::path dir = output_dir(o);
  const std::uint32_t k = enacted.k();

  json report;
  report["software_version"] = kVersion;
  report["ensemble_files"] = o.ensembles;
  report["records"] = combined.size();
  report["duplicate_rate_percent"] = duplicate_rate(combined);
  report["enacted_plan_hash"] = hex64(canonical_hash(enacted));
  {
    std::vector<std::vector<double>> per_chain;
    for (const auto& t : tables) per_chain.push_back(t.column("cut_edges"));
    report["cut_edges"] = metric_summary(static_cast<double>(cut_edges(graph, enacted)),
                                         combined.column("cut_edges"), per_chain);
  }

  // Cut-edge histogram.
  {
    std::map<long long, std::size_t> hist;
    for (double c : combined.column("cut_edges")) ++hist[std::llround(c)];
    std::string text = "# kind=histogram\n# metric=cut_edges\n# enacted=" +
                       std::to_string(cut_edges(graph, enacted)) + "\ncut_edges,count\n";
    for (const auto& [c, n] : hist) text += std::to_string(c) + "," + std::to_string(n) + "\n";
    write_text(dir / "cut_edges_hist.csv", text);
  }

  const std::vector<std::string> reported{"lrvs",          "seats_r",        "mean_median",
                                          "partisan_bias", "partisan_gini",  "efficiency_gap",
                                          "stdev_shares",  "aapd",           "buffered_declination"};
  report["elections"] = json::object();
  for (const auto& e : elections) {
    const std::size_t ge = graph.election_index(e);
    MetricVector em = compute_metrics(enacted, tallies, ge, &dislocation);
    const auto medians = sorted_share_medians(combined, e);
    em.rmd = ranked_marginal_deviation(em.sorted_shares, medians);

    auto rmd_column = [&](const EnsembleTable& t) {
      std::vector<double> col(t.size());
      for (std::size_t r = 0; r < t.size(); ++r) col[r] = ranked_marginal_deviation(t.sorted_shares(r, e), medians);
      return col;
    };

    json ej;
    ej["sorted_share_medians"] = medians;
    ej["enacted_sorted_shares"] = em.sorted_shares;
    ej["metrics"] = json::object();
    const auto enacted_values = scalar_metric_values(em);
    for (const auto& name : reported) {
      const auto idx = static_cast<std::size_t>(
          std::find(scalar_metric_names().begin(), scalar_metric_names().end(), name) - scalar_metric_names().begin());
      std::vector<std::vector<double>> per_chain;
      for (const auto& t : tables) per_chain.push_back(t.column(e + "." + name));
      ej["metrics"][name] = metric_summary(enacted_values[idx], combined.column(e + "." + name), per_chain);
    }
    {
      std::vector<std::vector<double>> per_chain;
      for (const auto& t : tables) per_chain.push_back(rmd_column(t));
      ej["metrics"]["rmd"] = metric_summary(*em.rmd, rmd_column(combined), per_chain);
    }
    std::vector<double> share_percentiles;
    for (std::uint32_t d = 1; d <= k; ++d)
      share_percentiles.push_back(
          percentile_of(em.sorted_shares[d - 1], combined.column(e + ".share_" + std::to_string(d))));
    ej["enacted_share_percentiles"] = share_percentiles;
    if (em.ties > 0) ej["enacted_tied_districts"] = em.ties;
    report["elections"][e] = std::move(ej);

    // LRVS density overlay: one column per chain file.
    {
      std::vector<double> starts;
      std::size_t longest = 0;
      for (const auto& t : tables) {
        starts.push_back(t.size() ? t.column(e + ".lrvs").front() : NAN);
        longest = std::max(longest, t.size());
      }
      std::string text = "# kind=density-overlay\n# election=" + e + "\n# metric=lrvs\n# start_values=" +
                         join_doubles(starts) + "\n# enacted=" + format_double(em.lrvs) + "\n";
      for (std::size_t c = 0; c < tables.size(); ++c) text += (c ? ",chain_" : "chain_") + std::to_string(c + 1);
      text += "\n";
      for (std::size_t r = 0; r < longest; ++r) {
        for (std::size_t c = 0; c < tables.size(); ++c) {
          if (c) text += ",";
          if (r < tables[c].size()) text += format_double(tables[c].column(e + ".lrvs")[r]);
        }
        text += "\n";
      }
      write_text(dir / ("lrvs_density_" + e + ".csv"), text);
    }
    // Sorted-share violins.
    {
      std::string text = "# kind=violins\n# election=" + e + "\n# enacted=" + join_doubles(em.sorted_shares) +
                         "\n# enacted_percentiles=" + join_doubles(share_percentiles) + "\n";
      for (std::uint32_t d = 1; d <= k; ++d) text += (d > 1 ? ",rank_" : "rank_") + std::to_string(d);
      text += "\n";
      for (std::size_t r = 0; r < combined.size(); ++r) text += join_doubles(combined.sorted_shares(r, e)) + "\n";
      write_text(dir / ("sorted_shares_" + e + ".csv"), text);
    }
    // Metric-vs-LRVS scatter samples.
    {
      const std::vector<std::string> cols{"lrvs",          "mean_median",  "partisan_bias",
                                          "partisan_gini", "efficiency_gap", "stdev_shares",
                                          "aapd",          "buffered_declination"};
      const auto rmd_all = rmd_column(combined);
      std::vector<double> enacted_row;
      for (const auto& c : cols)
        enacted_row.push_back(enacted_values[static_cast<std::size_t>(
            std::find(scalar_metric_names().begin(), scalar_metric_names().end(), c) - scalar_metric_names().begin())]);
      enacted_row.push_back(*em.rmd);
      std::string text = "# kind=scatter-marginals\n# election=" + e + "\n# enacted=" + join_doubles(enacted_row) + "\n";
      for (const auto& c : cols) text += c + ",";
      text += "rmd\n";
      const std::size_t stride = std::max<std::size_t>(1, (combined.size() + o.scatter_max - 1) / std::max<std::size_t>(1, o.scatter_max));
      for (std::size_t r = 0; r < combined.size(); r += stride) {
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(combined.column(e + "." + c)[r]);
        row.push_back(rmd_all[r]);
        text += join_doubles(row) + "\n";
      }
      write_text(dir / ("scatter_" + e + ".csv"), text);
    }
  }
  if (tables.size() >= 2) {
    json dens = json::object();
    for (const auto& e : elections) {
      const double d = multi_start_density_check(tables, e + ".lrvs", o.bins);
      dens[e] = {{"max_tv_distance", d}, {"similar", d <= o.density_threshold}};
    }
    dens["threshold"] = o.density_threshold;
    dens["bins"] = o.bins;
    report["lrvs_density_check"] = dens;
  }
  write_text(dir / "report.json", report.dump(2) + "\n");

  for (const auto& e : elections) {
    const auto& m = report["elections"][e]["metrics"]["lrvs"];
    out << e << ": enacted LRVS " << m["enacted"].get<double>() << " at percentile "
        << m["percentile"].get<double>() << "\n";
  }
  out << "duplicate rate " << report["duplicate_rate_percent"].get<double>() << "%\n";
  return kExitOk;
}

json state_json(const DualGraph& graph, const SuperDistrictState& s) {
  return {{"precincts", s.members.size()},
          {"population", s.population},
          {"dem", s.dem},
          {"rep", s.rep},
          {"dem_share", s.dem_share()},
          {"population_share", static_cast<double>(s.population) / static_cast<double>(graph.total_population())}};
}

int cmd_superdistrict(const Options& o, std::ostream& out) {
  const DualGraph graph = load_graph(graph_path(o.graph));
  if (o.elections.size() != 1) throw DataError(ErrorKind::Schema, "superdistrict needs exactly one --election");
  const std::size_t e = graph.election_index(o.elections.front());
  const SuperDistrictOutcome r = run_superdistrict_search(graph, e, o.pop_tolerance);

  json j;
  j["election"] = o.elections.front();
  j["pop_tolerance"] = o.pop_tolerance;
  j["seeded"] = {{"a", state_json(graph, r.seeded_a)}, {"b", state_json(graph, r.seeded_b)}};
  j["swaps"] = json::array();
  for (const auto& s : r.greedy.swaps)
    j["swaps"].push_back({{"out", graph.node(s.out).id}, {"in", graph.node(s.in).id}, {"dem_share_after", s.share_after}});
  j["super_district"] = state_json(graph, r.greedy.a);
  j["remainder"] = state_json(graph, r.greedy.b);
  j["districts"] = json::array();
  for (const auto* part : {&r.democratic_split.parts[0], &r.democratic_split.parts[1],
                           &r.remainder_split.parts[0], &r.remainder_split.parts[1]})
    j["districts"].push_back(state_json(graph, *part));
  j["split_feasible"] = r.democratic_split.feasible;
  j["population_deviation"] = population_deviation(graph, r.plan);
  j["contiguous"] = is_contiguous(graph, r.plan);  // informational only

  const fs::path dir = output_dir(o);
  save_plan(graph, r.plan, dir / "superdistrict_plan.csv");
  write_text(dir / "superdistrict_report.json", j.dump(2) + "\n");
  out << "super district Democratic share " << r.greedy.a.dem_share() << " after " << r.greedy.swaps.size()
      << " swaps; split " << (r.democratic_split.feasible ? "feasible" : "infeasible") << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ensemble redistricting analysis: chains, metrics, diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Validate and merge a precinct graph into a bundle");
  ingest->add_option("--graph", o.graph, "Input graph JSON")->required();
  ingest->add_option("--plan", o.plan, "Plan file to validate against the merged graph");
  ingest->add_option("--defects", o.defects, "JSON map of defective precincts to merge");
  ingest->add_option("--out", o.out, "Output directory");

  auto* run = app.add_subcommand("run", "Run Markov chains and write ensemble files");
  run->add_option("--graph", o.graph, "Graph JSON or bundle directory")->required();
  run->add_option("--config", o.config, "Run configuration file")->required();
  run->add_option("--plan", o.plan, "Start plan (overrides 'start')");
  run->add_option("--seed", o.seed, "Seed (overrides config)");
  run->add_option("--chains", o.chains, "Number of chains (overrides config)");
  run->add_option("--election", o.elections, "Elections to record")->delimiter(',');
  run->add_option("--out", o.out, "Output directory");

  auto* analyze = app.add_subcommand("analyze", "Compare an enacted plan with ensembles");
  analyze->add_option("--ensemble", o.ensembles, "Ensemble file (repeatable)")->required();
  analyze->add_option("--graph", o.graph, "Graph JSON or bundle directory")->required();
  analyze->add_option("--plan", o.plan, "Enacted plan")->required();
  analyze->add_option("--election", o.elections, "Elections to analyze")->delimiter(',');
  analyze->add_option("--bins", o.bins, "Histogram bins for the multi-start density check");
  analyze->add_option("--density-threshold", o.density_threshold, "Largest acceptable total-variation distance");
  analyze->add_option("--scatter-max", o.scatter_max, "Maximum scatter rows per election");
  analyze->add_option("--out", o.out, "Output directory");

  auto* superdistrict = app.add_subcommand("superdistrict", "Greedy two-Democratic-seat search");
  superdistrict->add_option("--graph", o.graph, "Graph JSON or bundle directory")->required();
  superdistrict->add_option("--election", o.elections, "Election")->required();
  superdistrict->add_option("--pop-tolerance", o.pop_tolerance, "Population tolerance");
  superdistrict->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*run) return cmd_run(o, out);
    if (*analyze) return cmd_analyze(o, out);
    if (*superdistrict) return cmd_superdistrict(o, out);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace lrvs
