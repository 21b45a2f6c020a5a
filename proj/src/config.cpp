#include "lrvs/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lrvs/ensemble_io.hpp"
#include "lrvs/rng.hpp"

namespace lrvs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("config key '" + key + "': bad value '" + value + "'");
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "proposal") c.chain.proposal = parse_proposal(value);
    else if (key == "steps") c.chain.steps = parse_number<std::uint64_t>(key, value);
    else if (key == "seed") c.chain.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "pop_tolerance") c.chain.pop_tolerance = parse_number<double>(key, value);
    else if (key == "cut_edge_bound") {
      if (value != "none") c.chain.cut_edge_bound = parse_number<std::size_t>(key, value);
    } else if (key == "gibbs_beta") c.chain.gibbs_beta = parse_number<double>(key, value);
    else if (key == "tree_retries") c.chain.tree_retries = parse_number<int>(key, value);
    else if (key == "start") c.start_files = split_list(value);
    else if (key == "elections") c.elections = split_list(value);
    else if (key == "chains") c.chains = parse_number<std::size_t>(key, value);
    else if (key == "declination_buffer") c.metrics.declination_buffer = parse_number<double>(key, value);
    else if (key == "swing_baseline") {
      if (value == "turnout-weighted") c.metrics.baseline = SwingBaseline::TurnoutWeighted;
      else if (value == "unweighted") c.metrics.baseline = SwingBaseline::Unweighted;
      else throw std::invalid_argument("config key 'swing_baseline': bad value '" + value + "'");
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (c.chain.steps < 1) throw std::invalid_argument("config: steps must be at least 1");
  if (!(c.chain.pop_tolerance > 0.0 && c.chain.pop_tolerance < 1.0))
    throw std::invalid_argument("config: pop_tolerance must lie in (0, 1)");
  if (c.chain.gibbs_beta < 0.0) throw std::invalid_argument("config: gibbs_beta must be nonnegative");
  if (c.chain.tree_retries < 1) throw std::invalid_argument("config: tree_retries must be positive");
  if (c.chains < 1) throw std::invalid_argument("config: chains must be positive");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string canonical_config(const RunConfig& c) {
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
    return s;
  };
  std::string out;
  out += "proposal=" + to_string(c.chain.proposal) + "\n";
  out += "steps=" + std::to_string(c.chain.steps) + "\n";
  out += "seed=" + std::to_string(c.chain.seed) + "\n";
  out += "pop_tolerance=" + format_double(c.chain.pop_tolerance) + "\n";
  out += "cut_edge_bound=" + (c.chain.cut_edge_bound ? std::to_string(*c.chain.cut_edge_bound) : "none") + "\n";
  out += "gibbs_beta=" + format_double(c.chain.gibbs_beta) + "\n";
  out += "tree_retries=" + std::to_string(c.chain.tree_retries) + "\n";
  out += "start=" + join(c.start_files) + "\n";
  out += "elections=" + join(c.elections) + "\n";
  out += "chains=" + std::to_string(c.chains) + "\n";
  out += "declination_buffer=" + format_double(c.metrics.declination_buffer) + "\n";
  out += std::string("swing_baseline=") +
         (c.metrics.baseline == SwingBaseline::TurnoutWeighted ? "turnout-weighted" : "unweighted") + "\n";
  return out;
}

std::uint64_t config_digest(const RunConfig& config) {
  std::uint64_t h = 0x636f6e666967ULL;
  for (unsigned char ch : canonical_config(config)) h = splitmix64(h ^ ch);
  return h;
}

}  // namespace lrvs
