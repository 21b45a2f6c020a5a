#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lrvs/chains.hpp"
#include "lrvs/metrics.hpp"

namespace lrvs {

/// Contents of a run configuration file: flat "key = value" lines, '#'
/// comments. Keys mirror ChainConfig (proposal, steps, seed, pop_tolerance,
/// cut_edge_bound, gibbs_beta, tree_retries, start) plus elections, chains,
/// declination_buffer and swing_baseline. `start` and `elections` take
/// comma-separated lists; chain i starts from start[i % size].
struct RunConfig {
  ChainConfig chain;  // chain.start is filled in by the caller
  std::vector<std::string> start_files;
  std::vector<std::string> elections;
  std::size_t chains = 1;
  MetricOptions metrics;
};

/// Throws std::invalid_argument on unknown keys or malformed values.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical key=value rendering; its hash is the config digest in manifests.
std::string canonical_config(const RunConfig& config);
std::uint64_t config_digest(const RunConfig& config);

}  // namespace lrvs
