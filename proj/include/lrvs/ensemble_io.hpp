#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "lrvs/chains.hpp"
#include "lrvs/metrics.hpp"

namespace lrvs {

/// One chain step: plan identity plus a metric vector per election.
struct EnsembleRecord {
  std::uint64_t step = 0;
  std::uint64_t hash = 0;
  std::size_t cut_edges = 0;
  StepOutcome outcome = StepOutcome::Start;
  std::vector<MetricVector> metrics;  // parallel to the table's elections
};

/// Column-major ensemble. Column names are "step", "hash", "cut_edges",
/// "outcome", then for each election e: "e.share_1".."e.share_k" followed by
/// "e.<metric>" for every scalar_metric_names() entry.
class EnsembleTable {
public:
  EnsembleTable() = default;
  EnsembleTable(std::vector<std::string> elections, std::uint32_t k);

  const std::vector<std::string>& elections() const noexcept { return elections_; }
  std::uint32_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return hashes_.size(); }

  /// Numeric column names (everything except "hash").
  const std::vector<std::string>& columns() const noexcept { return names_; }
  bool has_column(const std::string& name) const { return index_.count(name) > 0; }
  const std::vector<double>& column(const std::string& name) const;
  const std::vector<std::uint64_t>& hashes() const noexcept { return hashes_; }

  /// k-vector of sorted shares for one record.
  std::vector<double> sorted_shares(std::size_t row, const std::string& election) const;

  void append(const EnsembleRecord& record);
  /// Appends a row given as (hash, numeric values in columns() order).
  void append_row(std::uint64_t hash, std::vector<double> values);

  std::string provenance;

private:
  std::vector<std::string> elections_;
  std::uint32_t k_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::vector<double>> data_;
};

/// Header line of an ensemble file: all columns in file order.
std::vector<std::string> ensemble_header(const std::vector<std::string>& elections, std::uint32_t k);

/// Shortest round-trip decimal form.
std::string format_double(double v);
std::string hex64(std::uint64_t v);

/// Streams records to a delimited text file. Lines starting with '#' carry the
/// run manifest; the payload is the header line plus one line per record and
/// is flushed every `flush_every` records so an interrupted run leaves a
/// readable prefix.
class EnsembleWriter {
public:
  EnsembleWriter(const std::filesystem::path& path, const std::vector<std::string>& elections,
                 std::uint32_t k, const std::vector<std::pair<std::string, std::string>>& manifest,
                 std::size_t flush_every = 1000);

  void write(const EnsembleRecord& record);
  void close();

private:
  std::ofstream out_;
  std::size_t flush_every_;
  std::size_t pending_ = 0;
};

std::string format_record(const EnsembleRecord& record);

/// Reads an ensemble file written by EnsembleWriter. A truncated final line is
/// dropped. Manifest entries are returned through `manifest` when non-null.
EnsembleTable read_ensemble(const std::filesystem::path& path,
                            std::map<std::string, std::string>* manifest = nullptr);

/// Builds the record for the chain's current position.
EnsembleRecord make_record(const DualGraph& graph, std::uint64_t step, const ChainState& state,
                           StepOutcome outcome, const std::vector<std::size_t>& elections,
                           const DislocationModel* dislocation, const MetricOptions& options);

}  // namespace lrvs
