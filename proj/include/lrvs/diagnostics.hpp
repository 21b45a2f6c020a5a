#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lrvs/ensemble_io.hpp"

namespace lrvs {

struct PsrfResult {
  double value = 1.0;
  /// Within-chain variance was zero: value is 1 if the chains also agree, +inf otherwise.
  bool degenerate = false;
  std::size_t chains = 0;
  std::size_t length = 0;
};

/// Gelman-Rubin potential scale reduction factor over m >= 2 chains of equal
/// length n >= 10. Throws std::invalid_argument otherwise.
PsrfResult psrf(const std::vector<std::vector<double>>& chains);
/// As above, truncating every chain to the shortest and optionally dropping a
/// burn-in prefix and thinning.
PsrfResult psrf(const std::vector<std::vector<double>>& chains, std::size_t burn_in, std::size_t thin);

/// Percent of entries below value, ties counted half.
double percentile_of(double value, std::span<const double> column);

/// Linear-interpolation quantile (q in [0, 1]) of an unsorted column.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

/// Per-rank median of the sorted share vectors across the ensemble.
std::vector<double> sorted_share_medians(const EnsembleTable& table, const std::string& election);

/// Percentage of records whose plan hash repeats an earlier one.
double duplicate_rate(std::span<const std::uint64_t> hashes);
double duplicate_rate(const EnsembleTable& table);

/// Histograms every column on shared equal-width bins spanning their joint
/// range and returns the largest pairwise total-variation distance.
double multi_start_density_check(const std::vector<std::vector<double>>& columns, std::size_t bins);
double multi_start_density_check(const std::vector<EnsembleTable>& tables, const std::string& metric,
                                 std::size_t bins);

}  // namespace lrvs
