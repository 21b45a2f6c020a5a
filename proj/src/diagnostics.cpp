#include "lrvs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace lrvs {

PsrfResult psrf(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  if (m < 2) throw std::invalid_argument("psrf needs at least two chains");
  const std::size_t n = chains.front().size();
  for (const auto& c : chains)
    if (c.size() != n) throw std::invalid_argument("psrf chains must have equal length");
  if (n < 10) throw std::invalid_argument("psrf needs chains of length >= 10");

  std::vector<double> means(m);
  double within = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (double x : chains[j]) mean += x;
    mean /= static_cast<double>(n);
    means[j] = mean;
    double ss = 0.0;
    for (double x : chains[j]) ss += (x - mean) * (x - mean);
    within += ss / static_cast<double>(n - 1);
  }
  within /= static_cast<double>(m);

  double grand = 0.0;
  for (double mu : means) grand += mu;
  grand /= static_cast<double>(m);
  double between_ss = 0.0;
  for (double mu : means) between_ss += (mu - grand) * (mu - grand);
  const double between = static_cast<double>(n) * between_ss / static_cast<double>(m - 1);

  PsrfResult r;
  r.chains = m;
  r.length = n;
  if (within == 0.0) {
    r.degenerate = true;
    r.value = between == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return r;
  }
  const double nn = static_cast<double>(n);
  const double pooled = (nn - 1.0) / nn * within + between / nn;
  r.value = std::sqrt(pooled / within);
  return r;
}

PsrfResult psrf(const std::vector<std::vector<double>>& chains, std::size_t burn_in, std::size_t thin) {
  if (thin == 0) thin = 1;
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) n = std::min(n, c.size());
  std::vector<std::vector<double>> trimmed;
  trimmed.reserve(chains.size());
  for (const auto& c : chains) {
    std::vector<double> t;
    for (std::size_t i = burn_in; i < n; i += thin) t.push_back(c[i]);
    trimmed.push_back(std::move(t));
  }
  return psrf(trimmed);
}

double percentile_of(double value, std::span<const double> column) {
  if (column.empty()) throw std::invalid_argument("percentile of an empty column");
  double below = 0.0;
  for (double x : column) {
    if (x < value) below += 1.0;
    else if (x == value) below += 0.5;
  }
  return 100.0 * below / static_cast<double>(column.size());
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty column");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

std::vector<double> sorted_share_medians(const EnsembleTable& table, const std::string& election) {
  if (table.size() == 0) throw std::invalid_argument("medians of an empty ensemble");
  std::vector<double> out;
  for (std::uint32_t d = 1; d <= table.k(); ++d)
    out.push_back(median(table.column(election + ".share_" + std::to_string(d))));
  return out;
}

double duplicate_rate(std::span<const std::uint64_t> hashes) {
  if (hashes.empty()) throw std::invalid_argument("duplicate rate of an empty ensemble");
  std::unordered_set<std::uint64_t> distinct(hashes.begin(), hashes.end());
  return 100.0 * (1.0 - static_cast<double>(distinct.size()) / static_cast<double>(hashes.size()));
}

double duplicate_rate(const EnsembleTable& table) { return duplicate_rate(table.hashes()); }

double multi_start_density_check(const std::vector<std::vector<double>>& columns, std::size_t bins) {
  if (columns.size() < 2) throw std::invalid_argument("density check needs at least two columns");
  if (bins == 0) throw std::invalid_argument("density check needs at least one bin");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : columns) {
    if (c.empty()) throw std::invalid_argument("density check of an empty column");
    for (double x : c) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  std::vector<std::vector<double>> hist;
  for (const auto& c : columns) {
    std::vector<double> h(bins, 0.0);
    for (double x : c) {
      auto b = static_cast<std::size_t>((x - lo) / width);
      h[std::min(b, bins - 1)] += 1.0;
    }
    for (double& v : h) v /= static_cast<double>(c.size());
    hist.push_back(std::move(h));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i)
    for (std::size_t j = i + 1; j < hist.size(); ++j) {
      double tv = 0.0;
      for (std::size_t b = 0; b < bins; ++b) tv += std::abs(hist[i][b] - hist[j][b]);
      worst = std::max(worst, 0.5 * tv);
    }
  return worst;
}

double multi_start_density_check(const std::vector<EnsembleTable>& tables, const std::string& metric,
                                 std::size_t bins) {
  std::vector<std::vector<double>> columns;
  for (const auto& t : tables) columns.push_back(t.column(metric));
  return multi_start_density_check(columns, bins);
}

}  // namespace lrvs
