#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrvs/graph.hpp"
#include "lrvs/partition.hpp"

namespace lrvs {

// All signed metrics are oriented so that positive values favor Republicans.
// Shares are Republican two-party shares rep / (rep + dem).

/// Sorted Republican shares with turnout aligned to the same order.
struct ShareVector {
  std::vector<double> shares;
  std::vector<std::int64_t> turnout;
  std::size_t election = 0;

  std::size_t k() const noexcept { return shares.size(); }
};

/// Throws std::domain_error if a district has no two-party votes.
ShareVector share_vector(const std::vector<DistrictTally>& tallies, std::size_t election);

/// Statewide share used as the uniform-swing baseline.
enum class SwingBaseline { TurnoutWeighted, Unweighted };
double statewide_share(const ShareVector& sv, SwingBaseline baseline = SwingBaseline::TurnoutWeighted);

/// Least-Republican vote share: the smallest district share.
double lrvs(std::span<const double> sorted_shares);
double mean_median(std::span<const double> sorted_shares);
double stdev_shares(std::span<const double> shares);
/// Districts with share strictly above 1/2. Exact ties go to the Democrats.
int seat_count(std::span<const double> shares);
int tie_count(std::span<const double> shares);

/// Republican seat share under uniform swing, as a function of statewide
/// share v: S(v) = #{d : share_d + (v - V) > 1/2} / k.
class SeatsVotesCurve {
public:
  SeatsVotesCurve(std::vector<double> thresholds, std::size_t k);

  double operator()(double v) const;
  /// Statewide shares at which a district flips, ascending.
  const std::vector<double>& thresholds() const noexcept { return thresholds_; }
  std::size_t k() const noexcept { return k_; }

private:
  std::vector<double> thresholds_;
  std::size_t k_;
};

SeatsVotesCurve seats_votes_curve(const ShareVector& sv,
                                  SwingBaseline baseline = SwingBaseline::TurnoutWeighted);

/// Seat share minus 1/2 after swinging the statewide share to 1/2. A district
/// left exactly at 1/2 by the swing counts as half a seat.
double partisan_bias(const ShareVector& sv, SwingBaseline baseline = SwingBaseline::TurnoutWeighted);

/// Area between S(v) and 1 - S(1 - v) over v in [0, 1], integrated exactly.
double partisan_gini(const ShareVector& sv, SwingBaseline baseline = SwingBaseline::TurnoutWeighted);

/// (wasted D - wasted R) / two-party total. The winner wastes votes above half
/// the district's two-party total; an exact tie counts as a Democratic win.
double efficiency_gap(const std::vector<DistrictTally>& tallies, std::size_t election);

double ranked_marginal_deviation(std::span<const double> sorted_shares,
                                 std::span<const double> ensemble_medians);

/// Declination of the sorted shares, or nullopt when one party wins every district.
std::optional<double> declination(std::span<const double> shares);
/// Declination after appending one district at `buffer` and one at 1 - buffer.
double buffered_declination(std::span<const double> shares, double buffer = 0.75);

/// Precomputed partisan neighborhoods for average absolute partisan dislocation.
/// A precinct's neighborhood is itself followed by the nearest precincts by
/// centroid distance, accumulated until its two-party votes reach the
/// statewide two-party total divided by k.
class DislocationModel {
public:
  DislocationModel(const DualGraph& graph, std::uint32_t k);

  /// Republican two-party share of precinct v's neighborhood.
  double neighborhood_share(std::size_t election, NodeIndex v) const {
    return neighborhood_share_[election][v];
  }
  std::uint32_t k() const noexcept { return k_; }

  double aapd(const Plan& plan, const std::vector<DistrictTally>& tallies, std::size_t election) const;

private:
  std::uint32_t k_;
  std::vector<std::vector<double>> neighborhood_share_;
};

double aapd(const DualGraph& graph, const Plan& plan, std::size_t election);

struct MetricOptions {
  double declination_buffer = 0.75;
  SwingBaseline baseline = SwingBaseline::TurnoutWeighted;
};

/// Per-election metric record. rmd is filled in only once ensemble medians exist.
struct MetricVector {
  std::vector<double> sorted_shares;
  double lrvs = 0.0;
  int seats_r = 0;
  int ties = 0;
  double mean_median = 0.0;
  double partisan_bias = 0.0;
  double partisan_gini = 0.0;
  double efficiency_gap = 0.0;
  double stdev_shares = 0.0;
  double aapd = 0.0;
  double buffered_declination = 0.0;
  std::optional<double> rmd;
};

/// `dislocation` may be null, in which case aapd is left at 0.
MetricVector compute_metrics(const Plan& plan, const std::vector<DistrictTally>& tallies,
                             std::size_t election, const DislocationModel* dislocation,
                             const MetricOptions& options = {});

/// Scalar metric columns in record order (after the k sorted shares).
const std::vector<std::string>& scalar_metric_names();
/// Values of scalar_metric_names() for a MetricVector.
std::vector<double> scalar_metric_values(const MetricVector& m);

}  // namespace lrvs
