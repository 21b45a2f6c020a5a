#include "lrvs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace lrvs {

ShareVector share_vector(const std::vector<DistrictTally>& tallies, std::size_t election) {
  std::vector<std::pair<double, std::int64_t>> rows;
  rows.reserve(tallies.size());
  for (const auto& t : tallies) {
    const auto& v = t.votes.at(election);
    if (v.two_party() <= 0)
      throw std::domain_error("district " + std::to_string(t.district) + " has no two-party votes");
    rows.emplace_back(static_cast<double>(v.rep) / static_cast<double>(v.two_party()), v.two_party());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ShareVector sv;
  sv.election = election;
  for (const auto& [s, t] : rows) {
    sv.shares.push_back(s);
    sv.turnout.push_back(t);
  }
  return sv;
}

double statewide_share(const ShareVector& sv, SwingBaseline baseline) {
  if (baseline == SwingBaseline::Unweighted || sv.turnout.size() != sv.shares.size())
    return std::accumulate(sv.shares.begin(), sv.shares.end(), 0.0) / static_cast<double>(sv.k());
  double rep = 0.0, total = 0.0;
  for (std::size_t d = 0; d < sv.k(); ++d) {
    rep += sv.shares[d] * static_cast<double>(sv.turnout[d]);
    total += static_cast<double>(sv.turnout[d]);
  }
  return rep / total;
}

double lrvs(std::span<const double> sorted_shares) {
  if (sorted_shares.empty()) throw std::invalid_argument("lrvs of an empty share vector");
  return sorted_shares.front();
}

double mean_median(std::span<const double> sorted_shares) {
  const std::size_t k = sorted_shares.size();
  if (k == 0) throw std::invalid_argument("mean_median of an empty share vector");
  const double mean = std::accumulate(sorted_shares.begin(), sorted_shares.end(), 0.0) / static_cast<double>(k);
  const double median = k % 2 == 1 ? sorted_shares[k / 2]
                                   : 0.5 * (sorted_shares[k / 2 - 1] + sorted_shares[k / 2]);
  return mean - median;
}

double stdev_shares(std::span<const double> shares) {
  if (shares.empty()) throw std::invalid_argument("stdev of an empty share vector");
  const double mean = std::accumulate(shares.begin(), shares.end(), 0.0) / static_cast<double>(shares.size());
  double ss = 0.0;
  for (double s : shares) ss += (s - mean) * (s - mean);
  return std::sqrt(ss / static_cast<double>(shares.size()));
}

int seat_count(std::span<const double> shares) {
  return static_cast<int>(std::count_if(shares.begin(), shares.end(), [](double s) { return s > 0.5; }));
}

int tie_count(std::span<const double> shares) {
  return static_cast<int>(std::count(shares.begin(), shares.end(), 0.5));
}

SeatsVotesCurve::SeatsVotesCurve(std::vector<double> thresholds, std::size_t k)
    : thresholds_(std::move(thresholds)), k_(k) {
  std::sort(thresholds_.begin(), thresholds_.end());
}

double SeatsVotesCurve::operator()(double v) const {
  // share_d + (v - V) > 1/2  <=>  v > threshold_d
  const auto won = std::lower_bound(thresholds_.begin(), thresholds_.end(), v) - thresholds_.begin();
  return static_cast<double>(won) / static_cast<double>(k_);
}

SeatsVotesCurve seats_votes_curve(const ShareVector& sv, SwingBaseline baseline) {
  if (sv.k() == 0) throw std::invalid_argument("seats-votes curve of an empty share vector");
  const double V = statewide_share(sv, baseline);
  std::vector<double> thresholds;
  thresholds.reserve(sv.k());
  for (double s : sv.shares) thresholds.push_back(0.5 - s + V);
  return SeatsVotesCurve(std::move(thresholds), sv.k());
}

double partisan_bias(const ShareVector& sv, SwingBaseline baseline) {
  if (sv.k() == 0) throw std::invalid_argument("partisan bias of an empty share vector");
  // After swinging to 1/2, district d is Republican iff share_d > V. A district
  // exactly at V sits on the swing point and counts as half a seat.
  const double V = statewide_share(sv, baseline);
  double seats = 0.0;
  for (double s : sv.shares) seats += s > V ? 1.0 : s == V ? 0.5 : 0.0;
  return seats / static_cast<double>(sv.k()) - 0.5;
}

double partisan_gini(const ShareVector& sv, SwingBaseline baseline) {
  const SeatsVotesCurve curve = seats_votes_curve(sv, baseline);
  // Both S(v) and 1 - S(1 - v) are constant between consecutive points of
  // {0, 1, t_d, 1 - t_d}, so evaluating at interval midpoints is exact.
  std::vector<double> cuts{0.0, 1.0};
  for (double t : curve.thresholds()) {
    if (t > 0.0 && t < 1.0) cuts.push_back(t);
    if (1.0 - t > 0.0 && 1.0 - t < 1.0) cuts.push_back(1.0 - t);
  }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    if (width <= 0.0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    area += std::abs(curve(mid) - (1.0 - curve(1.0 - mid))) * width;
  }
  return area;
}

double efficiency_gap(const std::vector<DistrictTally>& tallies, std::size_t election) {
  double wasted_r = 0.0, wasted_d = 0.0, total = 0.0;
  for (const auto& t : tallies) {
    const auto& v = t.votes.at(election);
    const auto half = static_cast<double>(v.two_party()) / 2.0;
    if (v.rep > v.dem) {
      wasted_r += static_cast<double>(v.rep) - half;
      wasted_d += static_cast<double>(v.dem);
    } else {
      wasted_d += static_cast<double>(v.dem) - half;
      wasted_r += static_cast<double>(v.rep);
    }
    total += static_cast<double>(v.two_party());
  }
  if (total <= 0.0) throw std::domain_error("efficiency gap with no two-party votes");
  return (wasted_d - wasted_r) / total;
}

double ranked_marginal_deviation(std::span<const double> sorted_shares,
                                 std::span<const double> ensemble_medians) {
  if (sorted_shares.size() != ensemble_medians.size())
    throw std::invalid_argument("ranked marginal deviation: length mismatch");
  double sum = 0.0;
  for (std::size_t d = 0; d < sorted_shares.size(); ++d) {
    const double diff = sorted_shares[d] - ensemble_medians[d];
    sum += diff * diff;
  }
  return sum;
}

std::optional<double> declination(std::span<const double> shares) {
  std::vector<double> y(shares.begin(), shares.end());
  std::sort(y.begin(), y.end());
  const auto n = static_cast<double>(y.size());
  double fx = 0.0, fy = 0.0, gx = 0.0, gy = 0.0;
  std::size_t below = 0, above = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = (static_cast<double>(i) + 0.5) / n;
    if (y[i] > 0.5) {
      gx += x;
      gy += y[i];
      ++above;
    } else {
      fx += x;
      fy += y[i];
      ++below;
    }
  }
  if (below == 0 || above == 0) return std::nullopt;
  fx /= static_cast<double>(below);
  fy /= static_cast<double>(below);
  gx /= static_cast<double>(above);
  gy /= static_cast<double>(above);
  const double mx = static_cast<double>(below) / n;
  const double theta_f = std::atan((0.5 - fy) / (mx - fx));
  const double theta_g = std::atan((gy - 0.5) / (gx - mx));
  // On Republican shares a steeper Republican-won arm means packed Republicans.
  return 2.0 / std::numbers::pi * (theta_f - theta_g);
}

double buffered_declination(std::span<const double> shares, double buffer) {
  std::vector<double> augmented(shares.begin(), shares.end());
  augmented.push_back(buffer);
  augmented.push_back(1.0 - buffer);
  auto d = declination(augmented);
  if (!d) throw std::invalid_argument("buffer share must differ from 1/2");
  return *d;
}

DislocationModel::DislocationModel(const DualGraph& graph, std::uint32_t k) : k_(k) {
  if (k == 0) throw std::invalid_argument("dislocation model needs k >= 1");
  const std::size_t n = graph.num_nodes();
  const std::size_t elections = graph.num_elections();
  neighborhood_share_.assign(elections, std::vector<double>(n, 0.0));

  std::vector<double> quota(elections);
  for (std::size_t e = 0; e < elections; ++e)
    quota[e] = static_cast<double>(graph.total_votes(e).two_party()) / static_cast<double>(k);

  std::vector<std::pair<double, NodeIndex>> by_distance(n);
  for (NodeIndex v = 0; v < n; ++v) {
    const Point c = graph.node(v).centroid;
    for (NodeIndex w = 0; w < n; ++w) {
      const Point p = graph.node(w).centroid;
      const double d2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
      by_distance[w] = {w == v ? -1.0 : d2, w};
    }
    std::sort(by_distance.begin(), by_distance.end());
    for (std::size_t e = 0; e < elections; ++e) {
      std::int64_t rep = 0, total = 0;
      for (const auto& [_, w] : by_distance) {
        const auto& votes = graph.node(w).votes[e];
        rep += votes.rep;
        total += votes.two_party();
        if (static_cast<double>(total) >= quota[e]) break;
      }
      neighborhood_share_[e][v] = total > 0 ? static_cast<double>(rep) / static_cast<double>(total) : 0.0;
    }
  }
}

double DislocationModel::aapd(const Plan& plan, const std::vector<DistrictTally>& tallies,
                              std::size_t election) const {
  if (plan.k() != k_) throw std::invalid_argument("dislocation model built for a different k");
  std::vector<double> district_share(tallies.size());
  for (const auto& t : tallies) {
    const auto& v = t.votes.at(election);
    if (v.two_party() <= 0)
      throw std::domain_error("district " + std::to_string(t.district) + " has no two-party votes");
    district_share[t.district] = static_cast<double>(v.rep) / static_cast<double>(v.two_party());
  }
  const auto& nb = neighborhood_share_.at(election);
  double sum = 0.0;
  for (std::size_t v = 0; v < plan.size(); ++v) sum += std::abs(district_share[plan[v]] - nb[v]);
  return sum / static_cast<double>(plan.size());
}

double aapd(const DualGraph& graph, const Plan& plan, std::size_t election) {
  return DislocationModel(graph, plan.k()).aapd(plan, tally(graph, plan), election);
}

MetricVector compute_metrics(const Plan& plan, const std::vector<DistrictTally>& tallies,
                             std::size_t election, const DislocationModel* dislocation,
                             const MetricOptions& options) {
  const ShareVector sv = share_vector(tallies, election);
  MetricVector m;
  m.sorted_shares = sv.shares;
  m.lrvs = lrvs(sv.shares);
  m.seats_r = seat_count(sv.shares);
  m.ties = tie_count(sv.shares);
  m.mean_median = mean_median(sv.shares);
  m.partisan_bias = partisan_bias(sv, options.baseline);
  m.partisan_gini = partisan_gini(sv, options.baseline);
  m.efficiency_gap = efficiency_gap(tallies, election);
  m.stdev_shares = stdev_shares(sv.shares);
  if (dislocation) m.aapd = dislocation->aapd(plan, tallies, election);
  m.buffered_declination = buffered_declination(sv.shares, options.declination_buffer);
  return m;
}

const std::vector<std::string>& scalar_metric_names() {
  static const std::vector<std::string> names{
      "lrvs",           "seats_r",      "ties", "mean_median",
      "partisan_bias",  "partisan_gini", "efficiency_gap", "stdev_shares",
      "aapd",           "buffered_declination"};
  return names;
}

std::vector<double> scalar_metric_values(const MetricVector& m) {
  return {m.lrvs,           m.seats_r * 1.0,   m.ties * 1.0,    m.mean_median,
          m.partisan_bias,  m.partisan_gini,   m.efficiency_gap, m.stdev_shares,
          m.aapd,           m.buffered_declination};
}

}  // namespace lrvs
