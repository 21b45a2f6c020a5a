#pragma once

// Hand-built 4-district tallies on a 4x4 precinct grid. Every district turnout
// and the statewide turnout are powers of two, so each breakpoint of the
// seats-votes curve is a dyadic rational and the grid quadrature in
// oracles.hpp integrates the partisan Gini exactly.

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "lrvs/partition.hpp"
#include "oracles.hpp"

namespace fixtures {

struct MetricFixture {
  std::string name;
  std::array<std::int64_t, 4> turnout;
  std::array<std::int64_t, 4> rep;
  int layout = 0;

  std::vector<oracle::Tally> tallies() const {
    std::vector<oracle::Tally> out;
    for (int d = 0; d < 4; ++d) out.push_back({rep[d], turnout[d] - rep[d]});
    return out;
  }
};

// Keeps parameterized test names readable.
inline void PrintTo(const MetricFixture& f, std::ostream* os) { *os << f.name; }

inline int layout_label(int layout, int r, int c) {
  static constexpr int irregular[16] = {0, 0, 0, 1, 0, 2, 1, 1, 2, 2, 3, 1, 2, 3, 3, 3};
  switch (layout % 4) {
    case 0: return r;
    case 1: return c;
    case 2: return (r / 2) * 2 + c / 2;
    default: return irregular[r * 4 + c];
  }
}

inline std::vector<int> labels(const MetricFixture& f) {
  std::vector<int> out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.push_back(layout_label(f.layout, r, c));
  return out;
}

/// Uneven split of a district's Republican votes over its four precincts.
inline std::array<std::int64_t, 4> precinct_reps(std::int64_t rep, std::int64_t turnout) {
  const std::int64_t t = turnout / 4;
  std::array<std::int64_t, 4> r{};
  for (int i = 0; i < 4; ++i) r[i] = rep / 4 + (i < rep % 4 ? 1 : 0);
  const std::int64_t d1 = std::min(t - r[0], r[1]) / 2;
  r[0] += d1;
  r[1] -= d1;
  const std::int64_t d2 = std::min(t - r[2], r[3]) / 3;
  r[2] += d2;
  r[3] -= d2;
  return r;
}

inline lrvs::DualGraph graph(const MetricFixture& f) {
  const auto lab = labels(f);
  std::array<int, 4> seen{};
  std::array<std::array<std::int64_t, 4>, 4> reps;
  for (int d = 0; d < 4; ++d) reps[d] = precinct_reps(f.rep[d], f.turnout[d]);
  return oracle::grid(4, 4, [&](int r, int c, lrvs::PrecinctAttributes& p) {
    const int d = lab[r * 4 + c];
    const std::int64_t t = f.turnout[d] / 4;
    const std::int64_t rep = reps[d][seen[d]++];
    p.votes = {lrvs::VoteCount{rep, t - rep}};
    p.population = t;
  });
}

inline lrvs::Plan plan(const MetricFixture& f) {
  std::vector<lrvs::District> a;
  for (int l : labels(f)) a.push_back(static_cast<lrvs::District>(l));
  return lrvs::Plan(std::move(a), 4);
}

inline const std::vector<MetricFixture>& metric_fixtures() {
  static const std::vector<MetricFixture> all = [] {
    std::vector<MetricFixture> v{
        {"mixed", {1024, 1024, 1024, 1024}, {300, 450, 600, 700}},
        {"all-ties", {1024, 1024, 1024, 1024}, {512, 512, 512, 512}},
        {"symmetric-even", {1024, 1024, 1024, 1024}, {307, 461, 563, 717}},
        {"republican-sweep", {1024, 1024, 1024, 1024}, {600, 650, 700, 900}},
        {"democratic-sweep", {1024, 1024, 1024, 1024}, {100, 200, 300, 400}},
        {"uneven-turnout", {512, 512, 1024, 2048}, {200, 300, 600, 1100}},
        {"small-turnout", {256, 256, 512, 1024}, {100, 200, 300, 700}},
        {"tie-and-skew", {2048, 1024, 512, 512}, {1024, 600, 256, 100}},
        {"symmetric-off-center", {1024, 1024, 1024, 1024}, {358, 512, 614, 768}},
        {"symmetric-narrow", {1024, 1024, 1024, 1024}, {400, 500, 524, 624}},
        {"half-k", {512, 512, 512, 512}, {100, 250, 300, 450}},
        {"two-ties", {512, 512, 512, 512}, {256, 256, 300, 200}},
        {"skewed-small", {256, 256, 512, 1024}, {130, 120, 260, 500}},
        {"extremes", {1024, 1024, 1024, 1024}, {0, 1024, 512, 300}},
        {"uneven-descending", {2048, 1024, 512, 512}, {900, 700, 200, 300}},
        {"competitive", {512, 512, 512, 512}, {260, 250, 270, 240}},
        {"narrow-sweep", {1024, 1024, 1024, 1024}, {520, 530, 540, 550}},
        {"packed-both", {1024, 1024, 1024, 1024}, {10, 20, 1000, 1010}},
        {"mixed-small", {256, 256, 512, 1024}, {200, 50, 400, 300}},
        {"lean-r", {1024, 1024, 1024, 1024}, {480, 490, 600, 700}},
        {"ties-uneven", {512, 512, 1024, 2048}, {256, 256, 512, 1024}},
        {"alternating", {1024, 1024, 1024, 1024}, {700, 200, 650, 250}},
        {"one-big", {2048, 512, 1024, 512}, {1500, 100, 300, 400}},
        {"arithmetic", {1024, 1024, 1024, 1024}, {333, 444, 555, 666}},
    };
    for (std::size_t i = 0; i < v.size(); ++i) v[i].layout = static_cast<int>(i % 4);
    return v;
  }();
  return all;
}

}  // namespace fixtures
