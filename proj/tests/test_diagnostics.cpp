#include <gtest/gtest.h>

#include <random>

#include "lrvs/diagnostics.hpp"

using namespace lrvs;

namespace {

std::vector<double> iota_chain(double start, int n) {
  std::vector<double> c;
  for (int i = 0; i < n; ++i) c.push_back(start + i);
  return c;
}

}  // namespace

TEST(Psrf, HandComputedCase) {
  // Means 5.5 and 7.5, W = 55/6, B = 20, V = 9/10 W + B/10 = 10.25.
  const auto r = psrf({iota_chain(1, 10), iota_chain(3, 10)});
  EXPECT_NEAR(r.value, std::sqrt(123.0 / 110.0), 1e-12);
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.chains, 2u);
  EXPECT_EQ(r.length, 10u);
}

TEST(Psrf, ThreeChainHandCase) {
  // Identical spread, means 0, 1, 2: W = 55/6 * ... computed directly below.
  std::vector<std::vector<double>> chains{iota_chain(0, 10), iota_chain(1, 10), iota_chain(2, 10)};
  const double W = 55.0 / 6.0;
  const double B = 10.0 * (1.0 + 0.0 + 1.0) / 2.0;
  const double V = 0.9 * W + B / 10.0;
  EXPECT_NEAR(psrf(chains).value, std::sqrt(V / W), 1e-12);
}

TEST(Psrf, DegenerateChains) {
  const std::vector<double> ones(10, 1.0), twos(10, 2.0);
  const auto same = psrf({ones, ones});
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.value, 1.0);
  const auto apart = psrf({ones, twos});
  EXPECT_TRUE(apart.degenerate);
  EXPECT_TRUE(std::isinf(apart.value));
}

TEST(Psrf, InputValidation) {
  EXPECT_THROW(psrf({iota_chain(0, 10)}), std::invalid_argument);
  EXPECT_THROW(psrf({iota_chain(0, 10), iota_chain(0, 11)}), std::invalid_argument);
  EXPECT_THROW(psrf({iota_chain(0, 5), iota_chain(0, 5)}), std::invalid_argument);
}

TEST(Psrf, BurnInAndThinTruncateToShortest) {
  const auto r = psrf({iota_chain(0, 40), iota_chain(0, 45)}, 10, 3);
  EXPECT_EQ(r.length, 10u);
  EXPECT_NEAR(r.value, std::sqrt(0.9), 1e-12);  // identical chains: B = 0
}

TEST(Psrf, SeparatesMixedFromUnmixedChains) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> same(4), apart(4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 5000; ++i) {
      const double x = z(gen);
      same[j].push_back(x);
      apart[j].push_back(x + 2.0 * j);
    }
  EXPECT_LT(psrf(same).value, 1.01);
  EXPECT_GT(psrf(apart).value, 1.1);
}

TEST(Percentile, CountsTiesAsHalf) {
  const std::vector<double> col{1, 2, 2, 3};
  EXPECT_DOUBLE_EQ(percentile_of(2.0, col), 50.0);
  EXPECT_DOUBLE_EQ(percentile_of(0.0, col), 0.0);
  EXPECT_DOUBLE_EQ(percentile_of(4.0, col), 100.0);
  EXPECT_DOUBLE_EQ(percentile_of(1.0, col), 12.5);
  EXPECT_THROW(percentile_of(1.0, std::vector<double>{}), std::invalid_argument);
}

TEST(Quantile, InterpolatesLinearly) {
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(median({5}), 5);
}

TEST(Duplicates, RateIsPercentOfRepeats) {
  const std::vector<std::uint64_t> h{1, 2, 2, 3, 3, 3, 4, 5, 6, 7};
  EXPECT_DOUBLE_EQ(duplicate_rate(h), 30.0);
}

TEST(DensityCheck, IdenticalColumnsAgreeAndDisjointColumnsDiffer) {
  const std::vector<double> a{0, 1, 2, 3}, b{10, 11, 12, 13};
  EXPECT_DOUBLE_EQ(multi_start_density_check({a, a}, 5), 0.0);
  EXPECT_DOUBLE_EQ(multi_start_density_check({a, b}, 5), 1.0);
  EXPECT_THROW(multi_start_density_check({a}, 5), std::invalid_argument);
}

TEST(EnsembleMedians, PerRankMedian) {
  EnsembleTable t({"E"}, 2);
  const std::size_t width = t.columns().size();
  auto row = [&](double s1, double s2) {
    std::vector<double> v(width, 0.0);
    for (std::size_t c = 0; c < width; ++c) {
      if (t.columns()[c] == "E.share_1") v[c] = s1;
      if (t.columns()[c] == "E.share_2") v[c] = s2;
    }
    return v;
  };
  t.append_row(1, row(0.1, 0.6));
  t.append_row(2, row(0.3, 0.7));
  t.append_row(3, row(0.2, 0.9));
  EXPECT_EQ(sorted_share_medians(t, "E"), (std::vector<double>{0.2, 0.7}));
}
