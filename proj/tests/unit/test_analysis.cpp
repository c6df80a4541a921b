#include <gtest/gtest.h>

#include "oracles.hpp"
#include "fraudkit/analysis.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/synthetic.hpp"

using namespace fraudkit;

namespace {

Dataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, d);
  for (double& v : x.values()) v = rng.normal();
  Labels y(n);
  for (auto& l : y) l = static_cast<Label>(rng.index(2));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < d; ++c) names.push_back("c" + std::to_string(c));
  return Dataset(std::move(x), std::move(y), names);
}

}  // namespace

TEST(Correlation, SelfAndNegative) {
  const Dataset ds(Matrix(3, 2, {1, 6, 2, 4, 3, 2}), {0, 1, 0}, {"x", "y"});
  const auto c = pearson_correlation(ds);
  EXPECT_EQ(c.values(0, 0), 1.0);
  EXPECT_EQ(c.values(1, 1), 1.0);
  EXPECT_NEAR(c.values(0, 1), -1.0, 1e-15);
  EXPECT_TRUE(c.constant_columns.empty());
}

TEST(Correlation, ConstantColumnFlagged) {
  const Dataset ds(Matrix(3, 2, {1, 7, 2, 7, 3, 7}), {0, 1, 0}, {"x", "k"});
  const auto c = pearson_correlation(ds);
  EXPECT_EQ(c.constant_columns, (std::set<std::size_t>{1}));
  EXPECT_EQ(c.values(0, 1), 0.0);
  EXPECT_EQ(c.values(1, 1), 0.0);
  EXPECT_EQ(c.values(0, 0), 1.0);
}

TEST(Correlation, MatchesOracle) {
  const auto ds = random_dataset(200, 8, 4);
  const auto c = pearson_correlation(ds);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      const double ref = oracle::pearson(ds.features().column(i), ds.features().column(j));
      EXPECT_NEAR(c.values(i, j), ref, 1e-10);
      EXPECT_NEAR(c.values(i, j), c.values(j, i), 1e-12);
      EXPECT_LE(std::abs(c.values(i, j)), 1.0);
    }
    EXPECT_EQ(c.values(i, i), 1.0);
  }
}

TEST(Correlation, AffineInvariance) {
  const auto ds = random_dataset(120, 3, 8);
  const auto base = pearson_correlation(ds);
  for (double a : {3.5, -0.25}) {
    Matrix x = ds.features();
    for (std::size_t r = 0; r < x.rows(); ++r) x(r, 0) = a * x(r, 0) + 17.0;
    const auto c = pearson_correlation(Dataset(x, ds.labels(), ds.feature_names()));
    const double sign = a > 0 ? 1.0 : -1.0;
    EXPECT_NEAR(c.values(0, 1), sign * base.values(0, 1), 1e-10);
    EXPECT_NEAR(c.values(0, 2), sign * base.values(0, 2), 1e-10);
    EXPECT_NEAR(c.values(1, 2), base.values(1, 2), 1e-12);
  }
}

TEST(Correlation, RowPermutationInvariance) {
  const auto ds = random_dataset(150, 5, 12);
  std::vector<std::size_t> perm(ds.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(1);
  rng.shuffle(perm);
  const auto a = pearson_correlation(ds);
  const auto b = pearson_correlation(ds.select_rows(perm));
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(a.values(i, j), b.values(i, j), 1e-12);
  }
}

TEST(Correlation, TooFewRows) {
  EXPECT_THROW(pearson_correlation(random_dataset(1, 2, 1)), Error);
}

TEST(LabelDistribution, Counts) {
  SyntheticConfig cfg;
  cfg.n_samples = 1000;
  cfg.fraud_rate = 0.02;
  const auto counts = label_distribution(synthesize(cfg));
  EXPECT_EQ(counts.negative, 980u);
  EXPECT_EQ(counts.positive, 20u);
  const auto empty = label_distribution(Dataset(Matrix(0, 1), {}, {"x"}));
  EXPECT_EQ(empty.negative, 0u);
  EXPECT_EQ(empty.positive, 0u);
}

TEST(ClassSummary, HandValues) {
  const Dataset ds(Matrix(5, 1, {1, 2, 3, 4, 9}), {0, 0, 0, 0, 1}, {"v"});
  const std::vector<std::size_t> feats{0};
  const auto s = class_feature_summary(ds, feats);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].label, 0);
  EXPECT_EQ(s[0].count, 4u);
  EXPECT_DOUBLE_EQ(s[0].median, 2.5);
  EXPECT_DOUBLE_EQ(s[0].mean, 2.5);
  EXPECT_DOUBLE_EQ(s[0].q1, 1.75);
  EXPECT_EQ(s[0].min, 1.0);
  EXPECT_EQ(s[0].max, 4.0);
  EXPECT_EQ(s[1].label, 1);
  EXPECT_EQ(s[1].mean, 9.0);
  EXPECT_EQ(s[1].median, 9.0);
  EXPECT_EQ(s[1].min, 9.0);
  EXPECT_EQ(s[1].max, 9.0);
  EXPECT_EQ(s[1].stddev, 0.0);
}

TEST(ClassSummary, MatchesOracle) {
  const auto ds = random_dataset(301, 4, 2);
  const std::vector<std::size_t> feats{1, 3};
  const auto s = class_feature_summary(ds, feats);
  ASSERT_EQ(s.size(), 4u);
  for (const auto& e : s) {
    std::vector<double> v;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      if (ds.labels()[r] == e.label) v.push_back(ds.features()(r, e.feature));
    }
    EXPECT_EQ(e.count, v.size());
    EXPECT_NEAR(e.q1, oracle::quantile(v, 0.25), 1e-12);
    EXPECT_NEAR(e.median, oracle::quantile(v, 0.5), 1e-12);
    EXPECT_NEAR(e.q3, oracle::quantile(v, 0.75), 1e-12);
    const auto [m, sd] = oracle::mean_std(v);
    EXPECT_NEAR(e.mean, m, 1e-12);
    EXPECT_NEAR(e.stddev, sd, 1e-12);
  }
  const std::vector<std::size_t> bad{9};
  EXPECT_THROW(class_feature_summary(ds, bad), Error);
}
