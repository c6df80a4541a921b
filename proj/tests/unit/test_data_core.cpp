#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "fraudkit/baselines.hpp"
#include "fraudkit/csv.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/preprocessing.hpp"
#include "fraudkit/synthetic.hpp"

using namespace fraudkit;

namespace {

std::string credit_card_header(bool quoted) {
  std::string h;
  for (const auto& name : credit_card_schema().features) {
    h += quoted ? "\"" + name + "\"," : name + ",";
  }
  return h + (quoted ? "\"Class\"" : "Class");
}

std::string fixture_row(double base, const std::string& label) {
  std::string row;
  for (int c = 0; c < 30; ++c) row += std::to_string(base + c * 0.5) + ",";
  return row + label;
}

ErrorKind kind_of_error(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a fraudkit::Error";
  return ErrorKind::Io;
}

Dataset column_dataset(std::vector<double> values) {
  const std::size_t n = values.size();
  Labels labels(n, 0);
  return Dataset(Matrix(n, 1, std::move(values)), labels, {"x"});
}

}  // namespace

TEST(Dataset, RejectsInvariantViolations) {
  EXPECT_EQ(kind_of_error([] { Dataset(Matrix(2, 1, {1.0, NAN}), {0, 1}, {"a"}); }), ErrorKind::Data);
  EXPECT_EQ(kind_of_error([] { Dataset(Matrix(2, 1, {1.0, 2.0}), {0, 2}, {"a"}); }), ErrorKind::LabelDomain);
  EXPECT_EQ(kind_of_error([] { Dataset(Matrix(2, 1, {1.0, 2.0}), {0}, {"a"}); }), ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of_error([] { Dataset(Matrix(1, 2, {1.0, 2.0}), {0}, {"a", "a"}); }), ErrorKind::Schema);
}

TEST(LoadCsv, ThreeRowFixture) {
  std::stringstream in;
  in << credit_card_header(false) << "\n"
     << fixture_row(0.0, "0") << "\n"
     << fixture_row(1.0, "\"1\"") << "\n"
     << fixture_row(2.0, "0") << "\n";
  const auto ds = read_csv(in);
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.dims(), 30u);
  EXPECT_EQ(ds.labels(), (Labels{0, 1, 0}));
  EXPECT_EQ(ds.feature_names().front(), "Time");
  EXPECT_EQ(ds.feature_names().back(), "Amount");
  EXPECT_DOUBLE_EQ(ds.features()(1, 29), 1.0 + 29 * 0.5);
}

TEST(LoadCsv, QuotedHeaderAsInThePublicFile) {
  std::stringstream in;
  in << credit_card_header(true) << "\r\n" << fixture_row(0.0, "\"0\"") << "\r\n";
  const auto ds = read_csv(in);
  EXPECT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.labels()[0], 0);
}

TEST(LoadCsv, MissingAmountNamesTheColumn) {
  std::string header = credit_card_header(false);
  header.replace(header.find("Amount"), 6, "Amt");
  std::stringstream in;
  in << header << "\n" << fixture_row(0.0, "0") << "\n";
  try {
    read_csv(in);
    FAIL() << "expected a schema error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Schema);
    EXPECT_NE(std::string(e.what()).find("Amount"), std::string::npos);
  }
}

TEST(LoadCsv, NonNumericCellReportsPosition) {
  std::stringstream in;
  std::string bad = fixture_row(0.0, "0");
  bad.replace(0, bad.find(','), "abc");
  in << credit_card_header(false) << "\n" << fixture_row(0.0, "0") << "\n" << bad << "\n";
  try {
    read_csv(in);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'Time'"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, LabelOutsideDomain) {
  std::stringstream in;
  in << credit_card_header(false) << "\n" << fixture_row(0.0, "2") << "\n";
  EXPECT_EQ(kind_of_error([&] { read_csv(in); }), ErrorKind::LabelDomain);
}

TEST(LoadCsv, MissingFileIsIoError) {
  EXPECT_EQ(kind_of_error([] { load_csv("/nonexistent/creditcard.csv"); }), ErrorKind::Io);
}

TEST(LoadCsv, WriteThenReadIsExactIdentity) {
  // Property: shortest round-trip formatting makes write/read lossless.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    Matrix x(40, 30);
    for (double& v : x.values()) v = rng.normal() * std::pow(10.0, rng.uniform(-8.0, 8.0));
    Labels y(40);
    for (auto& l : y) l = rng.uniform() < 0.3 ? 1 : 0;
    const Dataset ds(x, y, credit_card_schema().features);
    std::stringstream buf;
    write_csv(buf, ds);
    EXPECT_EQ(read_csv(buf), ds);
  }
}

TEST(Synthesize, ExactPositiveCount) {
  SyntheticConfig cfg{1000, 0.02, 30, 2.0, 7};
  const auto ds = synthesize(cfg);
  EXPECT_EQ(ds.count(1), 20u);
  EXPECT_EQ(ds.count(0), 980u);
}

TEST(Synthesize, DeterministicForIdenticalConfig) {
  SyntheticConfig cfg{500, 0.1, 5, 3.0, 99};
  std::stringstream a, b;
  write_csv(a, synthesize(cfg));
  write_csv(b, synthesize(cfg));
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 100;
  std::stringstream c;
  write_csv(c, synthesize(cfg));
  EXPECT_NE(a.str(), c.str());
}

TEST(Synthesize, WellSeparatedBlobsAreSeparableByAShallowTree) {
  const auto ds = synthesize({1000, 0.5, 30, 10.0, 3});
  const auto tree = fit_decision_tree(ds, {4, 2, 0});
  const auto p = tree.predict_proba(ds.features());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) correct += (p[i] >= 0.5) == (ds.labels()[i] == 1);
  EXPECT_GE(static_cast<double>(correct) / static_cast<double>(ds.size()), 0.99);
}

TEST(Synthesize, CentroidDistanceMatchesSeparation) {
  const auto ds = synthesize({20000, 0.5, 4, 3.0, 5});
  std::vector<double> m0(4, 0.0), m1(4, 0.0);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    auto& m = ds.labels()[r] == 1 ? m1 : m0;
    for (std::size_t c = 0; c < 4; ++c) m[c] += ds.features()(r, c);
  }
  double dist = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    const double diff = m1[c] / static_cast<double>(ds.count(1)) - m0[c] / static_cast<double>(ds.count(0));
    dist += diff * diff;
  }
  EXPECT_NEAR(std::sqrt(dist), 3.0, 0.1);
}

TEST(Synthesize, RejectsDegenerateMinority) {
  EXPECT_EQ(kind_of_error([] { synthesize({100, 0.01, 3, 1.0, 1}); }), ErrorKind::Config);
  EXPECT_EQ(kind_of_error([] { synthesize({100, 0.0, 3, 1.0, 1}); }), ErrorKind::Config);
}

TEST(Standardizer, HandComputedColumn) {
  const auto ds = column_dataset({1.0, 2.0, 3.0});
  const std::vector<std::size_t> cols{0};
  const auto params = fit_standardizer(ds, cols);
  EXPECT_DOUBLE_EQ(params.mean[0], 2.0);
  EXPECT_NEAR(params.stddev[0], 0.816496580927726, 1e-15);
  EXPECT_FALSE(params.constant[0]);
  const auto out = apply_standardizer(ds, params);
  EXPECT_NEAR(out.features()(0, 0), -1.224744871391589, 1e-12);
  EXPECT_NEAR(out.features()(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(out.features()(2, 0), 1.224744871391589, 1e-12);
}

TEST(Standardizer, ConstantColumnPassesThrough) {
  const auto ds = column_dataset({5.0, 5.0, 5.0});
  const std::vector<std::size_t> cols{0};
  const auto params = fit_standardizer(ds, cols);
  EXPECT_TRUE(params.constant[0]);
  EXPECT_EQ(apply_standardizer(ds, params), ds);
}

TEST(Standardizer, MatchesTwoPassOracle) {
  Rng rng(11);
  std::vector<double> v(1000);
  for (double& x : v) x = 50.0 + 20.0 * rng.normal();
  const auto ds = column_dataset(v);
  const std::vector<std::size_t> cols{0};
  const auto params = fit_standardizer(ds, cols);
  const auto [m, s] = oracle::mean_std(v);
  EXPECT_NEAR(params.mean[0], m, 1e-12);
  EXPECT_NEAR(params.stddev[0], s, 1e-12);
}

TEST(Standardizer, FittedDataComesOutZeroMeanUnitStd) {
  const auto ds = synthesize({777, 0.1, 6, 1.0, 2});
  const std::vector<std::size_t> cols{0, 2, 5};
  const auto out = apply_standardizer(ds, fit_standardizer(ds, cols));
  for (std::size_t c : cols) {
    const auto [m, s] = oracle::mean_std(out.features().column(c));
    EXPECT_LT(std::abs(m), 1e-9);
    EXPECT_LT(std::abs(s - 1.0), 1e-9);
  }
  // Untouched columns are bit-identical.
  EXPECT_EQ(out.features().column(1), ds.features().column(1));
  // Refit + reapply on standardized data is a no-op.
  const auto again = apply_standardizer(out, fit_standardizer(out, cols));
  for (std::size_t i = 0; i < out.features().values().size(); ++i) {
    EXPECT_NEAR(again.features().values()[i], out.features().values()[i], 1e-12);
  }
}

TEST(Standardizer, Errors) {
  const Dataset empty(Matrix(0, 1), {}, {"x"});
  const std::vector<std::size_t> cols{0};
  EXPECT_EQ(kind_of_error([&] { fit_standardizer(empty, cols); }), ErrorKind::Data);
  const auto ds = column_dataset({1.0, 2.0});
  const std::vector<std::size_t> bad{3};
  EXPECT_EQ(kind_of_error([&] { fit_standardizer(ds, bad); }), ErrorKind::Config);
  const auto params = fit_standardizer(ds, cols);
  const Dataset wide(Matrix(1, 2, {1.0, 2.0}), {0}, {"a", "b"});
  EXPECT_EQ(kind_of_error([&] { apply_standardizer(wide, params); }), ErrorKind::ShapeMismatch);
}

TEST(StratifiedSplit, PerClassRounding) {
  Labels y(100, 0);
  std::fill(y.begin(), y.begin() + 10, Label{1});
  const Dataset ds(Matrix(100, 1, std::vector<double>(100, 0.0)), y, {"x"});
  const auto [train, test] = stratified_split(ds, 0.2, 5);
  EXPECT_EQ(test.count(0), 18u);
  EXPECT_EQ(test.count(1), 2u);
  EXPECT_EQ(train.count(0), 72u);
  EXPECT_EQ(train.count(1), 8u);
}

TEST(StratifiedSplit, DeterministicAndPartitioning) {
  const auto ds = synthesize({503, 0.07, 3, 1.0, 8});
  const auto a = stratified_split_indices(ds.labels(), 0.3, 17);
  const auto b = stratified_split_indices(ds.labels(), 0.3, 17);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);

  // Multiset oracle over row contents.
  std::map<std::vector<double>, int> counts;
  for (std::size_t r = 0; r < ds.size(); ++r) ++counts[oracle::row_vec(ds.features(), r)];
  const auto [train, test] = stratified_split(ds, 0.3, 17);
  for (const Dataset* fold : {&train, &test}) {
    for (std::size_t r = 0; r < fold->size(); ++r) --counts[oracle::row_vec(fold->features(), r)];
  }
  for (const auto& [row, c] : counts) EXPECT_EQ(c, 0);
}

TEST(StratifiedSplit, PreservesClassRatio) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const std::size_t n = 50 + rng.index(500);
    const double rate = 0.02 + 0.3 * rng.uniform();
    const double frac = 0.1 + 0.5 * rng.uniform();
    SyntheticConfig cfg{n, rate, 2, 1.0, seed};
    if (synthetic_positive_count(cfg) < 2) continue;
    const auto ds = synthesize(cfg);
    const auto [train, test] = stratified_split(ds, frac, seed);
    const double tn = static_cast<double>(test.size());
    const double diff = std::abs(static_cast<double>(test.count(1)) / tn -
                                 static_cast<double>(ds.count(1)) / static_cast<double>(ds.size()));
    EXPECT_LE(diff, 1.0 / tn + 1e-12) << "seed " << seed;
  }
}

TEST(StratifiedSplit, TinyClassIsAnError) {
  const Dataset ds(Matrix(5, 1, std::vector<double>(5, 0.0)), {0, 0, 0, 0, 1}, {"x"});
  EXPECT_EQ(kind_of_error([&] { stratified_split(ds, 0.2, 1); }), ErrorKind::Data);
}
