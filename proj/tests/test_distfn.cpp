#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "gof/distfn.hpp"
#include "gof/normal.hpp"

using namespace gof;

TEST(Normal, CdfMatchesErfcIdentityAndSymmetry) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  for (double x : {-6.0, -2.5, -0.3, 0.7, 1.96, 4.0}) {
    EXPECT_NEAR(normal_cdf(x) + normal_cdf(-x), 1.0, 1e-15);
    EXPECT_NEAR(normal_sf(x), normal_cdf(-x), 1e-16);
  }
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-15);
}

TEST(Normal, QuantileRoundTrip) {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9}) {
    const double x = normal_quantile(p);
    const double back = p < 0.5 ? normal_cdf(x) : 1.0 - normal_sf(x);
    EXPECT_NEAR(back / p, 1.0, 1e-12) << p;
  }
  EXPECT_THROW(normal_quantile(0.0), DomainError);
  EXPECT_THROW(normal_quantile(1.0), DomainError);
}

TEST(HypothesisModel, CdfExamples) {
  EXPECT_DOUBLE_EQ(eval_cdf(HypothesisModel::uniform(0, 1), 0.3), 0.3);
  EXPECT_DOUBLE_EQ(eval_cdf(HypothesisModel::normal(0, 1), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(eval_cdf(HypothesisModel::exponential(1), 0.0), 0.0);
  EXPECT_DOUBLE_EQ(eval_cdf(HypothesisModel::uniform(2, 4), 1.0), 0.0);
  EXPECT_DOUBLE_EQ(eval_cdf(HypothesisModel::uniform(2, 4), 5.0), 1.0);
}

TEST(HypothesisModel, InvalidParameters) {
  EXPECT_THROW(HypothesisModel::uniform(1, 1), ParameterError);
  EXPECT_THROW(HypothesisModel::normal(0, 0), ParameterError);
  EXPECT_THROW(HypothesisModel::normal(0, -1), ParameterError);
  EXPECT_THROW(HypothesisModel::exponential(0), ParameterError);
  EXPECT_THROW(HypothesisModel::piecewise_linear({{0, 0}, {0, 1}}), ParameterError);
  EXPECT_THROW(HypothesisModel::piecewise_linear({{0, 0}, {1, 0.9}}), ParameterError);
  EXPECT_THROW(HypothesisModel::piecewise_linear({{0, 0}, {1, 0.6}, {2, 0.4}, {3, 1}}),
               ParameterError);
}

TEST(HypothesisModel, QuantileExamplesAndRoundTrip) {
  EXPECT_DOUBLE_EQ(eval_quantile(HypothesisModel::uniform(0, 1), 0.25), 0.25);
  EXPECT_NEAR(eval_quantile(HypothesisModel::normal(0, 1), 0.5), 0.0, 1e-15);
  EXPECT_NEAR(eval_quantile(HypothesisModel::exponential(1), 1 - std::exp(-1.0)), 1.0, 1e-14);

  const HypothesisModel models[] = {
      HypothesisModel::uniform(-2, 3), HypothesisModel::normal(1.5, 0.4),
      HypothesisModel::exponential(2.5),
      HypothesisModel::piecewise_linear({{0, 0}, {1, 0.2}, {3, 0.9}, {4, 1}})};
  for (const auto& m : models) {
    for (double p = 0.01; p < 1.0; p += 0.0731) {
      EXPECT_NEAR(eval_cdf(m, eval_quantile(m, p)), p, 1e-12);
    }
    EXPECT_THROW(eval_quantile(m, 0.0), DomainError);
    EXPECT_THROW(eval_quantile(m, 1.0), DomainError);
  }
}

TEST(HypothesisModel, CdfIsMonotone) {
  const auto m = HypothesisModel::piecewise_linear({{-1, 0}, {0, 0.5}, {0.5, 0.5}, {2, 1}});
  double prev = 0.0;
  for (double x = -2.0; x <= 3.0; x += 0.01) {
    const double f = eval_cdf(m, x);
    EXPECT_GE(f, prev);
    prev = f;
  }
  // Flat stretch: the quantile takes the left end.
  EXPECT_DOUBLE_EQ(eval_quantile(m, 0.5), 0.0);
}

TEST(Pit, SortsAndTransforms) {
  const auto u = pit({2.0, 0.5, 1.0}, HypothesisModel::uniform(0, 4));
  ASSERT_EQ(u.size(), 3u);
  EXPECT_DOUBLE_EQ(u.order_stat(1), 0.125);
  EXPECT_DOUBLE_EQ(u.order_stat(2), 0.25);
  EXPECT_DOUBLE_EQ(u.order_stat(3), 0.5);
}

TEST(Pit, Errors) {
  EXPECT_THROW(pit({}, HypothesisModel::uniform(0, 1)), InputError);
  EXPECT_THROW(pit({-0.1}, HypothesisModel::exponential(1)), InputError);
  EXPECT_THROW(pit({1.5}, HypothesisModel::uniform(0, 1)), InputError);
  EXPECT_THROW(pit({std::nan("")}, HypothesisModel::normal(0, 1)), InputError);
}

TEST(Pit, IsInvariantUnderModelChoiceForMatchingData) {
  // Distribution-freeness at the data level: transforming F0-quantiles of
  // fixed uniforms gives the same UnitSample for every model.
  const std::vector<double> u = {0.03, 0.2, 0.41, 0.77, 0.96};
  const HypothesisModel models[] = {HypothesisModel::normal(3, 2), HypothesisModel::exponential(0.7),
                                    HypothesisModel::uniform(-1, 1)};
  for (const auto& m : models) {
    std::vector<double> raw;
    for (double p : u) raw.push_back(eval_quantile(m, p));
    const auto back = pit(raw, m);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(back.values()[i], u[i], 1e-12);
  }
}

TEST(UnitSample, Validation) {
  EXPECT_THROW(UnitSample::from_sorted({}), InputError);
  EXPECT_THROW(UnitSample::from_sorted({0.5, 0.2}), InputError);
  EXPECT_THROW(UnitSample::from_sorted({1.2}), InputError);
  EXPECT_NO_THROW(UnitSample::from_sorted({0.0, 0.0, 1.0}));
}

TEST(Csv, HeaderBlankLinesAndErrors) {
  std::istringstream ok("value\n1.5\n\n-2\n3e-1\n");
  EXPECT_EQ(read_sample_csv(ok), (std::vector<double>{1.5, -2, 0.3}));
  std::istringstream bom("\xEF\xBB\xBF" "0.25\n0.5\n");
  EXPECT_EQ(read_sample_csv(bom), (std::vector<double>{0.25, 0.5}));
  std::istringstream bad("1\nabc\n");
  EXPECT_THROW(read_sample_csv(bad), InputError);
  std::istringstream empty("x\n");
  EXPECT_THROW(read_sample_csv(empty), InputError);
  EXPECT_THROW(read_sample_csv(std::string("/nonexistent/file.csv")), InputError);
}

TEST(ParseModel, Grammar) {
  EXPECT_DOUBLE_EQ(eval_cdf(parse_model("uniform:0,2"), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(eval_cdf(parse_model("normal:1,3"), 1.0), 0.5);
  EXPECT_NEAR(eval_cdf(parse_model("exp:2"), 0.5), 1 - std::exp(-1.0), 1e-15);
  EXPECT_THROW(parse_model("gamma:1"), InputError);
  EXPECT_THROW(parse_model("normal:1"), InputError);
  EXPECT_THROW(parse_model("normal:1,x"), InputError);
  EXPECT_THROW(parse_model("normal:0,-1"), ParameterError);

  const std::string path = ::testing::TempDir() + "pwl_knots.csv";
  {
    std::ofstream f(path);
    f << "x,F\n0,0\n1,0.5\n2,1\n";
  }
  EXPECT_DOUBLE_EQ(eval_cdf(parse_model("pwl:" + path), 1.5), 0.75);
  std::remove(path.c_str());
}
