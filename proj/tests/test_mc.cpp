#include <gtest/gtest.h>

#include <cmath>

#include "gof/mc.hpp"

using namespace gof;

TEST(Rng, UniformsStayInsideTheUnitInterval) {
  ReplicateRng rng(0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_NE(replicate_seed(1, 0), replicate_seed(1, 1));
  EXPECT_NE(replicate_seed(1, 0), replicate_seed(2, 0));
}

TEST(SimulateNull, Deterministic) {
  const MCConfig one{1, 42, 1};
  EXPECT_EQ(simulate_null(StatKind::Mn, 10, one), simulate_null(StatKind::Mn, 10, one));
}

TEST(SimulateNull, IndependentOfWorkerCount) {
  const auto a = simulate_null(TestStat::WnStar, 25, 0.05, MCConfig{3001, 5, 1});
  const auto b = simulate_null(TestStat::WnStar, 25, 0.05, MCConfig{3001, 5, 4});
  const auto c = simulate_null(TestStat::WnStar, 25, 0.05, MCConfig{3001, 5, 7});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(SimulateNull, DanielsLaw) {
  const auto ln = simulate_null(StatKind::Ln, 20, MCConfig{20000, 8, 4});
  EXPECT_LT(empirical_cdf_distance(ln, daniels_ln_cdf), dkw_bound(20000, 0.01));
}

TEST(SimulateNull, SmirnovScaled) {
  const auto v = simulate_null(TestStat::Smirnov, 30, 0.05, MCConfig{20000, 9, 4});
  const double root = std::sqrt(30.0);
  EXPECT_LT(empirical_cdf_distance(v, [&](double x) { return smirnov_cdf(30, x / root); }),
            dkw_bound(20000, 0.01));
}

TEST(SimulateNull, WStarFigureCrossCheck) {
  const auto v = simulate_null(TestStat::WnStar, 15, 0.05, MCConfig{20000, 10, 4});
  const double root = std::sqrt(15.0);
  EXPECT_LT(empirical_cdf_distance(v, [&](double x) { return wstar_cdf(15, x / root); }),
            dkw_bound(20000, 0.01));
}

TEST(EmpiricalDistance, Basics) {
  EXPECT_DOUBLE_EQ(empirical_cdf_distance({0.5}, [](double x) { return x; }), 0.5);
  EXPECT_THROW(empirical_cdf_distance({}, [](double x) { return x; }), InputError);
  // Ties jump together.
  EXPECT_DOUBLE_EQ(empirical_cdf_distance({0.5, 0.5}, [](double x) { return x; }), 0.5);
  EXPECT_NEAR(dkw_bound(100000, 0.01), 0.0051, 1e-4);
}

TEST(TypeOneError, ExactCriticalIsCalibrated) {
  const auto est = type_one_error({TestStat::WnStar, 30, 0.1, Method::exact}, MCConfig{20000, 4, 4});
  EXPECT_NEAR(est.rate, 0.1, 0.006);
  EXPECT_NEAR(est.se, std::sqrt(est.rate * (1 - est.rate) / 20000), 1e-15);
}

TEST(RunTestMonteCarlo, AgreesWithExact) {
  const auto s = uniform_sample(30, 77);
  const auto mc = run_test({TestStat::WnStar, 30, 0.05, Method::monte_carlo}, s,
                           MCConfig{20000, 1, 4});
  const auto ex = run_test({TestStat::WnStar, 30, 0.05, Method::exact}, s);
  EXPECT_DOUBLE_EQ(mc.statistic, ex.statistic);
  EXPECT_NEAR(mc.critical_value, ex.critical_value, 0.08);
  EXPECT_NEAR(mc.p_value, ex.p_value, 0.015);
  EXPECT_THROW(run_test({TestStat::WnStar, 30, 0.05, Method::exact}, s, MCConfig{}),
               CapabilityError);
}

TEST(PowerCurve, NullMemberAndCommonRandomNumbers) {
  const auto crit = power_criticals(20, 0.05);
  const MCConfig cfg{4000, 31, 4};
  const auto pc = power_curve(20, 0.05, 0.05, {1.0, 8.0}, cfg, crit);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_NEAR(pc.power[t][0], 0.05, 3 * std::sqrt(0.05 * 0.95 / 4000) + 1e-3);
    EXPECT_GT(pc.power[t][1], pc.power[t][0]);
    EXPECT_NEAR(pc.se[t][0], std::sqrt(pc.power[t][0] * (1 - pc.power[t][0]) / 4000), 1e-15);
  }
  // At delta = 1 every test sees exactly the plain uniform sample.
  for (std::size_t r = 0; r < 20; ++r) {
    const auto seed = replicate_seed(cfg.master_seed, r);
    EXPECT_EQ(sample_alt({0.05, 1.0}, 20, seed), uniform_sample(20, seed));
  }
  // Same results for a different worker count.
  const auto again = power_curve(20, 0.05, 0.05, {1.0, 8.0}, MCConfig{4000, 31, 1}, crit);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(again.power[t], pc.power[t]);
  EXPECT_THROW(power_curve(20, 0.05, 0.05, {25.0}, cfg, crit), DomainError);
}
