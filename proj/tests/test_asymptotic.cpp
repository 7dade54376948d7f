#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "gof/asymptotic.hpp"

using namespace gof;

TEST(Maxwell, ChiThreeIdentity) {
  // H(x) = P(chi^2_3 <= x^2) = P(3/2, x^2/2).
  for (double x = 0.0; x <= 8.0; x += 0.01) {
    EXPECT_NEAR(maxwell_cdf(x), boost::math::gamma_p(1.5, 0.5 * x * x), 1e-10) << x;
  }
  EXPECT_EQ(maxwell_cdf(-1.0), 0.0);
  EXPECT_EQ(maxwell_cdf(std::numeric_limits<double>::infinity()), 1.0);
}

TEST(Maxwell, DensityIsDerivative) {
  for (double x : {0.3, 1.0, 2.2, 3.5}) {
    const double h = 1e-5;
    EXPECT_NEAR((maxwell_cdf(x + h) - maxwell_cdf(x - h)) / (2 * h), maxwell_pdf(x), 1e-8);
  }
}

TEST(SmirnovLimit, ClosedForm) {
  EXPECT_EQ(smirnov_limit_cdf(0.0), 0.0);
  EXPECT_NEAR(smirnov_limit_cdf(1.0), 1 - std::exp(-2.0), 1e-15);
  EXPECT_NEAR(smirnov_limit_cdf(std::sqrt(std::log(20.0) / 2)), 0.95, 1e-15);
}

TEST(Kolmogorov, KnownQuantilesAndBranchAgreement) {
  EXPECT_NEAR(kolmogorov_cdf(1.3580986393225505), 0.95, 1e-10);
  EXPECT_NEAR(kolmogorov_cdf(1.6276236115189480), 0.99, 1e-10);
  // Both series evaluated on either side of the switch.
  const double b = 1.0;
  double alt = 0.0;
  for (int k = 1; k < 50; ++k) alt += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * b * b);
  EXPECT_NEAR(kolmogorov_cdf(b), 1 - 2 * alt, 1e-14);
  const double pi2 = M_PI * M_PI;
  const double b2 = 0.999999;
  double theta = 0.0;
  for (int k = 1; k < 20; ++k) theta += std::exp(-(2.0 * k - 1) * (2.0 * k - 1) * pi2 / (8 * b2 * b2));
  EXPECT_NEAR(kolmogorov_cdf(b2), std::sqrt(2 * M_PI) / b2 * theta, 1e-14);
  EXPECT_EQ(kolmogorov_cdf(0.0), 0.0);
}

TEST(VStarLimit, ShapeAndConvergence) {
  double prev = 0.0;
  for (double x = 0.0; x <= 6.0; x += 0.05) {
    const double g = vstar_limit_cdf(x);
    EXPECT_GE(g, prev - 1e-12);
    EXPECT_LE(g, 1.0);
    prev = g;
  }
  EXPECT_NEAR(vstar_limit_cdf(6.0), 1.0, 1e-6);
  EXPECT_EQ(vstar_limit_cdf(0.0), 0.0);
  EXPECT_THROW(vstar_limit_cdf(-0.1), DomainError);
  // Tightening the tolerance does not move the value beyond the tolerance.
  for (double x : {0.6, 1.2, 2.0, 3.0}) {
    const double coarse = vstar_limit_cdf(x, {1e-10, 400});
    const double fine = vstar_limit_cdf(x, {5e-11, 400});
    EXPECT_NEAR(coarse, fine, 1e-10);
  }
}

TEST(VStarLimit, DominatedByKolmogorovAtHalfArgument) {
  // V* >= 2 sup|B| in the limit, so G(x) <= K(x/2).
  for (double x = 0.3; x < 5.0; x += 0.1) {
    EXPECT_LE(vstar_limit_cdf(x), kolmogorov_cdf(x / 2) + 1e-12);
  }
}

TEST(VStarLimit, ReportsNonConvergence) {
  EXPECT_THROW(vstar_limit_cdf(0.3, {1e-12, 3}), ConvergenceError);
  EXPECT_THROW(vstar_limit_cdf(1.0, {0.0, 10}), DomainError);
}

TEST(Gumbel, CriticalValues) {
  // a_n = sqrt(2 log log n), b_n = 2 log log n + log log log n / 2 - log(pi) / 2.
  const double ll = std::log(std::log(30.0));
  const double a = std::sqrt(2 * ll);
  const double b = 2 * ll + 0.5 * std::log(ll) - 0.5 * std::log(M_PI);
  EXPECT_NEAR(gumbel_critical(0.1, 30, false), (-std::log(-std::log(0.9)) + b) / a, 1e-14);
  EXPECT_NEAR(gumbel_critical(0.1, 30, false), 2.7017, 1e-3);
  EXPECT_NEAR(gumbel_critical(0.05, 1000, true),
              (-std::log(-std::log(0.95) / 2) + 2 * std::log(std::log(1000.0)) +
               0.5 * std::log(std::log(std::log(1000.0))) - 0.5 * std::log(M_PI)) /
                  std::sqrt(2 * std::log(std::log(1000.0))),
              1e-14);
  EXPECT_THROW(gumbel_critical(0.1, 15, false), DomainError);
  EXPECT_THROW(gumbel_critical(0.0, 30, false), DomainError);
  EXPECT_NEAR(gumbel_limit_cdf(gumbel_critical(0.1, 30, false), 30, false), 0.9, 1e-14);
  EXPECT_NEAR(gumbel_limit_cdf(gumbel_critical(0.1, 30, true), 30, true), 0.9, 1e-14);
}

TEST(MsLimit, ProductForm) {
  EXPECT_NEAR(ms_limit(2.0, 1.0, 4.0, true), 0.5 * (1 - std::exp(-2.0)) * 0.75, 1e-15);
  EXPECT_NEAR(ms_limit(2.0, 1.0, 4.0, false), 0.5 * kolmogorov_cdf(1.0) * 0.75, 1e-15);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(ms_limit(inf, inf, inf, true), 1.0);
  EXPECT_EQ(ms_limit(1.0, 2.0, 3.0, true), 0.0);
}
