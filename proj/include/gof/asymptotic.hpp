#pragma once

// Limit laws of the scaled statistics under the null.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gof/error.hpp"
#include "gof/exact.hpp"
#include "gof/normal.hpp"

namespace gof {

struct SeriesControl {
  double abs_tol = 1e-12;
  int max_terms = 200;

  void validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("SeriesControl: abs_tol must be positive");
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  }
};

// Maxwell-Boltzmann law, the limit of sqrt(n) W*_n:
// H(x) = 2 Phi(x) - sqrt(2/pi) x exp(-x^2/2) - 1 for x >= 0.
inline double maxwell_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double density_part =
      std::sqrt(2.0 / std::numbers::pi) * x * std::exp(-0.5 * x * x);
  double h;
  if (x < 1.0) {
    h = std::erf(x / std::numbers::sqrt2) - density_part;
  } else {
    h = 1.0 - (std::erfc(x / std::numbers::sqrt2) + density_part);
  }
  return std::clamp(h, 0.0, 1.0);
}

inline double maxwell_pdf(double x) {
  if (!(x > 0.0)) return 0.0;
  return std::sqrt(2.0 / std::numbers::pi) * x * x * std::exp(-0.5 * x * x);
}

// 1 - exp(-2 b^2), the limit of sqrt(n) M_n.
inline double smirnov_limit_cdf(double b) {
  if (!(b > 0.0)) return 0.0;
  return -std::expm1(-2.0 * b * b);
}

// Kolmogorov's law of sup|B|. The alternating series
// 1 - 2 sum (-1)^{k-1} exp(-2 k^2 b^2) is used for b >= 1; below that the
// theta-transformed form sqrt(2 pi)/b sum exp(-(2k-1)^2 pi^2 / (8 b^2))
// converges in a handful of terms.
inline double kolmogorov_cdf(double b, const SeriesControl& ctrl = {}) {
  ctrl.validate();
  if (!(b > 0.0)) return 0.0;
  if (std::isinf(b)) return 1.0;
  double total = 0.0;
  if (b >= 1.0) {
    for (int k = 1; k <= ctrl.max_terms; ++k) {
      const double kd = static_cast<double>(k);
      const double term = std::exp(-2.0 * kd * kd * b * b);
      total += (k % 2 == 1) ? term : -term;
      if (term < ctrl.abs_tol) return std::clamp(1.0 - 2.0 * total, 0.0, 1.0);
    }
  } else {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double scale = std::sqrt(2.0 * std::numbers::pi) / b;
    for (int k = 1; k <= ctrl.max_terms; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = scale * std::exp(-odd * odd * pi2 / (8.0 * b * b));
      total += term;
      if (term < ctrl.abs_tol) return std::clamp(total, 0.0, 1.0);
    }
  }
  std::ostringstream msg;
  msg << "kolmogorov_cdf: series did not converge at b=" << b << " within "
      << ctrl.max_terms << " terms";
  throw ConvergenceError(msg.str());
}

// Limit law G of sqrt(n) V*_n, written with alpha_j = 2j + 1 as
//
//   16 sum_{j<l} (-1)^{j+l} a_j a_l/(a_l^2 - a_j^2) [g_j - g_l]
//     + 4 sum_j [g_j - x phi(a_j x)],       g_j = (Phi(a_j x) - 1/2)/a_j.
//
// Taken term by term this converges only conditionally (g_j tends to
// 1/(2 a_j)). Splitting g_j = 1/(2 a_j) - t_j with t_j = (1 - Phi(a_j x))/a_j,
// the x-free parts add up to exactly 1 and what remains is
//
//   G(x) = 1 - 16 sum_j t_j (A_j - B_j) - 4 sum_j [t_j + x phi(a_j x)],
//
//   A_j = sum_{l>j} (-1)^{j+l} a_j a_l/(a_l^2 - a_j^2)
//       = (a_j/4) (-ln 2 - T_{2j+2}),   T_N = sum_{p>=N} (-1)^p / p,
//   B_j = sum_{i<j} (-1)^{i+j} a_i a_j/(a_j^2 - a_i^2),
//
// which converges like a Gaussian tail in a_j x.
inline double vstar_limit_cdf(double x, const SeriesControl& ctrl = {}) {
  ctrl.validate();
  if (std::isnan(x) || x < 0.0) throw DomainError("vstar_limit_cdf: x must be >= 0");
  if (std::isinf(x)) return 1.0;
  // V* >= 2 K_n, so G(x) <= kolmogorov_cdf(x/2) < 1e-30 on this range.
  if (x < 0.25) return 0.0;

  double t_tail = 1.0 - std::numbers::ln2;  // T_2
  double sum_weighted = 0.0;
  double sum_plain = 0.0;
  for (int j = 0; j < ctrl.max_terms; ++j) {
    const double aj = 2.0 * j + 1.0;
    const double big_n = 2.0 * j + 2.0;  // T_N with N = 2j + 2
    const double a_coef = aj / 4.0 * (-std::numbers::ln2 - t_tail);
    double b_coef = 0.0;
    for (int i = 0; i < j; ++i) {
      const double ai = 2.0 * i + 1.0;
      const double term = ai * aj / (aj * aj - ai * ai);
      b_coef += ((i + j) % 2 == 0) ? term : -term;
    }
    const double t = normal_sf(aj * x) / aj;
    const double weighted = 16.0 * t * (a_coef - b_coef);
    const double plain = 4.0 * (t + x * normal_pdf(aj * x));
    sum_weighted += weighted;
    sum_plain += plain;
    if (std::abs(weighted) + std::abs(plain) < ctrl.abs_tol && aj * x > 1.0) {
      return std::clamp(1.0 - sum_weighted - sum_plain, 0.0, 1.0);
    }
    t_tail += -1.0 / big_n + 1.0 / (big_n + 1.0);  // T_{N+2}
  }
  std::ostringstream msg;
  msg << "vstar_limit_cdf: series did not converge at x=" << x << " within "
      << ctrl.max_terms << " terms";
  throw ConvergenceError(msg.str());
}

namespace detail {

struct GumbelNorming {
  double a_n;
  double b_n;
};

// a_n = sqrt(2 log log n), b_n = 2 log log n + (1/2) log log log n - (1/2) log pi.
inline GumbelNorming gumbel_norming(std::size_t n) {
  if (n < 16) throw DomainError("Gumbel norming constants require n >= 16");
  const double ll = std::log(std::log(static_cast<double>(n)));
  return {std::sqrt(2.0 * ll),
          2.0 * ll + 0.5 * std::log(ll) - 0.5 * std::log(std::numbers::pi)};
}

}  // namespace detail

// c_{alpha,n} = (q + b_n)/a_n with q = -log(-log(1 - alpha)) for the one-sided
// e^{-e^{-x}} limit and q = -log(-log(1 - alpha)/2) for the two-sided
// e^{-2e^{-x}} limit.
inline double gumbel_critical(double alpha, std::size_t n, bool two_sided) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("gumbel_critical: alpha in (0,1)");
  const auto [a_n, b_n] = detail::gumbel_norming(n);
  const double log_level = std::log1p(-alpha);
  const double q = two_sided ? -std::log(-log_level / 2.0) : -std::log(-log_level);
  return (q + b_n) / a_n;
}

// Gumbel approximation of P(sqrt(n) W_n <= x), or of P(sqrt(n) V_n <= x) when
// two_sided.
inline double gumbel_limit_cdf(double x, std::size_t n, bool two_sided) {
  const auto [a_n, b_n] = detail::gumbel_norming(n);
  const double e = std::exp(-(a_n * x - b_n));
  return std::exp(-(two_sided ? 2.0 : 1.0) * e);
}

// Joint limit P(L_n <= a, sqrt(n) D_n <= b, U_n <= c) for D_n = K_n (two-sided)
// or M_n (one-sided): the three components are asymptotically independent.
inline double ms_limit(double a, double b, double c, bool one_sided,
                       const SeriesControl& ctrl = {}) {
  const double middle = one_sided ? smirnov_limit_cdf(b) : kolmogorov_cdf(b, ctrl);
  return daniels_ln_cdf(a) * middle * daniels_ln_cdf(c);
}

}  // namespace gof
