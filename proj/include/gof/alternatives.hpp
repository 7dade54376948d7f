#pragma once

// Polygonal alternatives F_{tau,delta} on the PIT scale: slope delta on
// [0, tau], slope beta on (tau, 1], with delta tau + beta (1 - tau) = 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gof/distfn.hpp"
#include "gof/error.hpp"
#include "gof/rng.hpp"

namespace gof {

struct AlternativeSpec {
  double tau_prob = 0.05;
  double delta = 1.0;

  void validate() const {
    if (!(tau_prob > 0.0 && tau_prob < 1.0)) {
      throw DomainError("AlternativeSpec: tau_prob must lie in (0,1)");
    }
    if (!(delta >= 1.0)) throw DomainError("AlternativeSpec: delta must be >= 1");
    if (!(delta * tau_prob < 1.0)) {
      throw DomainError("AlternativeSpec: delta * tau_prob must be < 1");
    }
  }
};

inline double beta_coeff(const AlternativeSpec& spec) {
  spec.validate();
  return (1.0 - spec.delta * spec.tau_prob) / (1.0 - spec.tau_prob);
}

inline double alt_cdf(const AlternativeSpec& spec, double t) {
  const double beta = beta_coeff(spec);
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("alt_cdf: t must lie in [0,1]");
  const double tau = spec.tau_prob;
  if (t <= tau) return spec.delta * t;
  if (t == 1.0) return 1.0;
  return beta * (t - tau) + spec.delta * tau;
}

inline double alt_quantile(const AlternativeSpec& spec, double p) {
  const double beta = beta_coeff(spec);
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("alt_quantile: p must lie in [0,1]");
  if (spec.delta == 1.0) return p;
  const double knee = spec.delta * spec.tau_prob;
  if (p <= knee) return p / spec.delta;
  if (p == 1.0) return 1.0;
  return std::min(1.0, spec.tau_prob + (p - knee) / beta);
}

struct AltSummaries {
  double M;  // max_t D(t), attained at tau
  double S;  // sup_t D(t)/sqrt(t(1-t))
};

inline AltSummaries analytic_summaries(const AlternativeSpec& spec) {
  const double beta = beta_coeff(spec);
  const double v = spec.tau_prob * (1.0 - spec.tau_prob);
  return {(spec.delta - beta) * v, (spec.delta - beta) * std::sqrt(v)};
}

// D(t) = F(t) - t.
inline double alt_deviation(const AlternativeSpec& spec, double t) { return alt_cdf(spec, t) - t; }

// Q(t) = D(t)/sqrt(t(1-t)); zero at the endpoints.
inline double alt_standardized(const AlternativeSpec& spec, double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return alt_deviation(spec, t) / std::sqrt(t * (1.0 - t));
}

// Q*(t) = D(t)/sqrt(tau(1-tau)).
inline double alt_argmax_standardized(const AlternativeSpec& spec, double t) {
  return alt_deviation(spec, t) / std::sqrt(spec.tau_prob * (1.0 - spec.tau_prob));
}

// n draws from F_{tau,delta}, sorted. Uses the same uniforms as
// uniform_sample(n, seed), so delta = 1 reproduces it exactly.
inline UnitSample sample_alt(const AlternativeSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw DomainError("sample_alt: n must be >= 1");
  ReplicateRng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = alt_quantile(spec, rng.uniform01());
  std::sort(v.begin(), v.end());
  return UnitSample::from_sorted(std::move(v));
}

}  // namespace gof
