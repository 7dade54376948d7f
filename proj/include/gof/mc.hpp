#pragma once

// Monte-Carlo engine: null distributions, type-I error and power studies.
// Replicates are split into contiguous blocks across threads; every
// replicate draws from its own seeded stream and writes its own slot, so the
// output does not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "gof/alternatives.hpp"
#include "gof/critical.hpp"
#include "gof/error.hpp"
#include "gof/rng.hpp"
#include "gof/statistics.hpp"

namespace gof {

struct MCConfig {
  std::size_t reps = 10000;
  std::uint64_t master_seed = 20240601;
  unsigned workers = 1;

  void validate() const {
    if (reps < 1) throw DomainError("MCConfig: reps must be >= 1");
  }

  // GOF_WORKERS if set, else the hardware thread count.
  static unsigned default_workers() {
    if (const char* env = std::getenv("GOF_WORKERS"); env != nullptr) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

namespace detail {

template <class Fn>
void for_each_replicate(std::size_t reps, unsigned workers, Fn&& fn) {
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, reps);
  if (threads == 1) {
    for (std::size_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  const std::size_t block = (reps + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * block;
    const std::size_t hi = std::min(reps, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t r = lo; r < hi; ++r) fn(r);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// Sorted values of stat(sample) over cfg.reps uniform samples of size n.
template <class StatFn>
std::vector<double> simulate_null(std::size_t n, const MCConfig& cfg, StatFn&& stat) {
  cfg.validate();
  if (n < 1) throw DomainError("simulate_null: n must be >= 1");
  std::vector<double> out(cfg.reps);
  detail::for_each_replicate(cfg.reps, cfg.workers, [&](std::size_t r) {
    out[r] = stat(uniform_sample(n, replicate_seed(cfg.master_seed, r)));
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Raw (unscaled) statistic values. w is used by TnPlus and Tn only.
inline std::vector<double> simulate_null(StatKind kind, std::size_t n, const MCConfig& cfg,
                                         double w = 0.0) {
  if (kind == StatKind::TnPlus || kind == StatKind::Tn) detail::require_weight(w);
  return simulate_null(n, cfg, [kind, w](const UnitSample& s) {
    switch (kind) {
      case StatKind::Mn: return smirnov_stat(s).value;
      case StatKind::Kn: return ks_stat(s).value;
      case StatKind::Wn: return wn_stat(s).value;
      case StatKind::Vn: return vn_stat(s).value;
      case StatKind::WnStar: return wstar_stat(s).value;
      case StatKind::VnStar: return vstar_stat(s).value;
      case StatKind::Ln: return ln_stat(s).value;
      case StatKind::Un: return un_stat(s).value;
      case StatKind::TnPlus: return tnplus_stat(s, w).value;
      case StatKind::Tn: return tn_stat(s, w).value;
    }
    return 0.0;
  });
}

// Test statistics on the run_test scale.
inline std::vector<double> simulate_null(TestStat stat, std::size_t n, double alpha,
                                         const MCConfig& cfg) {
  return simulate_null(n, cfg, [stat, alpha](const UnitSample& s) {
    return test_statistic(stat, alpha, s).value;
  });
}

struct RateEstimate {
  double rate;
  double se;
};

inline RateEstimate binomial_rate(std::size_t hits, std::size_t reps) {
  const double p = static_cast<double>(hits) / static_cast<double>(reps);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(reps))};
}

// Rejection frequency under the null when the spec's own critical value
// (asymptotic or exact) is used.
inline RateEstimate type_one_error(const TestSpec& spec, const MCConfig& cfg,
                                   const CriticalCache* cache = nullptr) {
  const double crit = critical_value(spec, cache);
  const auto null = simulate_null(spec.stat, spec.n, spec.alpha, cfg);
  const auto first_above = std::upper_bound(null.begin(), null.end(), crit);
  return binomial_rate(static_cast<std::size_t>(null.end() - first_above), cfg.reps);
}

// The Monte-Carlo variant of run_test: the critical value is the empirical
// (1 - alpha) quantile of the simulated null and the p-value the fraction of
// simulated statistics at or above the observed one.
inline TestReport run_test(const TestSpec& spec, const UnitSample& sample, const MCConfig& cfg) {
  spec.validate();
  if (spec.method != Method::monte_carlo) {
    throw CapabilityError("run_test with an MCConfig requires method monte_carlo");
  }
  if (sample.size() != spec.n) {
    throw InputError("run_test: sample size does not match the spec");
  }
  const auto stat = test_statistic(spec.stat, spec.alpha, sample);
  const auto null = simulate_null(spec.stat, spec.n, spec.alpha, cfg);
  const auto m = static_cast<double>(null.size());
  const auto k = static_cast<std::size_t>(std::ceil((1.0 - spec.alpha) * m));
  const double crit = null[std::clamp<std::size_t>(k, 1, null.size()) - 1];
  const auto at_or_above = null.end() - std::lower_bound(null.begin(), null.end(), stat.value);
  return make_report(spec, stat, crit, static_cast<double>(at_or_above) / m);
}

// Exact critical values of the N-, S- and MS-tests at level alpha.
struct PowerCriticals {
  double z;  // sqrt(n) W*_n
  double u;  // sqrt(n) M_n
  double y;  // T+_n(w)
  double w;
};

inline PowerCriticals power_criticals(std::size_t n, double alpha,
                                      const CriticalCache* cache = nullptr) {
  return {critical_value({TestStat::WnStar, n, alpha, Method::exact}, cache),
          critical_value({TestStat::Smirnov, n, alpha, Method::exact}, cache),
          critical_value({TestStat::MSplus, n, alpha, Method::exact}, cache),
          ms_weight(alpha, true).w};
}

struct PowerStatistics {
  double wstar;  // sqrt(n) W*_n
  double smirnov;  // sqrt(n) M_n
  double tnplus;  // T+_n(w)
};

// The three test statistics on one sample.
inline PowerStatistics power_statistics(const UnitSample& s, double w) {
  const double root_n = std::sqrt(static_cast<double>(s.size()));
  return {root_n * wstar_stat(s).value, root_n * smirnov_stat(s).value, tnplus_stat(s, w).value};
}

enum PowerTest : std::size_t { kTestN = 0, kTestS = 1, kTestMS = 2 };

struct PowerCurve {
  std::size_t n = 0;
  double alpha = 0.0;
  double tau_prob = 0.0;
  std::vector<double> delta_grid;
  std::vector<double> power[3];
  std::vector<double> se[3];  // binomial standard errors
};

// Replicate r at every grid point uses the stream replicate_seed(seed, r),
// and all three tests see the same sample.
inline PowerCurve power_curve(std::size_t n, double alpha, double tau_prob,
                              const std::vector<double>& delta_grid, const MCConfig& cfg,
                              const PowerCriticals& crit) {
  cfg.validate();
  if (n < 1) throw DomainError("power_curve: n must be >= 1");
  for (double d : delta_grid) AlternativeSpec{tau_prob, d}.validate();
  PowerCurve pc;
  pc.n = n;
  pc.alpha = alpha;
  pc.tau_prob = tau_prob;
  pc.delta_grid = delta_grid;
  std::vector<unsigned char> hits(cfg.reps * 3);
  for (double d : delta_grid) {
    const AlternativeSpec spec{tau_prob, d};
    detail::for_each_replicate(cfg.reps, cfg.workers, [&](std::size_t r) {
      const auto s = sample_alt(spec, n, replicate_seed(cfg.master_seed, r));
      const auto st = power_statistics(s, crit.w);
      hits[3 * r + kTestN] = st.wstar > crit.z;
      hits[3 * r + kTestS] = st.smirnov > crit.u;
      hits[3 * r + kTestMS] = st.tnplus > crit.y;
    });
    for (std::size_t t = 0; t < 3; ++t) {
      std::size_t count = 0;
      for (std::size_t r = 0; r < cfg.reps; ++r) count += hits[3 * r + t];
      const auto est = binomial_rate(count, cfg.reps);
      pc.power[t].push_back(est.rate);
      pc.se[t].push_back(est.se);
    }
  }
  return pc;
}

// sup_x |F_m(x) - cdf(x)| for the empirical CDF F_m of sorted samples,
// checked on both sides of every jump.
template <class Cdf>
double empirical_cdf_distance(const std::vector<double>& samples, Cdf&& cdf) {
  if (samples.empty()) throw InputError("empirical_cdf_distance: no samples");
  const auto m = static_cast<double>(samples.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j + 1 < samples.size() && samples[j + 1] == samples[i]) ++j;
    const double f = cdf(samples[i]);
    worst = std::max({worst, std::abs(static_cast<double>(j + 1) / m - f),
                      std::abs(f - static_cast<double>(i) / m)});
    i = j + 1;
  }
  return worst;
}

// Half-width of the DKW confidence band at level 1 - gamma.
inline double dkw_bound(std::size_t m, double gamma) {
  if (m < 1 || !(gamma > 0.0 && gamma < 1.0)) throw DomainError("dkw_bound: bad arguments");
  return std::sqrt(std::log(2.0 / gamma) / (2.0 * static_cast<double>(m)));
}

}  // namespace gof
