#pragma once

// Critical values, p-values and the one-shot test driver.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gof/asymptotic.hpp"
#include "gof/distfn.hpp"
#include "gof/error.hpp"
#include "gof/exact.hpp"
#include "gof/numeric.hpp"
#include "gof/statistics.hpp"

namespace gof {

enum class TestStat { WnStar, Smirnov, MSplus, VnStar, KS, WnGumbel, VnGumbel };
enum class Method { exact, asymptotic, monte_carlo };

inline std::string_view to_string(TestStat s) {
  switch (s) {
    case TestStat::WnStar: return "WnStar";
    case TestStat::Smirnov: return "Smirnov";
    case TestStat::MSplus: return "MSplus";
    case TestStat::VnStar: return "VnStar";
    case TestStat::KS: return "KS";
    case TestStat::WnGumbel: return "WnGumbel";
    case TestStat::VnGumbel: return "VnGumbel";
  }
  return "?";
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::asymptotic: return "asymptotic";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "?";
}

inline TestStat parse_test_stat(std::string_view s) {
  for (TestStat t : {TestStat::WnStar, TestStat::Smirnov, TestStat::MSplus, TestStat::VnStar,
                     TestStat::KS, TestStat::WnGumbel, TestStat::VnGumbel}) {
    if (s == to_string(t)) return t;
  }
  throw InputError("unknown statistic '" + std::string(s) +
                   "' (expected WnStar, Smirnov, MSplus, VnStar, KS, WnGumbel or VnGumbel)");
}

inline Method parse_method(std::string_view s) {
  if (s == "exact") return Method::exact;
  if (s == "asymptotic") return Method::asymptotic;
  if (s == "monte_carlo" || s == "mc") return Method::monte_carlo;
  throw InputError("unknown method '" + std::string(s) +
                   "' (expected exact, asymptotic or mc)");
}

// Two-sided statistics use |F_n - t|.
inline bool is_two_sided(TestStat s) {
  return s == TestStat::VnStar || s == TestStat::KS || s == TestStat::VnGumbel;
}

struct TestSpec {
  TestStat stat = TestStat::WnStar;
  std::size_t n = 1;
  double alpha = 0.05;
  Method method = Method::exact;

  void validate() const {
    if (n < 1) throw DomainError("TestSpec: n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("TestSpec: alpha must lie in (0,1)");
  }
};

inline bool exact_supported(TestStat s) {
  return s == TestStat::WnStar || s == TestStat::Smirnov || s == TestStat::MSplus;
}

struct TestReport {
  TestSpec spec;
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::optional<double> argmax_location;
};

struct MsWeight {
  double quantile;
  double w;
};

// One-sided: y = sqrt(-log(1 - p)/2) with p = (1 - alpha)^{1/3}, which makes
// each of the three limit factors equal p. Two-sided: the Kolmogorov
// p-quantile. In both cases w = quantile * (1 - p).
inline MsWeight ms_weight(double alpha, bool one_sided) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ms_weight: alpha must lie in (0,1)");
  const double p = std::cbrt(1.0 - alpha);
  const double tail = -std::expm1(std::log1p(-alpha) / 3.0);  // 1 - p
  double q;
  if (one_sided) {
    q = std::sqrt(-0.5 * std::log(tail));
  } else {
    q = detail::bisect_increasing([](double b) { return kolmogorov_cdf(b); }, p, 1.5, 0.0,
                                  1e-14)
            .x;
  }
  return {q, q * tail};
}

namespace detail {

inline void require_capability(const TestSpec& spec) {
  spec.validate();
  if (spec.method == Method::exact && !exact_supported(spec.stat)) {
    throw CapabilityError("no exact null distribution for " + std::string(to_string(spec.stat)) +
                          "; use method asymptotic or monte_carlo");
  }
  if (spec.method == Method::monte_carlo) {
    throw CapabilityError("monte_carlo specs are handled by the mc module");
  }
}

inline double limit_cdf(TestStat stat, double x, std::size_t n, double alpha) {
  switch (stat) {
    case TestStat::WnStar: return maxwell_cdf(x);
    case TestStat::Smirnov: return smirnov_limit_cdf(x);
    case TestStat::MSplus: {
      const double w = ms_weight(alpha, true).w;
      if (!(x > 0.0)) return 0.0;
      return ms_limit(x / w, x, x / w, true);
    }
    case TestStat::VnStar: return (x > 0.0) ? vstar_limit_cdf(x) : 0.0;
    case TestStat::KS: return kolmogorov_cdf(x);
    case TestStat::WnGumbel: return gumbel_limit_cdf(x, n, false);
    case TestStat::VnGumbel: return gumbel_limit_cdf(x, n, true);
  }
  throw CapabilityError("unknown statistic");
}

inline double exact_test_cdf(TestStat stat, std::size_t n, double alpha, double x) {
  const double root_n = std::sqrt(static_cast<double>(n));
  switch (stat) {
    case TestStat::WnStar: return wstar_cdf(n, x / root_n);
    case TestStat::Smirnov: return smirnov_cdf(n, x / root_n);
    case TestStat::MSplus: return tnplus_cdf(n, x, ms_weight(alpha, true).w);
    default: break;
  }
  throw CapabilityError("no exact null distribution for " + std::string(to_string(stat)));
}

}  // namespace detail

// Null CDF of the test statistic on the scale used by run_test.
inline double null_cdf(const TestSpec& spec, double x) {
  detail::require_capability(spec);
  if (spec.method == Method::exact) return detail::exact_test_cdf(spec.stat, spec.n, spec.alpha, x);
  return detail::limit_cdf(spec.stat, x, spec.n, spec.alpha);
}

// Asymptotic critical value. n is only consulted by the Gumbel statistics.
inline double asymptotic_critical(TestStat stat, double alpha, std::size_t n = 0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  switch (stat) {
    case TestStat::MSplus: return ms_weight(alpha, true).quantile;
    case TestStat::WnGumbel: return gumbel_critical(alpha, n, false);
    case TestStat::VnGumbel: return gumbel_critical(alpha, n, true);
    default: break;
  }
  const auto cdf = [&](double x) { return detail::limit_cdf(stat, x, n, alpha); };
  const double guess = (stat == TestStat::Smirnov || stat == TestStat::KS) ? 1.2 : 2.5;
  const auto root = detail::bisect_increasing(cdf, 1.0 - alpha, guess, 0.0, 1e-12);
  if (!(std::abs(root.residual) < 1e-9)) {
    throw ConvergenceError("asymptotic_critical: bisection stalled");
  }
  return root.x;
}

inline double asymptotic_critical(const TestSpec& spec) {
  spec.validate();
  if (spec.method != Method::asymptotic) {
    throw CapabilityError("asymptotic_critical requires method asymptotic");
  }
  return asymptotic_critical(spec.stat, spec.alpha, spec.n);
}

struct CriticalValue {
  double value;
  double residual;  // CDF(value) - (1 - alpha)
};

inline CriticalValue exact_critical_value(const TestSpec& spec) {
  spec.validate();
  if (spec.method != Method::exact) throw CapabilityError("exact_critical requires method exact");
  detail::require_capability(spec);
  const auto cdf = [&](double x) {
    return detail::exact_test_cdf(spec.stat, spec.n, spec.alpha, x);
  };
  // The limit quantile is a good starting point; the Gumbel-free kinds all
  // have finite limits.
  const double guess = asymptotic_critical(spec.stat, spec.alpha);
  const auto root = detail::bisect_increasing(cdf, 1.0 - spec.alpha, guess, 0.0, 1e-10,
                                              0.02 * guess);
  if (!(std::abs(root.residual) < 1e-7)) {
    std::ostringstream msg;
    msg << "exact_critical: bisection residual " << root.residual << " for "
        << to_string(spec.stat) << " n=" << spec.n;
    throw ConvergenceError(msg.str());
  }
  return {root.x, root.residual};
}

inline double exact_critical(const TestSpec& spec) { return exact_critical_value(spec).value; }

inline double p_value(const TestSpec& spec, double observed) {
  if (!std::isfinite(observed)) {
    if (observed > 0.0) return 0.0;
    throw DomainError("p_value: observed statistic must be finite");
  }
  return std::clamp(1.0 - null_cdf(spec, observed), 0.0, 1.0);
}

// Append-only CSV table of computed critical values.
class CriticalCache {
 public:
  struct Entry {
    std::string stat;
    std::size_t n = 0;
    double alpha = 0.0;
    double value = 0.0;
    std::string method;
    double tolerance = 0.0;
  };

  static constexpr std::string_view kHeader = "stat,n,alpha,value,method,tolerance";

  explicit CriticalCache(std::string path) : path_(std::move(path)) {}

  static std::string default_path() {
    if (const char* env = std::getenv("GOF_CACHE"); env != nullptr && *env != '\0') return env;
    return "./.gof_cache.csv";
  }

  const std::string& path() const { return path_; }

  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    const int fd = ::open(path_.c_str(), O_RDONLY);
    if (fd < 0) return out;
    ::flock(fd, LOCK_SH);
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (auto e = parse_line(line)) out.push_back(*e);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    return out;
  }

  std::optional<double> lookup(TestStat stat, std::size_t n, double alpha, Method method) const {
    std::optional<double> found;
    for (const auto& e : entries()) {
      if (e.stat == to_string(stat) && e.n == n && e.method == to_string(method) &&
          std::abs(e.alpha - alpha) <= 1e-12) {
        found = e.value;
      }
    }
    return found;
  }

  void store(TestStat stat, std::size_t n, double alpha, Method method, double value,
             double tolerance) const {
    const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw InputError("cannot open cache file " + path_);
    ::flock(fd, LOCK_EX);
    std::string text;
    if (::lseek(fd, 0, SEEK_END) == 0) {
      text += kHeader;
      text += '\n';
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g,%s,%.3g\n",
                  std::string(to_string(stat)).c_str(), n, alpha, value,
                  std::string(to_string(method)).c_str(), tolerance);
    text += buf;
    const ssize_t written = ::write(fd, text.data(), text.size());
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (written != static_cast<ssize_t>(text.size())) {
      throw InputError("short write to cache file " + path_);
    }
  }

 private:
  static std::optional<Entry> parse_line(std::string_view line) {
    const auto fields = detail::split(detail::trim(line), ',');
    if (fields.size() != 6) return std::nullopt;
    const auto n = detail::parse_double(fields[1]);
    const auto alpha = detail::parse_double(fields[2]);
    const auto value = detail::parse_double(fields[3]);
    const auto tol = detail::parse_double(fields[5]);
    if (!n || !alpha || !value || !tol || *n < 1) return std::nullopt;
    return Entry{std::string(detail::trim(fields[0])), static_cast<std::size_t>(*n), *alpha,
                 *value, std::string(detail::trim(fields[4])), *tol};
  }

  std::string path_;
};

// Critical value for an exact or asymptotic spec. Exact values are looked up
// in the cache first and stored there after computing.
inline double critical_value(const TestSpec& spec, const CriticalCache* cache = nullptr) {
  detail::require_capability(spec);
  if (spec.method == Method::asymptotic) return asymptotic_critical(spec);
  if (cache != nullptr) {
    if (auto hit = cache->lookup(spec.stat, spec.n, spec.alpha, spec.method)) return *hit;
  }
  const auto cv = exact_critical_value(spec);
  if (cache != nullptr) {
    cache->store(spec.stat, spec.n, spec.alpha, spec.method, cv.value, std::abs(cv.residual));
  }
  return cv.value;
}

// The test statistic on the scale its null CDF uses: sqrt(n) times the raw
// statistic, except T+_n(w_alpha) which is used as is.
inline StatisticValue test_statistic(TestStat stat, double alpha, const UnitSample& s) {
  const double root_n = std::sqrt(static_cast<double>(s.size()));
  StatisticValue v;
  switch (stat) {
    case TestStat::WnStar: v = wstar_stat(s); break;
    case TestStat::Smirnov: v = smirnov_stat(s); break;
    case TestStat::VnStar: v = vstar_stat(s); break;
    case TestStat::KS: v = ks_stat(s); break;
    case TestStat::WnGumbel: v = wn_stat(s); break;
    case TestStat::VnGumbel: v = vn_stat(s); break;
    case TestStat::MSplus: return tnplus_stat(s, ms_weight(alpha, true).w);
  }
  v.value *= root_n;
  return v;
}

inline TestReport make_report(const TestSpec& spec, const StatisticValue& stat, double critical,
                              double p) {
  TestReport r;
  r.spec = spec;
  r.statistic = stat.value;
  r.critical_value = critical;
  r.p_value = p;
  r.reject = stat.value > critical;
  r.argmax_location = stat.argmax_u;
  return r;
}

inline TestReport run_test(const TestSpec& spec, const UnitSample& sample,
                           const CriticalCache* cache = nullptr) {
  detail::require_capability(spec);
  if (sample.size() != spec.n) {
    std::ostringstream msg;
    msg << "run_test: sample has n=" << sample.size() << " but the spec says n=" << spec.n;
    throw InputError(msg.str());
  }
  const auto stat = test_statistic(spec.stat, spec.alpha, sample);
  const double crit = critical_value(spec, cache);
  return make_report(spec, stat, crit, p_value(spec, stat.value));
}

}  // namespace gof
