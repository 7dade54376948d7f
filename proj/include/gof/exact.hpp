#pragma once

// Exact finite-sample null distributions.
//
//   smirnov_cdf   P(M_n <= x), Smirnov's closed form
//   wstar_cdf     P(W*_n <= x) via the joint law of (U_{R:n}, R)
//   tnplus_cdf    P(T+_n(w) <= y) as a rectangle probability for uniform
//                 order statistics, evaluated with Steck's determinant
//   daniels_ln_cdf  P(L_n <= x) = 1 - 1/x, the same for every n

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "gof/bigfloat.hpp"
#include "gof/error.hpp"
#include "gof/hessenberg.hpp"
#include "gof/numeric.hpp"

namespace gof {

namespace detail {
inline void require_n(std::size_t n, const char* who) {
  if (n == 0) throw DomainError(std::string(who) + ": n must be positive");
}
}  // namespace detail

// P(M_n <= x) = 1 - sum_{i=0}^{floor(n(1-x))} x C(n,i) (x+i/n)^{i-1} (1-x-i/n)^{n-i}
// for 0 < x < 1. Every summand is positive, so the sum is taken in log space.
inline double smirnov_cdf(std::size_t n, double x) {
  detail::require_n(n, "smirnov_cdf");
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  const auto lf = detail::log_factorials(n);
  const double nd = static_cast<double>(n);
  const auto imax = static_cast<std::size_t>(std::floor(nd * (1.0 - x)));
  const double log_x = std::log(x);
  detail::CompensatedSum tail;
  for (std::size_t i = 0; i <= std::min(imax, n - 1); ++i) {
    const double frac = static_cast<double>(i) / nd;
    const double rest = 1.0 - x - frac;
    if (!(rest > 0.0)) break;
    const double log_term = log_x + detail::log_binomial(lf, n, i) +
                            (static_cast<double>(i) - 1.0) * std::log(x + frac) +
                            static_cast<double>(n - i) * std::log(rest);
    tail.add(std::exp(log_term));
  }
  return std::clamp(1.0 - tail.value(), 0.0, 1.0);
}

// The point s in (0, c) where (c - s)/sqrt(s(1-s)) = x, i.e. the smaller
// root of (1+x^2)s^2 - (2c+x^2)s + c^2. Written as c^2 / (larger root) to
// avoid cancellation for large x.
inline double threshold_s(double c, double x) {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("threshold_s: c must lie in (0,1]");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("threshold_s: x must be >= 0");
  const double x2 = x * x;
  return 2.0 * c * c / (2.0 * c + x2 + x * std::sqrt(4.0 * c * (1.0 - c) + x2));
}

namespace detail {

// Evaluates q_n[z,k] = P(U_{R:n} <= z, R = k) for a fixed n, sharing the
// log tables across calls.
class JointArgmaxLaw {
 public:
  explicit JointArgmaxLaw(std::size_t n)
      : n_(n), nd_(static_cast<double>(n)), lf_(log_factorials(n)), log_int_(n + 2, 0.0) {
    for (std::size_t i = 1; i < log_int_.size(); ++i) {
      log_int_[i] = std::log(static_cast<double>(i));
    }
    n_log_n_ = nd_ * std::log(nd_);
  }

  std::size_t n() const { return n_; }

  double operator()(double z, std::size_t k) const {
    const double kd = static_cast<double>(k);
    // m = min(nz, k); capped means z >= k/n and m is exactly the integer k.
    const bool capped = nd_ * z >= kd;
    const double zz = capped ? kd / nd_ : z;
    if (!(zz > 0.0)) return 0.0;
    const double m = capped ? kd : nd_ * z;

    double first = 0.0;
    if (zz < 1.0) {
      first = std::exp(log_binomial(lf_, n_ - 1, k - 1) + kd * std::log(zz) +
                       static_cast<double>(n_ - k) * std::log1p(-zz));
    } else {
      first = 1.0;  // z >= k/n = 1 can only happen for k = n
    }

    const std::size_t i_end =
        capped ? k : std::min(k, static_cast<std::size_t>(std::floor(nd_ * z)));
    const double n_minus_m = nd_ - m;
    const double log_n_minus_m = std::log(n_minus_m);
    CompensatedSum total;
    for (std::size_t i = 0; i < i_end; ++i) {
      const double d = m - static_cast<double>(i) - 1.0;  // base of (m-i-1)^{j-i}
      if (!(d > 0.0)) continue;  // exponent j-i >= 1, so the whole row vanishes
      const double log_d = std::log(d);
      const double id = static_cast<double>(i);
      std::size_t j = k;
      if (capped) ++j;  // factor (j - m) is zero at j = k = m
      if (j > n_) continue;

      const auto row_log = [&](std::size_t jj) {
        const double jd = static_cast<double>(jj);
        return lf_[n_] - lf_[n_ - jj] - lf_[i] - lf_[jj - i] +
               (static_cast<double>(n_) - jd - 1.0) * log_n_minus_m +
               (jd - id) * log_d + std::log(jd - m) + (id - 1.0) * log_int_[i + 1] -
               n_log_n_;
      };

      // Walk j with the ratio of consecutive terms; `scale` holds the log of
      // the factor that `term` and `row` are expressed in.
      double scale = row_log(j);
      double term = 1.0;
      double row = 0.0;
      for (; j <= n_; ++j) {
        row += term;
        if (j == n_) break;
        const double jd = static_cast<double>(j);
        const double ratio = (static_cast<double>(n_) - jd) / (jd + 1.0 - id) *
                             (d / n_minus_m) * ((jd + 1.0 - m) / (jd - m));
        term *= ratio;
        // Terms decrease once ratio < 1 (ratio falls with j), so the
        // remaining mass is at most (n - j) * term.
        if (ratio < 1.0 && term * (static_cast<double>(n_) - jd) < 1e-18 * row) break;
        if (term > 1e250) {
          const double t = term;
          scale += std::log(t);
          row /= t;
          term = 1.0;
        }
      }
      if (row > 0.0) total.add(std::exp(scale + std::log(row)));
    }
    return std::clamp(first - total.value(), 0.0, 1.0);
  }

 private:
  std::size_t n_;
  double nd_;
  std::vector<double> lf_;
  std::vector<double> log_int_;
  double n_log_n_ = 0.0;
};

}  // namespace detail

// q_n[z,k] = P(U_{R:n} <= z, R = k) for z in [0,1), k in 1..n.
inline double qnk(std::size_t n, double z, std::size_t k) {
  detail::require_n(n, "qnk");
  if (k < 1 || k > n) throw DomainError("qnk: k must lie in 1..n");
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("qnk: z must lie in [0,1)");
  return detail::JointArgmaxLaw(n)(z, k);
}

namespace detail {

inline double wstar_cdf_uncached(std::size_t n, double x) {
  const JointArgmaxLaw law(n);
  const double nd = static_cast<double>(n);
  CompensatedSum below;
  for (std::size_t k = 1; k <= n; ++k) {
    below.add(law(threshold_s(static_cast<double>(k) / nd, x), k));
  }
  return std::clamp(1.0 - below.value(), 0.0, 1.0);
}

class WStarMemo {
 public:
  static WStarMemo& instance() {
    static WStarMemo memo;
    return memo;
  }

  double get(std::size_t n, double x) {
    const Key key{n, std::bit_cast<std::uint64_t>(x)};
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    const double v = wstar_cdf_uncached(n, x);
    std::unique_lock lock(mutex_);
    table_.emplace(key, v);
    return v;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    table_.clear();
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
  }

 private:
  struct Key {
    std::size_t n;
    std::uint64_t bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>{}(k.bits * 0x9E3779B97F4A7C15ULL ^ k.n);
    }
  };
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, double, KeyHash> table_;
};

}  // namespace detail

// P(W*_n <= x) = 1 - sum_k q_n[s(k/n, x), k] for x > 0, and 0 for x <= 0.
// O(n^3) per evaluation; results are memoized per (n, x).
inline double wstar_cdf(std::size_t n, double x) {
  detail::require_n(n, "wstar_cdf");
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return detail::WStarMemo::instance().get(n, x);
}

inline void clear_wstar_memo() { detail::WStarMemo::instance().clear(); }

// Bounds a_i <= U_{i:n} <= b_i of a rectangle event.
struct RectangleBounds {
  std::vector<double> a;
  std::vector<double> b;
};

namespace detail {

// The alternating recursion loses roughly 0.3 n decimal digits to
// cancellation; 1.5 bits per order statistic on top of 96 guard bits keeps
// double-precision output exact through n = 1000 with margin.
inline mpfr_prec_t steck_precision_bits(std::size_t n) {
  return static_cast<mpfr_prec_t>(96 + 3 * n / 2);
}

}  // namespace detail

// P(a_i <= U_{i:n} <= b_i for all i) = n! det[(b_i - a_j)_+^{j-i+1} / (j-i+1)!],
// the factorial-rescaled form of Steck's matrix with entries
// C(j, j-i+1)(b_i - a_j)_+^{j-i+1}. Subdiagonal entries (exponent 0) are 1.
// Bounds are clipped to [0,1] and must then be nondecreasing.
inline double steck_rectangle(const RectangleBounds& bounds, mpfr_prec_t bits = 0) {
  const std::size_t n = bounds.a.size();
  if (n == 0 || bounds.b.size() != n) {
    throw InputError("steck_rectangle: a and b must have the same positive length");
  }
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(bounds.a[i]) || std::isnan(bounds.b[i])) {
      throw InputError("steck_rectangle: NaN bound");
    }
    a[i] = std::clamp(bounds.a[i], 0.0, 1.0);
    b[i] = std::clamp(bounds.b[i], 0.0, 1.0);
    if (i > 0 && (a[i] < a[i - 1] || b[i] < b[i - 1])) {
      throw InputError("steck_rectangle: clipped bounds must be nondecreasing");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] > b[i]) return 0.0;
  }

  using detail::BigFloat;
  detail::ScopedPrecision guard(bits > 0 ? bits : detail::steck_precision_bits(n));
  std::vector<BigFloat> inv_factorial;
  inv_factorial.reserve(n + 2);
  inv_factorial.emplace_back(1);
  for (std::size_t e = 1; e <= n + 1; ++e) {
    BigFloat f = inv_factorial.back();
    f.div_ui(e);
    inv_factorial.push_back(std::move(f));
  }
  const BigFloat zero(0);
  const BigFloat one(1);

  auto entry = [&](std::size_t i, std::size_t j) -> BigFloat {
    if (j + 1 == i) return one;
    const double diff = b[i - 1] - a[j - 1];
    if (!(diff > 0.0)) return zero;
    // b - a in extended precision; both endpoints are exact doubles.
    BigFloat d(b[i - 1]);
    d -= BigFloat(a[j - 1]);
    d.pow_ui(j - i + 1);
    d *= inv_factorial[j - i + 1];
    return d;
  };
  BigFloat det = hessenberg_det_by_entry<BigFloat>(n, entry);
  for (std::size_t k = 2; k <= n; ++k) det.mul_ui(k);
  return std::clamp(det.to_double(), 0.0, 1.0);
}

// P(T+_n(w) <= y) = P(a_i <= U_{i:n} <= b_i) with
// a_i = max{(w/y)(i/n), i/n - y/sqrt(n)} and b_i = 1 - (w/y)(1 - i/n).
inline RectangleBounds tnplus_bounds(std::size_t n, double y, double w) {
  const double nd = static_cast<double>(n);
  const double ratio = w / y;
  const double shift = y / std::sqrt(nd);
  RectangleBounds bounds{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / nd;
    bounds.a[i - 1] = std::clamp(std::max(ratio * t, t - shift), 0.0, 1.0);
    bounds.b[i - 1] = std::clamp(1.0 - ratio * (1.0 - t), 0.0, 1.0);
  }
  return bounds;
}

inline double tnplus_cdf(std::size_t n, double y, double w) {
  detail::require_n(n, "tnplus_cdf");
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("tnplus_cdf: w must be positive");
  if (!(y > 0.0)) return 0.0;
  if (std::isinf(y)) return 1.0;
  return steck_rectangle(tnplus_bounds(n, y, w));
}

// P(L_n <= x) = 1 - 1/x for x >= 1, for every n.
inline double daniels_ln_cdf(double x) {
  if (!(x >= 1.0)) return 0.0;
  return 1.0 - 1.0 / x;
}

enum class ExactKind { Smirnov, WnStar, TnPlus };

struct ExactCDFRequest {
  ExactKind kind = ExactKind::WnStar;
  std::size_t n = 1;
  std::optional<double> weight_w;  // TnPlus only
};

// Evaluates the requested exact CDF at x on the statistic's natural scale
// (M_n, W*_n, T+_n), not the sqrt(n) scale.
inline double exact_cdf(const ExactCDFRequest& req, double x) {
  if (req.weight_w.has_value() != (req.kind == ExactKind::TnPlus)) {
    throw InputError("exact_cdf: weight_w is required for TnPlus and only for TnPlus");
  }
  switch (req.kind) {
    case ExactKind::Smirnov: return smirnov_cdf(req.n, x);
    case ExactKind::WnStar: return wstar_cdf(req.n, x);
    case ExactKind::TnPlus: return tnplus_cdf(req.n, x, *req.weight_w);
  }
  throw InputError("exact_cdf: unknown kind");
}

}  // namespace gof
