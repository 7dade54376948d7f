#pragma once

// Test statistics evaluated on a UnitSample. Every statistic here depends on
// the data only through the sorted PIT values, so all of them are
// distribution-free under a continuous null.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "gof/distfn.hpp"
#include "gof/error.hpp"

namespace gof {

enum class StatKind { Mn, Kn, Wn, Vn, WnStar, VnStar, Ln, Un, TnPlus, Tn };

inline std::string_view to_string(StatKind k) {
  switch (k) {
    case StatKind::Mn: return "Mn";
    case StatKind::Kn: return "Kn";
    case StatKind::Wn: return "Wn";
    case StatKind::Vn: return "Vn";
    case StatKind::WnStar: return "WnStar";
    case StatKind::VnStar: return "VnStar";
    case StatKind::Ln: return "Ln";
    case StatKind::Un: return "Un";
    case StatKind::TnPlus: return "TnPlus";
    case StatKind::Tn: return "Tn";
  }
  return "?";
}

struct StatisticValue {
  StatKind kind = StatKind::Mn;
  std::size_t n = 0;
  double value = 0.0;
  std::optional<std::size_t> argmax_index;  // WnStar and VnStar only
  std::optional<double> argmax_u;
  std::optional<double> weight_w;  // TnPlus and Tn only
};

namespace detail {

// i/n - u_{i:n}: the upward deviation of the empirical CDF at its i-th jump.
inline double upper_gap(const UnitSample& s, std::size_t i) {
  return static_cast<double>(i) / static_cast<double>(s.size()) - s.order_stat(i);
}

// u_{i:n} - (i-1)/n: the downward deviation just before the i-th jump.
inline double lower_gap(const UnitSample& s, std::size_t i) {
  return s.order_stat(i) - static_cast<double>(i - 1) / static_cast<double>(s.size());
}

inline double two_sided_gap(const UnitSample& s, std::size_t i) {
  return std::max(upper_gap(s, i), lower_gap(s, i));
}

inline double standardize_at(double gap, double u, const char* who) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DegenerateSampleError(std::string(who) +
                                ": argmax location is 0 or 1, statistic undefined");
  }
  return gap / std::sqrt(u * (1.0 - u));
}

}  // namespace detail

// Smallest index attaining max_i (i/n - u_{i:n}).
inline std::size_t argmax_one_sided(const UnitSample& s) {
  std::size_t best = 1;
  double best_val = detail::upper_gap(s, 1);
  for (std::size_t i = 2; i <= s.size(); ++i) {
    const double v = detail::upper_gap(s, i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  return best;
}

// Smallest index attaining max_i max{i/n - u_{i:n}, u_{i:n} - (i-1)/n}.
inline std::size_t argmax_two_sided(const UnitSample& s) {
  std::size_t best = 1;
  double best_val = detail::two_sided_gap(s, 1);
  for (std::size_t i = 2; i <= s.size(); ++i) {
    const double v = detail::two_sided_gap(s, i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  return best;
}

// One-sided Smirnov statistic M_n. The i = n term is 1 - u_{n:n} >= 0, so the
// value is never negative.
inline StatisticValue smirnov_stat(const UnitSample& s) {
  const std::size_t r = argmax_one_sided(s);
  return {StatKind::Mn, s.size(), detail::upper_gap(s, r), std::nullopt, std::nullopt,
          std::nullopt};
}

inline StatisticValue ks_stat(const UnitSample& s) {
  const std::size_t r = argmax_two_sided(s);
  return {StatKind::Kn, s.size(), detail::two_sided_gap(s, r), std::nullopt,
          std::nullopt, std::nullopt};
}

// M_n rescaled by the standard deviation at its own (smallest) maximizer.
inline StatisticValue wstar_stat(const UnitSample& s) {
  const std::size_t r = argmax_one_sided(s);
  const double u = s.order_stat(r);
  const double v = detail::standardize_at(detail::upper_gap(s, r), u, "wstar_stat");
  return {StatKind::WnStar, s.size(), v, r, u, std::nullopt};
}

inline StatisticValue vstar_stat(const UnitSample& s) {
  const std::size_t r = argmax_two_sided(s);
  const double u = s.order_stat(r);
  const double v = detail::standardize_at(detail::two_sided_gap(s, r), u, "vstar_stat");
  return {StatKind::VnStar, s.size(), v, r, u, std::nullopt};
}

// L_n = max_i i / (n u_{i:n}); +inf when u_{1:n} = 0.
inline StatisticValue ln_stat(const UnitSample& s) {
  const double n = static_cast<double>(s.size());
  double best = 0.0;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    const double u = s.order_stat(i);
    const double v = (u > 0.0) ? static_cast<double>(i) / (n * u)
                               : std::numeric_limits<double>::infinity();
    best = std::max(best, v);
  }
  return {StatKind::Ln, s.size(), best, std::nullopt, std::nullopt, std::nullopt};
}

// U_n = max_i (n - i) / (n (1 - u_{i:n})). The i = n term is 0 by the
// formula, so n = 1 yields 0.
inline StatisticValue un_stat(const UnitSample& s) {
  const std::size_t n = s.size();
  double best = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double tail = 1.0 - s.order_stat(i);
    const double v = (tail > 0.0)
                         ? static_cast<double>(n - i) / (static_cast<double>(n) * tail)
                         : std::numeric_limits<double>::infinity();
    best = std::max(best, v);
  }
  return {StatKind::Un, n, best, std::nullopt, std::nullopt, std::nullopt};
}

namespace detail {
inline void require_weight(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weight w must be positive");
}
}  // namespace detail

// T+_n(w) = max{w L_n, sqrt(n) M_n, w U_n}.
inline StatisticValue tnplus_stat(const UnitSample& s, double w) {
  detail::require_weight(w);
  const double root_n = std::sqrt(static_cast<double>(s.size()));
  const double v = std::max({w * ln_stat(s).value, root_n * smirnov_stat(s).value,
                             w * un_stat(s).value});
  return {StatKind::TnPlus, s.size(), v, std::nullopt, std::nullopt, w};
}

// T_n(w) = max{w L_n, sqrt(n) K_n, w U_n}.
inline StatisticValue tn_stat(const UnitSample& s, double w) {
  detail::require_weight(w);
  const double root_n = std::sqrt(static_cast<double>(s.size()));
  const double v = std::max(
      {w * ln_stat(s).value, root_n * ks_stat(s).value, w * un_stat(s).value});
  return {StatKind::Tn, s.size(), v, std::nullopt, std::nullopt, w};
}

// Weighted suprema sup (F_n(t) - t)/sqrt(t(1-t)) and its absolute-value
// version. On each interval between order statistics the standardized
// deviation is monotone, so the supremum sits at a jump. Order statistics
// at 0 or 1 make the supremum infinite.
inline StatisticValue wn_stat(const UnitSample& s) {
  double best = 0.0;  // t -> 0+ before the first jump
  for (std::size_t i = 1; i <= s.size(); ++i) {
    const double u = s.order_stat(i);
    const double gap = detail::upper_gap(s, i);
    double v;
    if (u > 0.0 && u < 1.0) {
      v = gap / std::sqrt(u * (1.0 - u));
    } else {
      v = (gap > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    }
    best = std::max(best, v);
  }
  return {StatKind::Wn, s.size(), best, std::nullopt, std::nullopt, std::nullopt};
}

inline StatisticValue vn_stat(const UnitSample& s) {
  double best = 0.0;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    const double u = s.order_stat(i);
    const double gap = detail::two_sided_gap(s, i);
    double v;
    if (u > 0.0 && u < 1.0) {
      v = gap / std::sqrt(u * (1.0 - u));
    } else {
      v = (gap > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    }
    best = std::max(best, v);
  }
  return {StatKind::Vn, s.size(), best, std::nullopt, std::nullopt, std::nullopt};
}

}  // namespace gof
