#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gof/error.hpp"

namespace gof::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(k!) for k = 0..n, accumulated in long double.
inline std::vector<double> log_factorials(std::size_t n) {
  std::vector<double> out(n + 1, 0.0);
  long double acc = 0.0L;
  for (std::size_t k = 2; k <= n; ++k) {
    acc += std::log(static_cast<long double>(k));
    out[k] = static_cast<double>(acc);
  }
  return out;
}

inline double log_binomial(const std::vector<double>& lf, std::size_t n, std::size_t k) {
  return lf[n] - lf[k] - lf[n - k];
}

// Root of a nondecreasing function f(x) = target on (floor_x, inf). The
// bracket grows from `guess` by doubling steps, then bisection runs until
// |f(mid) - target| <= ftol or the bracket cannot shrink further.
struct RootResult {
  double x;
  double residual;  // f(x) - target
};

template <class F>
RootResult bisect_increasing(F&& f, double target, double guess, double floor_x,
                             double ftol, double step = 0.0, int max_iter = 200) {
  if (!(guess > floor_x)) guess = floor_x + 1.0;
  if (!(step > 0.0)) step = 0.05 * (guess - floor_x);
  double lo = floor_x;
  double hi = guess;
  const double f_guess = f(guess);
  if (std::abs(f_guess - target) <= ftol) return {guess, f_guess - target};
  double f_hi = f_guess;
  int expand = 0;
  if (f_guess < target) {
    lo = guess;
    while (true) {
      hi = lo + step;
      f_hi = f(hi);
      if (f_hi >= target) break;
      lo = hi;
      step *= 2.0;
      if (++expand > 200) throw ConvergenceError("bisect_increasing: could not bracket root");
    }
  } else {
    hi = guess;
    while (true) {
      lo = std::max(floor_x, hi - step);
      if (lo == floor_x) break;
      const double f_lo = f(lo);
      if (f_lo < target) break;
      hi = lo;
      f_hi = f_lo;
      step *= 2.0;
    }
  }
  RootResult best{hi, f_hi - target};
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = f(mid);
    if (std::abs(fm - target) < std::abs(best.residual)) best = {mid, fm - target};
    if (std::abs(fm - target) <= ftol) return {mid, fm - target};
    if (fm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace gof::detail
