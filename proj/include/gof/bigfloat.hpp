#pragma once

// Minimal RAII wrapper over mpfr_t, enough for the determinant recursion.
// New values take the calling thread's working precision, which
// ScopedPrecision sets for the duration of a computation.

#include <mpfr.h>

#include <utility>

namespace gof::detail {

class BigFloat {
 public:
  static mpfr_prec_t& working_precision() {
    thread_local mpfr_prec_t bits = 128;
    return bits;
  }

  BigFloat() : BigFloat(0.0) {}
  BigFloat(int v) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, working_precision());
    mpfr_set_si(v_, v, MPFR_RNDN);
  }
  BigFloat(double v) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, working_precision());
    mpfr_set_d(v_, v, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_positive() const { return mpfr_sgn(v_) > 0; }

  void pow_ui(unsigned long e) { mpfr_pow_ui(v_, v_, e, MPFR_RNDN); }
  void mul_ui(unsigned long k) { mpfr_mul_ui(v_, v_, k, MPFR_RNDN); }
  void div_ui(unsigned long k) { mpfr_div_ui(v_, v_, k, MPFR_RNDN); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

inline bool is_zero_value(const BigFloat& x) { return x.is_zero(); }

class ScopedPrecision {
 public:
  explicit ScopedPrecision(mpfr_prec_t bits) : saved_(BigFloat::working_precision()) {
    BigFloat::working_precision() = bits;
  }
  ~ScopedPrecision() { BigFloat::working_precision() = saved_; }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  mpfr_prec_t saved_;
};

}  // namespace gof::detail
