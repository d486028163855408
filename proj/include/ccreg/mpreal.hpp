#pragma once

// Minimal RAII wrapper around MPFR, just the surface the library needs:
// runtime-adjustable precision, elementary functions, and fixed-point export.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace ccreg {

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  MpReal(const MpReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpReal(MpReal&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~MpReal() { mpfr_clear(v_); }

  static MpReal from(double d, mpfr_prec_t prec) { MpReal r(prec); mpfr_set_d(r.v_, d, MPFR_RNDN); return r; }
  static MpReal from(long l, mpfr_prec_t prec) { MpReal r(prec); mpfr_set_si(r.v_, l, MPFR_RNDN); return r; }
  static MpReal from(const mpz_class& z, mpfr_prec_t prec) { MpReal r(prec); mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN); return r; }
  static MpReal from(const mpq_class& q, mpfr_prec_t prec) { MpReal r(prec); mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN); return r; }
  static MpReal pi(mpfr_prec_t prec) { MpReal r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  friend MpReal operator+(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator-(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator*(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator/(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  MpReal operator-() const { MpReal r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }
  MpReal& operator+=(const MpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator-=(const MpReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator*=(const MpReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator/=(const MpReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  MpReal mul_int(const mpz_class& k) const { MpReal r(prec()); mpfr_mul_z(r.v_, v_, k.get_mpz_t(), MPFR_RNDN); return r; }
  MpReal mul_2exp(long e) const { MpReal r(prec()); mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN); return r; }

  friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  int sgn() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }

  MpReal abs() const { MpReal r(prec()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
  MpReal sqrt() const { MpReal r(prec()); mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
  MpReal rootn(unsigned long n) const {
    MpReal r(prec());
#if MPFR_VERSION_MAJOR >= 4
    mpfr_rootn_ui(r.v_, v_, n, MPFR_RNDN);
#else
    mpfr_root(r.v_, v_, n, MPFR_RNDN);
#endif
    return r;
  }
  MpReal exp() const { MpReal r(prec()); mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
  MpReal log() const { MpReal r(prec()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
  MpReal cos() const { MpReal r(prec()); mpfr_cos(r.v_, v_, MPFR_RNDN); return r; }
  MpReal sin() const { MpReal r(prec()); mpfr_sin(r.v_, v_, MPFR_RNDN); return r; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  mpz_class round() const {
    mpz_class z;
    MpReal t(prec());
    mpfr_round(t.v_, v_);
    mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDZ);
    return z;
  }

  // round(x * 2^F) as an integer: fixed-point export for exact lattice work.
  mpz_class fixed(long F) const {
    MpReal t = mul_2exp(F);
    return t.round();
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace ccreg
