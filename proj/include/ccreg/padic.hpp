#pragma once

// Bounded-precision arithmetic in Z_p and in the cubic extensions of Q_p:
// the unramified cubic and the three totally ramified cubics (p = 1 mod 3).
// Everything is exact ring arithmetic mod p^N; fractional valuations in the
// ramified rings are integers in units of 1/3.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "ccreg/nt.hpp"

namespace ccreg {

class PadicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reduction of the input polynomial has a repeated root; Hensel lifting does
// not apply. Callers switch to a different field generator on this.
class NonSeparableError : public PadicError {
 public:
  using PadicError::PadicError;
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw PadicError(msg);
}

// ---------------------------------------------------------------------------
// PadicScalar: an element of Z_p known mod p^N.
// ---------------------------------------------------------------------------

class PadicScalar {
 public:
  PadicScalar() : p_(0), n_(0) {}

  PadicScalar(uint32_t p, int N, mpz_class v) : p_(p), n_(N), pn_(pow_pn(p, N)) {
    require(p > 3 && is_prime_u64(p), "padic: p must be a prime > 3");
    require(N >= 1, "padic: precision must be >= 1");
    r_ = v % pn_;
    if (r_ < 0) r_ += pn_;
  }

  static PadicScalar zero(uint32_t p, int N) { return PadicScalar(p, N, 0); }
  static PadicScalar one(uint32_t p, int N) { return PadicScalar(p, N, 1); }

  // Rational a/b with b a p-adic unit.
  static PadicScalar from_mpq(uint32_t p, int N, const mpq_class& q) {
    PadicScalar num(p, N, q.get_num());
    mpz_class den = q.get_den();
    require(den % p != 0, "padic: denominator not a p-adic unit");
    return num * PadicScalar(p, N, invmod(den % num.pn_, num.pn_));
  }

  uint32_t prime() const { return p_; }
  int precision() const { return n_; }
  const mpz_class& residue() const { return r_; }
  const mpz_class& modulus() const { return pn_; }

  // True when the value is indistinguishable from 0 at this precision.
  bool is_zero() const { return r_ == 0; }

  // v_p, capped at N for (apparent) zero.
  long valuation() const { return is_zero() ? n_ : mpz_val(r_, p_); }

  bool is_unit() const { return r_ % p_ != 0; }

  PadicScalar reduced(int N) const {
    require(N >= 1 && N <= n_, "padic: cannot raise precision");
    if (N == n_) return *this;
    PadicScalar out(p_, N, 0);
    out.r_ = r_ % out.pn_;
    return out;
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    auto [x, y] = align(a, b);
    x.r_ += y.r_;
    if (x.r_ >= x.pn_) x.r_ -= x.pn_;
    return x;
  }
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
    auto [x, y] = align(a, b);
    x.r_ -= y.r_;
    if (x.r_ < 0) x.r_ += x.pn_;
    return x;
  }
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    auto [x, y] = align(a, b);
    x.r_ = x.r_ * y.r_ % x.pn_;
    return x;
  }
  PadicScalar operator-() const {
    PadicScalar out = *this;
    if (out.r_ != 0) out.r_ = out.pn_ - out.r_;
    return out;
  }
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

  PadicScalar mul_int(const mpz_class& k) const {
    PadicScalar out = *this;
    out.r_ = out.r_ * (k % pn_) % pn_;
    if (out.r_ < 0) out.r_ += pn_;
    return out;
  }

  // Division is only defined when the divisor is a unit.
  PadicScalar inv() const {
    require(is_unit(), "padic: division by non-unit");
    PadicScalar out = *this;
    out.r_ = invmod(r_, pn_);
    return out;
  }
  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) { return a * b.inv(); }

  // Exact division by p^k; costs k digits of absolute precision.
  PadicScalar shift_down(long k) const {
    require(k >= 0 && k < n_, "padic: shift_down out of range");
    if (k == 0) return *this;
    require(valuation() >= k, "padic: shift_down of non-divisible value");
    PadicScalar out(p_, int(n_ - k), 0);
    mpz_class pk = pow_pn(p_, int(k));
    out.r_ = (r_ / pk) % out.pn_;
    return out;
  }

  PadicScalar pow(const mpz_class& e) const {
    if (e < 0) return inv().pow(-e);
    PadicScalar out = *this;
    out.r_ = ccreg::mpz_powm(r_, e, pn_);
    return out;
  }

  bool operator==(const PadicScalar& o) const {
    return p_ == o.p_ && n_ == o.n_ && r_ == o.r_;
  }

 private:
  static mpz_class pow_pn(uint32_t p, int N) { return mpz_pow_ui(mpz_class(p), N); }

  static std::pair<PadicScalar, PadicScalar> align(const PadicScalar& a, const PadicScalar& b) {
    require(a.p_ != 0 && a.p_ == b.p_, "padic: mixed primes");
    int n = std::min(a.n_, b.n_);
    return {a.reduced(n), b.reduced(n)};
  }

  uint32_t p_;
  int n_;
  mpz_class r_;
  mpz_class pn_;
};

// ---------------------------------------------------------------------------
// Cubic extension descriptors.
// ---------------------------------------------------------------------------

enum class ExtKind { unramified, ramified };

struct ExtensionDescriptor {
  uint32_t p = 0;
  int N = 0;
  ExtKind kind = ExtKind::unramified;
  int branch = -1;          // j in {0,1,2} for modulus t^3 - p*u^j
  int e = 1, f = 3;         // ramification index / residue degree
  mpz_class pN;
  // modulus m(t) = t^3 + m2 t^2 + m1 t + m0, coefficients canonical mod p^N
  mpz_class m2, m1, m0;
  uint64_t noncube_u = 0;   // ramified only
  mpz_class zeta;           // ramified only: primitive cube root of unity mod p^N
  // unramified only: Frobenius image of t and its square
  std::array<mpz_class, 3> frob_t{}, frob_t2{};
};

using ExtDescPtr = std::shared_ptr<const ExtensionDescriptor>;

// ---------------------------------------------------------------------------
// PadicExtElem: c0 + c1 t + c2 t^2 in Z_p[t]/(m(t)) known mod p^N.
// ---------------------------------------------------------------------------

class PadicExtElem {
 public:
  PadicExtElem() : n_(0) {}

  PadicExtElem(ExtDescPtr d, mpz_class c0, mpz_class c1, mpz_class c2)
      : d_(std::move(d)), n_(d_->N), pn_(d_->pN) {
    c_[0] = norm_mod(std::move(c0));
    c_[1] = norm_mod(std::move(c1));
    c_[2] = norm_mod(std::move(c2));
  }

  static PadicExtElem zero(const ExtDescPtr& d) { return PadicExtElem(d, 0, 0, 0); }
  static PadicExtElem one(const ExtDescPtr& d) { return PadicExtElem(d, 1, 0, 0); }
  static PadicExtElem gen(const ExtDescPtr& d) { return PadicExtElem(d, 0, 1, 0); }

  static PadicExtElem from_scalar(const ExtDescPtr& d, const PadicScalar& s) {
    require(s.prime() == d->p, "padic: scalar prime mismatch");
    PadicExtElem x(d, s.residue(), 0, 0);
    return x.reduced(std::min(x.n_, s.precision()));
  }

  const ExtDescPtr& desc() const { return d_; }
  int precision() const { return n_; }
  const mpz_class& coeff(int i) const { return c_[i]; }
  const mpz_class& modulus() const { return pn_; }

  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }
  bool in_base_field() const { return c_[1] == 0 && c_[2] == 0; }

  PadicScalar base_part() const {
    require(in_base_field(), "padic: element not in base field");
    return PadicScalar(d_->p, n_, c_[0]);
  }

  // Valuation in units of 1/e, capped at e*N (zero flag).
  long valuation_scaled() const {
    long cap = (long)d_->e * n_;
    if (is_zero()) return cap;
    long best = cap;
    for (int i = 0; i < 3; ++i) {
      if (c_[i] == 0) continue;
      long v = mpz_val(c_[i], d_->p);
      long sv = (d_->e == 1) ? v : 3 * v + i;
      best = std::min(best, sv);
    }
    return std::min(best, cap);
  }

  bool is_unit() const { return valuation_scaled() == 0; }

  PadicExtElem reduced(int N) const {
    require(N >= 1 && N <= n_, "padic: cannot raise precision");
    if (N == n_) return *this;
    PadicExtElem out = *this;
    out.n_ = N;
    out.pn_ = mpz_pow_ui(mpz_class(d_->p), N);
    for (auto& c : out.c_) c %= out.pn_;
    return out;
  }

  friend PadicExtElem operator+(const PadicExtElem& a, const PadicExtElem& b) {
    auto [x, y] = align(a, b);
    for (int i = 0; i < 3; ++i) {
      x.c_[i] += y.c_[i];
      if (x.c_[i] >= x.pn_) x.c_[i] -= x.pn_;
    }
    return x;
  }
  friend PadicExtElem operator-(const PadicExtElem& a, const PadicExtElem& b) {
    auto [x, y] = align(a, b);
    for (int i = 0; i < 3; ++i) {
      x.c_[i] -= y.c_[i];
      if (x.c_[i] < 0) x.c_[i] += x.pn_;
    }
    return x;
  }
  PadicExtElem operator-() const {
    PadicExtElem out = *this;
    for (auto& c : out.c_)
      if (c != 0) c = pn_ - c;
    return out;
  }

  friend PadicExtElem operator*(const PadicExtElem& a, const PadicExtElem& b) {
    auto [x, y] = align(a, b);
    // product coefficients up to degree 4
    mpz_class q0 = x.c_[0] * y.c_[0];
    mpz_class q1 = x.c_[0] * y.c_[1] + x.c_[1] * y.c_[0];
    mpz_class q2 = x.c_[0] * y.c_[2] + x.c_[1] * y.c_[1] + x.c_[2] * y.c_[0];
    mpz_class q3 = x.c_[1] * y.c_[2] + x.c_[2] * y.c_[1];
    mpz_class q4 = x.c_[2] * y.c_[2];
    x.reduce_deg4(q0, q1, q2, q3, q4);
    return x;
  }
  PadicExtElem& operator+=(const PadicExtElem& o) { return *this = *this + o; }
  PadicExtElem& operator-=(const PadicExtElem& o) { return *this = *this - o; }
  PadicExtElem& operator*=(const PadicExtElem& o) { return *this = *this * o; }

  PadicExtElem mul_int(const mpz_class& k) const {
    PadicExtElem out = *this;
    mpz_class km = k % pn_;
    if (km < 0) km += pn_;
    for (auto& c : out.c_) c = c * km % pn_;
    return out;
  }

  PadicExtElem pow(const mpz_class& e) const {
    if (e < 0) return inv().pow(-e);
    PadicExtElem base = *this, out = one(d_).reduced(n_);
    mpz_class k = e;
    while (k > 0) {
      if (mpz_odd_p(k.get_mpz_t())) out *= base;
      base *= base;
      k >>= 1;
    }
    return out;
  }

  // Inverse of a unit, via the adjugate of the multiplication matrix.
  PadicExtElem inv() const {
    require(is_unit(), "padic: division by non-unit");
    // columns of M: coordinates of x*1, x*t, x*t^2
    PadicExtElem xt = mul_by_t(), xt2 = xt.mul_by_t();
    const mpz_class &a0 = c_[0], &a1 = c_[1], &a2 = c_[2];
    const mpz_class &b0 = xt.c_[0], &b1 = xt.c_[1], &b2 = xt.c_[2];
    const mpz_class &d0 = xt2.c_[0], &d1 = xt2.c_[1], &d2 = xt2.c_[2];
    mpz_class det = a0 * (b1 * d2 - b2 * d1) - b0 * (a1 * d2 - a2 * d1) + d0 * (a1 * b2 - a2 * b1);
    det %= pn_;
    if (det < 0) det += pn_;
    require(det % d_->p != 0, "padic: inverse of non-unit (norm)");
    mpz_class idet = invmod(det, pn_);
    // first column of adj(M)
    mpz_class i0 = (b1 * d2 - b2 * d1) % pn_;
    mpz_class i1 = -(a1 * d2 - a2 * d1) % pn_;
    mpz_class i2 = (a1 * b2 - a2 * b1) % pn_;
    PadicExtElem out = *this;
    out.c_[0] = mod_pos(i0 * idet, pn_);
    out.c_[1] = mod_pos(i1 * idet, pn_);
    out.c_[2] = mod_pos(i2 * idet, pn_);
    return out;
  }
  friend PadicExtElem operator/(const PadicExtElem& a, const PadicExtElem& b) { return a * b.inv(); }

  // Exact division by p^k (k in v_p units); costs k digits of precision.
  PadicExtElem shift_down(long k) const {
    require(k >= 0 && k < n_, "padic: shift_down out of range");
    if (k == 0) return *this;
    mpz_class pk = mpz_pow_ui(mpz_class(d_->p), (unsigned long)k);
    PadicExtElem out = *this;
    out.n_ = int(n_ - k);
    out.pn_ = mpz_pow_ui(mpz_class(d_->p), out.n_);
    for (auto& c : out.c_) {
      require(c % pk == 0, "padic: shift_down of non-divisible element");
      c = (c / pk) % out.pn_;
    }
    return out;
  }

  // Exact division by the uniformizer t (ramified rings only).
  PadicExtElem div_by_t() const {
    require(d_->kind == ExtKind::ramified, "padic: div_by_t needs a ramified ring");
    // x / t = c1 + c2 t + (c0/c) t^2 with c = -m0 = p u^j
    mpz_class c = mod_pos(-d_->m0, pn_);
    require(c_[0] % d_->p == 0, "padic: div_by_t of non-divisible element");
    mpz_class cp = c / d_->p;  // unit
    PadicExtElem out = *this;
    out.n_ = n_ - 1;
    require(out.n_ >= 1, "padic: precision exhausted in div_by_t");
    out.pn_ = mpz_pow_ui(mpz_class(d_->p), out.n_);
    mpz_class q = (c_[0] / d_->p) % out.pn_;
    q = q * invmod(cp % out.pn_, out.pn_) % out.pn_;
    out.c_[0] = c_[1] % out.pn_;
    out.c_[1] = c_[2] % out.pn_;
    out.c_[2] = q;
    return out;
  }

  PadicExtElem mul_by_t() const {
    // t * (c0 + c1 t + c2 t^2) = -m0 c2 + (c0 - m1 c2) t + (c1 - m2 c2) t^2
    PadicExtElem out = *this;
    out.c_[0] = mod_pos(-d_->m0 * c_[2], pn_);
    out.c_[1] = mod_pos(c_[0] - d_->m1 * c_[2], pn_);
    out.c_[2] = mod_pos(c_[1] - d_->m2 * c_[2], pn_);
    return out;
  }

  // Leading digit: the residue of x / t^{v(x)} in F_p (ramified rings).
  uint64_t lead_digit() const {
    require(d_->kind == ExtKind::ramified, "lead_digit: ramified ring expected");
    require(!is_zero(), "lead_digit: zero element");
    long v = valuation_scaled();
    long s = v % 3, q = v / 3;
    mpz_class pq = mpz_pow_ui(mpz_class(d_->p), (unsigned long)q);
    uint64_t digit = mpz_class(c_[s] / pq % d_->p).get_ui();
    // normalize by u^{j q} from t^{3q} = (p u^j)^q
    uint64_t ujq = powmod_u64(powmod_u64(d_->noncube_u, (uint64_t)d_->branch, d_->p),
                              (uint64_t)q, d_->p);
    return mulmod_u64(digit, powmod_u64(ujq, d_->p - 2, d_->p), d_->p);
  }

  // Trace to Z_p: x + sigma(x) + sigma^2(x).
  PadicScalar trace() const {
    // Tr(1) = 3, Tr(t) = -m2, Tr(t^2) = m2^2 - 2 m1
    mpz_class tr = 3 * c_[0] - d_->m2 * c_[1] + (d_->m2 * d_->m2 - 2 * d_->m1) * c_[2];
    return PadicScalar(d_->p, n_, tr);
  }

  bool operator==(const PadicExtElem& o) const {
    return d_ == o.d_ && n_ == o.n_ && c_ == o.c_;
  }

 private:
  static mpz_class mod_pos(mpz_class v, const mpz_class& m) {
    v %= m;
    if (v < 0) v += m;
    return v;
  }
  mpz_class norm_mod(mpz_class v) const { return mod_pos(std::move(v), pn_); }

  void reduce_deg4(mpz_class& q0, mpz_class& q1, mpz_class& q2, mpz_class& q3, mpz_class& q4) {
    // t^3 = -(m2 t^2 + m1 t + m0)
    q3 += -d_->m2 * q4;
    q2 += -d_->m1 * q4;
    q1 += -d_->m0 * q4;
    q2 += -d_->m2 * q3;
    q1 += -d_->m1 * q3;
    q0 += -d_->m0 * q3;
    c_[0] = mod_pos(std::move(q0), pn_);
    c_[1] = mod_pos(std::move(q1), pn_);
    c_[2] = mod_pos(std::move(q2), pn_);
  }

  static std::pair<PadicExtElem, PadicExtElem> align(const PadicExtElem& a, const PadicExtElem& b) {
    require(a.d_ && a.d_ == b.d_, "padic: mixed descriptors");
    int n = std::min(a.n_, b.n_);
    return {a.reduced(n), b.reduced(n)};
  }

  ExtDescPtr d_;
  int n_;
  mpz_class pn_;
  std::array<mpz_class, 3> c_;

  friend ExtDescPtr make_unramified_cubic(uint32_t, int);
};

// ---------------------------------------------------------------------------
// Descriptor construction.
// ---------------------------------------------------------------------------

// Exact cube root of unity in Z_p (p = 1 mod 3): Hensel lift of the smallest
// primitive cube root mod p along x^2 + x + 1.
inline PadicScalar teichmuller_cube_root(uint32_t p, int N) {
  require(is_prime_u64(p) && p > 3, "teichmuller: p must be a prime > 3");
  require(p % 3 == 1, "teichmuller: p must be 1 mod 3");
  uint64_t z0 = 0;
  for (uint64_t c = 2; c < p; ++c) {
    if (c * c % p * c % p == 1) { z0 = c; break; }
  }
  require(z0 != 0, "teichmuller: no primitive cube root found");
  // Newton on g(x) = x^2 + x + 1; g'(x) = 2x + 1 is a unit since (2z+1)^2 = -3.
  mpz_class pN = mpz_pow_ui(mpz_class(p), N);
  mpz_class z = z0;
  for (int i = 0; i < N + 2; ++i) {
    mpz_class g = (z * z + z + 1) % pN;
    if (g == 0) break;
    mpz_class gp = (2 * z + 1) % pN;
    z = (z - g * invmod(gp, pN)) % pN;
    if (z < 0) z += pN;
  }
  require((z * z + z + 1) % pN == 0, "teichmuller: lift failed");
  return PadicScalar(p, N, z);
}

namespace detail {

// F_p[t]/(mbar) arithmetic on machine words, for root scans mod p.
struct Fp3 {
  uint64_t p;
  std::array<uint64_t, 3> m;  // mbar = t^3 + m[2] t^2 + m[1] t + m[0]

  std::array<uint64_t, 3> mul(const std::array<uint64_t, 3>& a, const std::array<uint64_t, 3>& b) const {
    uint64_t q[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) q[i + j] = (q[i + j] + a[i] * b[j]) % p;
    for (int d = 4; d >= 3; --d) {
      uint64_t t = q[d];
      q[d] = 0;
      q[d - 1] = (q[d - 1] + (p - m[2]) * t) % p;
      q[d - 2] = (q[d - 2] + (p - m[1]) * t) % p;
      q[d - 3] = (q[d - 3] + (p - m[0]) * t) % p;
    }
    return {q[0], q[1], q[2]};
  }
  std::array<uint64_t, 3> pow(std::array<uint64_t, 3> b, uint64_t e) const {
    std::array<uint64_t, 3> r = {1, 0, 0};
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
};

inline bool cubic_irreducible_mod_p(uint64_t c2, uint64_t c1, uint64_t c0, uint64_t p) {
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t v = ((x * x % p * x % p) + c2 * x % p * x % p + c1 * x % p + c0) % p;
    if (v == 0) return false;
  }
  return true;
}

}  // namespace detail

// The unique unramified cubic extension: modulus is the lift of the
// lexicographically smallest monic irreducible cubic over F_p.
inline ExtDescPtr make_unramified_cubic(uint32_t p, int N) {
  require(is_prime_u64(p) && p > 3, "unramified cubic: p must be a prime > 3");
  require(N >= 1, "unramified cubic: N >= 1");
  auto d = std::make_shared<ExtensionDescriptor>();
  d->p = p;
  d->N = N;
  d->kind = ExtKind::unramified;
  d->e = 1;
  d->f = 3;
  d->pN = mpz_pow_ui(mpz_class(p), N);
  bool found = false;
  for (uint64_t c2 = 0; c2 < p && !found; ++c2)
    for (uint64_t c1 = 0; c1 < p && !found; ++c1)
      for (uint64_t c0 = 0; c0 < p && !found; ++c0) {
        if (detail::cubic_irreducible_mod_p(c2, c1, c0, p)) {
          d->m2 = c2;
          d->m1 = c1;
          d->m0 = c0;
          found = true;
        }
      }
  require(found, "unramified cubic: no irreducible cubic found");

  // Frobenius: the root r of m(t) with r = t^p mod p, Hensel-lifted.
  detail::Fp3 fp3{p, {d->m0.get_ui(), d->m1.get_ui(), d->m2.get_ui()}};
  auto r0 = fp3.pow({0, 1, 0}, p);
  ExtDescPtr dc(d, d.get());  // alias for element construction below
  PadicExtElem r(dc, mpz_class(r0[0]), mpz_class(r0[1]), mpz_class(r0[2]));
  auto eval_m = [&](const PadicExtElem& x) {
    return ((x + PadicExtElem(dc, d->m2, 0, 0)) * x + PadicExtElem(dc, d->m1, 0, 0)) * x +
           PadicExtElem(dc, d->m0, 0, 0);
  };
  auto eval_mp = [&](const PadicExtElem& x) {
    return x * x * PadicExtElem(dc, 3, 0, 0) + x * PadicExtElem(dc, 2 * d->m2, 0, 0) +
           PadicExtElem(dc, d->m1, 0, 0);
  };
  for (int i = 0; i < 2 * N + 4; ++i) {
    PadicExtElem fx = eval_m(r);
    if (fx.is_zero()) break;
    r = r - fx * eval_mp(r).inv();
  }
  require(eval_m(r).is_zero(), "unramified cubic: Frobenius lift failed");
  PadicExtElem r2 = r * r;
  d->frob_t = {r.coeff(0), r.coeff(1), r.coeff(2)};
  d->frob_t2 = {r2.coeff(0), r2.coeff(1), r2.coeff(2)};
  return d;
}

// The three cyclic totally ramified cubic extensions of Q_p (p = 1 mod 3),
// with moduli t^3 - p u^j for u the smallest non-cube unit mod p.
inline std::array<ExtDescPtr, 3> make_ramified_cubics(uint32_t p, int N) {
  require(is_prime_u64(p) && p > 3, "ramified cubics: p must be a prime > 3");
  require(p % 3 == 1, "ramified cubics: defined only for p = 1 mod 3");
  require(N >= 1, "ramified cubics: N >= 1");
  uint64_t u = smallest_noncube(p);
  mpz_class zeta = teichmuller_cube_root(p, N).residue();
  std::array<ExtDescPtr, 3> out;
  mpz_class pN = mpz_pow_ui(mpz_class(p), N);
  mpz_class uj = 1;
  for (int j = 0; j < 3; ++j) {
    auto d = std::make_shared<ExtensionDescriptor>();
    d->p = p;
    d->N = N;
    d->kind = ExtKind::ramified;
    d->branch = j;
    d->e = 3;
    d->f = 1;
    d->pN = pN;
    d->m2 = 0;
    d->m1 = 0;
    d->m0 = (pN - mpz_class(p) * uj % pN) % pN;  // -(p u^j)
    d->noncube_u = u;
    d->zeta = zeta;
    out[j] = d;
    uj = uj * u % pN;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Galois actions.
// ---------------------------------------------------------------------------

// Lift of the p-power Frobenius on the unramified cubic; order 3, fixes Z_p.
inline PadicExtElem frobenius(const PadicExtElem& x) {
  const auto& d = x.desc();
  require(d->kind == ExtKind::unramified, "frobenius: descriptor must be unramified");
  PadicExtElem rt(d, d->frob_t[0], d->frob_t[1], d->frob_t[2]);
  PadicExtElem rt2(d, d->frob_t2[0], d->frob_t2[1], d->frob_t2[2]);
  PadicExtElem out = PadicExtElem(d, x.coeff(0), 0, 0) + rt.mul_int(x.coeff(1)) + rt2.mul_int(x.coeff(2));
  return out.reduced(x.precision());
}

// The generator t -> zeta t of the ramified Galois group; order 3, fixes Z_p.
inline PadicExtElem ramified_sigma(const PadicExtElem& x) {
  const auto& d = x.desc();
  require(d->kind == ExtKind::ramified, "ramified_sigma: descriptor must be ramified");
  mpz_class z2 = d->zeta * d->zeta % d->pN;
  PadicExtElem out(d, x.coeff(0), x.coeff(1) * d->zeta, x.coeff(2) * z2);
  return out.reduced(x.precision());
}

inline PadicExtElem galois_apply(const PadicExtElem& x, int times) {
  PadicExtElem y = x;
  for (int i = 0; i < times; ++i)
    y = (x.desc()->kind == ExtKind::unramified) ? frobenius(y) : ramified_sigma(y);
  return y;
}

// ---------------------------------------------------------------------------
// p-adic logarithm.
// ---------------------------------------------------------------------------

namespace detail {

// Smallest n such that all omitted series terms have valuation >= N, plus the
// guard-digit count ceil(log_p n_max) + 2.
inline std::pair<long, long> plog_cutoff(long vz_scaled, int e, uint32_t p, int N) {
  long n = 1;
  for (;; ++n) {
    long logp = 0;
    long pw = 1;
    while (pw <= n / (long)p) { pw *= p; ++logp; }  // floor(log_p n)
    if (n * vz_scaled - (long)e * logp >= (long)e * N) break;
  }
  long nmax = n;
  long guard = 0, pw = 1;
  while (pw < nmax) { pw *= p; ++guard; }  // ceil(log_p nmax)
  return {nmax, guard + 2};
}

}  // namespace detail

// log(x) = sum (-1)^{n+1} (x-1)^n / n for v(x-1) > 0; the result's precision
// field reflects the guard digits spent on the denominators.
inline PadicExtElem plog(const PadicExtElem& x) {
  const auto& d = x.desc();
  uint32_t p = d->p;
  PadicExtElem z = x - PadicExtElem::one(d).reduced(x.precision());
  long vz = z.valuation_scaled();
  require(vz > 0, "plog: argument not in 1 + maximal ideal");
  // convergence needs v_p(x-1) > 1/(p-1); for p > 3 and v >= 1/e this holds
  int N = x.precision();
  if (z.is_zero()) return PadicExtElem::zero(d).reduced(N);
  auto [nmax, guard] = detail::plog_cutoff(vz, d->e, p, N);
  PadicExtElem sum = PadicExtElem::zero(d).reduced(N);
  PadicExtElem zn = z;
  for (long n = 1; n <= nmax; ++n) {
    if (n > 1) zn = zn * z;
    long a = 0;
    long un = n;
    while (un % p == 0) { un /= p; ++a; }
    PadicExtElem term = zn;
    if (a > 0) term = term.shift_down(a).reduced(std::max(1, N - (int)a));
    term = term.mul_int(invmod(mpz_class(un), term.modulus()));
    if (n % 2 == 0) term = -term;
    sum = sum + term;
  }
  int out_prec = std::max(1, N - (int)guard);
  return sum.reduced(std::min(sum.precision(), out_prec));
}

inline PadicScalar plog(const PadicScalar& x) {
  uint32_t p = x.prime();
  int N = x.precision();
  PadicScalar z = x - PadicScalar::one(p, N);
  long vz = z.valuation();
  require(vz >= 1, "plog: argument not in 1 + pZ_p");
  if (z.is_zero()) return PadicScalar::zero(p, N);
  auto [nmax, guard] = detail::plog_cutoff(vz, 1, p, N);
  PadicScalar sum = PadicScalar::zero(p, N);
  PadicScalar zn = z;
  for (long n = 1; n <= nmax; ++n) {
    if (n > 1) zn = zn * z;
    long a = 0;
    long un = n;
    while (un % p == 0) { un /= p; ++a; }
    PadicScalar term = zn;
    if (a > 0) term = term.shift_down(a);
    term = term.mul_int(invmod(mpz_class(un), term.modulus()));
    if (n % 2 == 0) term = -term;
    sum = sum + term;
  }
  int out_prec = std::max(1, N - (int)guard);
  return sum.reduced(std::min(sum.precision(), out_prec));
}

// ---------------------------------------------------------------------------
// Root finding.
// ---------------------------------------------------------------------------

struct Cubic {
  // x^3 + a2 x^2 + a1 x + a0 with exact integer coefficients
  mpz_class a2, a1, a0;

  mpz_class eval(const mpz_class& x) const { return ((x + a2) * x + a1) * x + a0; }
  mpz_class deriv(const mpz_class& x) const { return (3 * x + 2 * a2) * x + a1; }

  PadicExtElem eval(const PadicExtElem& x) const {
    const auto& d = x.desc();
    auto c = [&](const mpz_class& v) { return PadicExtElem(d, v, 0, 0).reduced(x.precision()); };
    return ((x + c(a2)) * x + c(a1)) * x + c(a0);
  }
  PadicExtElem deriv(const PadicExtElem& x) const {
    const auto& d = x.desc();
    auto c = [&](const mpz_class& v) { return PadicExtElem(d, v, 0, 0).reduced(x.precision()); };
    return (x.mul_int(3) + c(2 * a2)) * x + c(a1);
  }
  mpz_class disc() const {
    return 18 * a2 * a1 * a0 - 4 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 - 4 * a1 * a1 * a1 -
           27 * a0 * a0;
  }
};

// All roots of a monic integer cubic in Z_p, each exact mod p^N. Requires the
// reduction mod p to be separable at its roots.
inline std::vector<PadicScalar> hensel_roots_zp(const Cubic& poly, uint32_t p, int N) {
  std::vector<uint64_t> roots0;
  for (uint64_t r = 0; r < p; ++r) {
    if (mpz_class(poly.eval(r) % p) == 0) roots0.push_back(r);
  }
  mpz_class pN = mpz_pow_ui(mpz_class(p), N);
  std::vector<PadicScalar> out;
  for (uint64_t r0 : roots0) {
    if (mpz_class(poly.deriv(r0) % p) == 0)
      throw NonSeparableError("hensel_roots: non-separable reduction");
    mpz_class r = r0;
    for (int i = 0; i < 2 * N + 4; ++i) {
      mpz_class fx = poly.eval(r) % pN;
      if (fx == 0) break;
      r = (r - fx * invmod(poly.deriv(r) % pN, pN)) % pN;
      if (r < 0) r += pN;
    }
    require(poly.eval(r) % pN == 0, "hensel_roots: lift failed");
    out.emplace_back(p, N, r);
  }
  return out;
}

// All roots of a monic integer cubic in the given unramified cubic ring.
inline std::vector<PadicExtElem> hensel_roots(const Cubic& poly, const ExtDescPtr& d) {
  require(d->kind == ExtKind::unramified, "hensel_roots: unramified descriptor expected");
  uint64_t p = d->p;
  detail::Fp3 F{p, {mpz_class(d->m0 % p).get_ui(), mpz_class(d->m1 % p).get_ui(),
                    mpz_class(d->m2 % p).get_ui()}};
  uint64_t A2 = mpz_class((poly.a2 % p + p) % p).get_ui();
  uint64_t A1 = mpz_class((poly.a1 % p + p) % p).get_ui();
  uint64_t A0 = mpz_class((poly.a0 % p + p) % p).get_ui();
  std::vector<std::array<uint64_t, 3>> roots0;
  std::array<uint64_t, 3> x{};
  for (uint64_t i2 = 0; i2 < p; ++i2)
    for (uint64_t i1 = 0; i1 < p; ++i1)
      for (uint64_t i0 = 0; i0 < p; ++i0) {
        x = {i0, i1, i2};
        auto x2 = F.mul(x, x);
        auto x3 = F.mul(x2, x);
        std::array<uint64_t, 3> v;
        for (int k = 0; k < 3; ++k)
          v[k] = (x3[k] + A2 * x2[k] + A1 * x[k] + (k == 0 ? A0 : 0)) % p;
        if (v[0] == 0 && v[1] == 0 && v[2] == 0) roots0.push_back(x);
      }
  std::vector<PadicExtElem> out;
  for (const auto& r0 : roots0) {
    PadicExtElem r(d, mpz_class(r0[0]), mpz_class(r0[1]), mpz_class(r0[2]));
    PadicExtElem dfx = poly.deriv(r);
    if (!dfx.is_unit()) throw NonSeparableError("hensel_roots: non-separable reduction");
    for (int i = 0; i < 2 * d->N + 4; ++i) {
      PadicExtElem fx = poly.eval(r);
      if (fx.is_zero()) break;
      r = r - fx * poly.deriv(r).inv();
    }
    require(poly.eval(r).is_zero(), "hensel_roots: lift failed");
    out.push_back(r);
  }
  return out;
}

// One root of a monic integer cubic that is Eisenstein after centering, in the
// given ramified branch ring; nullopt when this branch does not contain one.
// Throws NonSeparableError when centering fails to produce an Eisenstein
// polynomial (the generator is not a local uniformizer candidate).
inline std::optional<PadicExtElem> ramified_root(const Cubic& poly, const ExtDescPtr& d) {
  require(d->kind == ExtKind::ramified, "ramified_root: ramified descriptor expected");
  uint32_t p = d->p;
  int N = d->N;
  // triple root mod p: r = -a2/3
  mpz_class inv3 = invmod(3, mpz_class(p));
  mpz_class r0 = ((-poly.a2 % p + p) % p) * inv3 % p;
  if (poly.eval(r0) % p != 0 || poly.deriv(r0) % p != 0)
    throw NonSeparableError("ramified_root: reduction mod p is not a perfect cube");
  // center: g(y) = poly(y + r0) = y^3 + g2 y^2 + g1 y + g0
  Cubic g;
  g.a2 = poly.a2 + 3 * r0;
  g.a1 = (3 * r0 + 2 * poly.a2) * r0 + poly.a1;
  g.a0 = poly.eval(r0);
  if (g.a0 % p != 0 || g.a1 % p != 0 || g.a2 % p != 0 || g.a0 % (mpz_class(p) * p) == 0)
    throw NonSeparableError("ramified_root: centered polynomial not Eisenstein");
  // branch match: need lambda^3 = -g0 / c mod p, c = p u^j
  mpz_class c = (d->pN - d->m0) % d->pN;
  mpz_class w = (-g.a0 / p % p + p) % p;
  w = w * invmod(c / p % p, mpz_class(p)) % p;
  uint64_t lam = 0;
  for (uint64_t l = 1; l < p; ++l)
    if (l * l % p * l % p == w.get_ui()) { lam = l; break; }
  if (lam == 0) return std::nullopt;  // root lives in another branch

  // digit lifting: corrections at valuation m-2 kill the order-m term of g(y)
  PadicExtElem y = PadicExtElem::gen(d).mul_int(lam);
  long target = 3L * N;
  for (int step = 0; step < 3 * N + 8; ++step) {
    PadicExtElem gy = g.eval(y);
    long m = gy.valuation_scaled();
    if (m >= target) break;
    require(m >= 4, "ramified_root: lifting invariant broken");
    PadicExtElem gpy = g.deriv(y);
    require(gpy.valuation_scaled() == 2, "ramified_root: derivative valuation != 2/3");
    uint64_t rdig = gy.lead_digit(), udig = gpy.lead_digit();
    mpz_class dd = mulmod_u64(p - rdig, powmod_u64(udig, p - 2, p), p);
    // delta = dd * t^(m-2)
    long k = m - 2;
    PadicExtElem tk = PadicExtElem(d, 0, 0, 0);
    {
      mpz_class cq = mpz_powm(c, mpz_class(k / 3), d->pN);
      std::array<mpz_class, 3> cc = {0, 0, 0};
      cc[k % 3] = cq * dd % d->pN;
      tk = PadicExtElem(d, cc[0], cc[1], cc[2]);
    }
    y = y + tk;
  }
  require(g.eval(y).valuation_scaled() >= target, "ramified_root: lift failed");
  // root of poly = y + r0
  PadicExtElem root = y + PadicExtElem(d, r0, 0, 0);
  require(poly.eval(root).valuation_scaled() >= target, "ramified_root: verification failed");
  return root;
}

// ---------------------------------------------------------------------------
// Determinants.
// ---------------------------------------------------------------------------

// Cofactor expansion; exact mod p^min(N).
template <typename Elem>
Elem det3(const std::array<std::array<Elem, 3>, 3>& M) {
  return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
         M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
         M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
}

inline PadicExtElem det3_checked(const std::array<std::array<PadicExtElem, 3>, 3>& M) {
  for (const auto& row : M)
    for (const auto& x : row)
      require(x.desc() == M[0][0].desc(), "det3: mixed descriptors");
  return det3(M);
}

}  // namespace ccreg
