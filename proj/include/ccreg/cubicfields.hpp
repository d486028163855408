#pragma once

// Enumeration of cyclic cubic fields by conductor via class field theory:
// conductors are products of distinct primes = 1 mod 3 times an optional 9,
// fields of conductor f correspond to index-3 subgroups of (Z/fZ)^* given by
// cubic characters modulo the identification chi ~ chi^2. Defining
// polynomials come from Gaussian periods.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ccreg/mpreal.hpp"
#include "ccreg/nt.hpp"
#include "ccreg/padic.hpp"

namespace ccreg {

struct Conductor {
  uint64_t f = 0;
  std::vector<uint64_t> factors;  // ascending; each is 9 or a prime = 1 mod 3
};

struct CubicCharacter {
  std::vector<int> exponents;  // one entry in {1,2} per factor; first is 1

  std::string label() const {
    std::string s;
    for (int e : exponents) s += char('0' + e);
    return s;
  }
};

struct CyclicCubicField {
  Conductor cond;
  CubicCharacter chi;
  Cubic poly;      // monic integer cubic from the Gaussian period
  mpz_class disc;  // field discriminant f^2

  std::string id() const { return std::to_string(cond.f) + ":" + chi.label(); }
};

enum class SplittingClass { split, inert, ramified };

inline const char* to_string(SplittingClass c) {
  switch (c) {
    case SplittingClass::split: return "split";
    case SplittingClass::inert: return "inert";
    case SplittingClass::ramified: return "ramified";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Conductor enumeration.
// ---------------------------------------------------------------------------

inline std::vector<Conductor> enumerate_conductors(uint64_t fmax) {
  std::vector<uint64_t> ps;
  if (fmax >= 7)
    for (uint32_t q : primes_up_to((uint32_t)std::min<uint64_t>(fmax, UINT32_MAX)))
      if (q % 3 == 1) ps.push_back(q);
  std::vector<Conductor> out;
  std::vector<uint64_t> cur;
  std::function<void(size_t, uint64_t)> rec = [&](size_t i, uint64_t prod) {
    for (size_t j = i; j < ps.size(); ++j) {
      if (prod > fmax / ps[j]) break;
      cur.push_back(ps[j]);
      Conductor c;
      c.f = prod * ps[j];
      c.factors = cur;
      std::sort(c.factors.begin(), c.factors.end());
      out.push_back(std::move(c));
      rec(j + 1, prod * ps[j]);
      cur.pop_back();
    }
  };
  rec(0, 1);
  if (fmax >= 9) {
    cur = {9};
    Conductor c9;
    c9.f = 9;
    c9.factors = {9};
    out.push_back(c9);
    std::function<void(size_t, uint64_t)> rec9 = [&](size_t i, uint64_t prod) {
      for (size_t j = i; j < ps.size(); ++j) {
        if (prod > fmax / ps[j]) break;
        cur.push_back(ps[j]);
        Conductor c;
        c.f = prod * ps[j];
        c.factors = cur;
        std::sort(c.factors.begin(), c.factors.end());
        out.push_back(std::move(c));
        rec9(j + 1, prod * ps[j]);
        cur.pop_back();
      }
    };
    rec9(0, 9);
  }
  std::sort(out.begin(), out.end(), [](const Conductor& a, const Conductor& b) { return a.f < b.f; });
  return out;
}

// Number of fields with f <= fmax, without building polynomials.
inline uint64_t count_fields_by_conductor(uint64_t fmax) {
  uint64_t total = 0;
  std::vector<uint64_t> ps;
  if (fmax >= 7)
    for (uint32_t q : primes_up_to((uint32_t)std::min<uint64_t>(fmax, UINT32_MAX)))
      if (q % 3 == 1) ps.push_back(q);
  std::function<void(size_t, uint64_t, int)> rec = [&](size_t i, uint64_t prod, int t) {
    for (size_t j = i; j < ps.size(); ++j) {
      if (prod > fmax / ps[j]) break;
      total += uint64_t(1) << t;  // 2^{(t+1)-1}
      rec(j + 1, prod * ps[j], t + 1);
    }
  };
  rec(0, 1, 0);
  if (fmax >= 9) {
    total += 1;
    rec(0, 9, 1);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Characters and Gaussian periods.
// ---------------------------------------------------------------------------

namespace detail {

// chi_q(x) = dlog_{g_q}(x) mod 3 for the smallest primitive root g_q
// (generator 2 for the factor 9); values tabulated for all residues.
inline std::vector<int8_t> local_char_table(uint64_t q) {
  uint64_t g = (q == 9) ? 2 : primitive_root(q);
  uint64_t phi = (q == 9) ? 6 : q - 1;
  std::vector<int8_t> tab(q, -1);
  uint64_t v = 1;
  for (uint64_t k = 0; k < phi; ++k) {
    tab[v] = int8_t(k % 3);
    v = v * g % q;
  }
  return tab;
}

inline std::vector<CubicCharacter> canonical_characters(size_t nfactors) {
  std::vector<CubicCharacter> out;
  size_t m = nfactors ? (size_t(1) << (nfactors - 1)) : 0;
  for (size_t mask = 0; mask < m; ++mask) {
    CubicCharacter c;
    c.exponents.assign(nfactors, 1);
    for (size_t i = 1; i < nfactors; ++i)
      if (mask >> (i - 1) & 1) c.exponents[i] = 2;
    out.push_back(std::move(c));
  }
  return out;
}

struct PeriodSums {
  long double re[3] = {0, 0, 0}, im[3] = {0, 0, 0};
  long double c_re[3] = {0, 0, 0}, c_im[3] = {0, 0, 0};  // Kahan compensation
  void add(int coset, long double x, long double y) {
    long double t = x - c_re[coset];
    long double s = re[coset] + t;
    c_re[coset] = (s - re[coset]) - t;
    re[coset] = s;
    t = y - c_im[coset];
    s = im[coset] + t;
    c_im[coset] = (s - im[coset]) - t;
    im[coset] = s;
  }
};

inline int mu_of_conductor(const Conductor& c) {
  for (uint64_t q : c.factors)
    if (q == 9) return 0;
  return (c.factors.size() % 2 == 0) ? 1 : -1;
}

struct PeriodResult {
  Cubic poly;
  double periods[3] = {0, 0, 0};  // numeric roots of poly (the three periods)
  bool certified_rounding = false;
};

// One pass over (Z/fZ)^*, accumulating all characters' period sums at once.
// Roots of unity advance by incremental rotation, reseeded from sin/cos every
// 4096 steps; the rounding-error budget is tracked conservatively.
inline std::vector<PeriodResult> period_polynomials_ld(const Conductor& cond,
                                                       const std::vector<CubicCharacter>& chars) {
  const uint64_t f = cond.f;
  const size_t nf = cond.factors.size();
  std::vector<std::vector<int8_t>> tabs;
  tabs.reserve(nf);
  for (uint64_t q : cond.factors) tabs.push_back(local_char_table(q));

  std::vector<PeriodSums> sums(chars.size());
  const long double tau = 2.0L * 3.14159265358979323846264338327950288L;
  const long double step_re = std::cos(tau / (long double)f), step_im = std::sin(tau / (long double)f);
  long double cur_re = 1.0L, cur_im = 0.0L;
  uint64_t nunits = 0;
  std::vector<int> locs(nf);
  for (uint64_t u = 1; u < f; ++u) {
    if ((u & 4095) == 0) {
      long double ang = tau * (long double)u / (long double)f;
      cur_re = std::cos(ang);
      cur_im = std::sin(ang);
    } else {
      long double nr = cur_re * step_re - cur_im * step_im;
      cur_im = cur_re * step_im + cur_im * step_re;
      cur_re = nr;
    }
    bool unit = true;
    for (size_t i = 0; i < nf; ++i) {
      int8_t v = tabs[i][u % cond.factors[i]];
      if (v < 0) { unit = false; break; }
      locs[i] = v;
    }
    if (!unit) continue;
    ++nunits;
    for (size_t ci = 0; ci < chars.size(); ++ci) {
      int coset = 0;
      for (size_t i = 0; i < nf; ++i) coset += chars[ci].exponents[i] * locs[i];
      sums[ci].add(coset % 3, cur_re, cur_im);
    }
  }

  // per-term error: rotation drift (<= 4098 eps) + Kahan (2 eps), |term| <= 1
  const long double eps = 1.0842e-19L;
  long double per_term = 4100.0L * eps;
  long double eta_err = (long double)nunits * per_term;

  std::vector<PeriodResult> out;
  for (auto& s : sums) {
    std::complex<long double> h0(s.re[0], s.im[0]), h1(s.re[1], s.im[1]), h2(s.re[2], s.im[2]);
    auto e1 = h0 + h1 + h2;
    auto e2 = h0 * h1 + h0 * h2 + h1 * h2;
    auto e3 = h0 * h1 * h2;
    long double a0 = std::abs(h0), a1 = std::abs(h1), a2 = std::abs(h2);
    long double b1 = 3 * eta_err;
    long double b2 = 2 * (a0 + a1 + a2) * eta_err + 3 * std::abs(e2) * eps;
    long double b3 = (a0 * a1 + a0 * a2 + a1 * a2) * eta_err + 4 * std::abs(e3) * eps;
    PeriodResult r;
    bool ok = true;
    auto rnd = [&](std::complex<long double> z, long double bound) {
      long double n = std::roundl(z.real());
      if (std::abs(z.real() - n) + bound > 0.25L || std::abs(z.imag()) + bound > 0.25L) ok = false;
      return n;
    };
    long double v1 = rnd(e1, b1), v2 = rnd(e2, b2), v3 = rnd(e3, b3);
    if (ok) {
      r.poly.a2 = mpz_class(std::to_string((long long)(-v1)));
      r.poly.a1 = mpz_class(std::to_string((long long)v2));
      r.poly.a0 = mpz_class(std::to_string((long long)(-v3)));
      r.periods[0] = (double)s.re[0];
      r.periods[1] = (double)s.re[1];
      r.periods[2] = (double)s.re[2];
      r.certified_rounding = true;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// MPFR fallback at explicit precision; used when the long double error budget
// is exceeded.
inline std::vector<PeriodResult> period_polynomials_mpfr(const Conductor& cond,
                                                         const std::vector<CubicCharacter>& chars,
                                                         mpfr_prec_t prec) {
  const uint64_t f = cond.f;
  const size_t nf = cond.factors.size();
  std::vector<std::vector<int8_t>> tabs;
  for (uint64_t q : cond.factors) tabs.push_back(local_char_table(q));
  MpReal tau = MpReal::pi(prec) * MpReal::from(2L, prec);
  std::vector<std::array<MpReal, 3>> re(chars.size()), im(chars.size());
  for (size_t ci = 0; ci < chars.size(); ++ci)
    for (int j = 0; j < 3; ++j) { re[ci][j] = MpReal(prec); im[ci][j] = MpReal(prec); }
  std::vector<int> locs(nf);
  for (uint64_t u = 1; u < f; ++u) {
    bool unit = true;
    for (size_t i = 0; i < nf; ++i) {
      int8_t v = tabs[i][u % cond.factors[i]];
      if (v < 0) { unit = false; break; }
      locs[i] = v;
    }
    if (!unit) continue;
    MpReal ang = tau * MpReal::from((long)u, prec) / MpReal::from((long)f, prec);
    MpReal cr = ang.cos(), ci_ = ang.sin();
    for (size_t ci = 0; ci < chars.size(); ++ci) {
      int coset = 0;
      for (size_t i = 0; i < nf; ++i) coset += chars[ci].exponents[i] * locs[i];
      coset %= 3;
      re[ci][coset] += cr;
      im[ci][coset] += ci_;
    }
  }
  std::vector<PeriodResult> out;
  for (size_t ci = 0; ci < chars.size(); ++ci) {
    // elementary symmetric functions of the three (real) period values
    MpReal h[3];
    for (int j = 0; j < 3; ++j) h[j] = re[ci][j];
    MpReal e1 = h[0] + h[1] + h[2];
    MpReal e2 = h[0] * h[1] + h[0] * h[2] + h[1] * h[2];
    MpReal e3 = h[0] * h[1] * h[2];
    PeriodResult r;
    r.poly.a2 = -e1.round();
    r.poly.a1 = e2.round();
    r.poly.a0 = -e3.round();
    MpReal q(prec);
    auto close = [&](const MpReal& x, const mpz_class& n) {
      return (x - MpReal::from(n, prec)).abs() < MpReal::from(0.25, prec);
    };
    r.certified_rounding = close(e1, -r.poly.a2) && close(e2, r.poly.a1) && close(e3, -r.poly.a0);
    for (int j = 0; j < 3; ++j)
      if (!(im[ci][j].abs() < MpReal::from(0.25, prec))) r.certified_rounding = false;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All fields of a conductor, one unit-group pass for every character at once.
// Each polynomial is certified: rounding error budget below 0.25, constant
// Ramanujan-sum check, irreducibility, square discriminant divisible by f^2.
inline std::vector<CyclicCubicField> fields_for_conductor(const Conductor& cond) {
  auto chars = detail::canonical_characters(cond.factors.size());
  auto res = detail::period_polynomials_ld(cond, chars);
  for (int attempt = 0; attempt < 4; ++attempt) {
    bool all_ok = true;
    for (auto& r : res) all_ok = all_ok && r.certified_rounding;
    if (all_ok) break;
    res = detail::period_polynomials_mpfr(cond, chars, mpfr_prec_t(128) << attempt);
  }
  std::vector<CyclicCubicField> out;
  for (size_t ci = 0; ci < chars.size(); ++ci) {
    const auto& r = res[ci];
    if (!r.certified_rounding)
      throw CertificationError("period rounding not certified for f=" + std::to_string(cond.f));
    // constant check: trace of the full unit sum is the Moebius value
    if (-r.poly.a2 != detail::mu_of_conductor(cond))
      throw CertificationError("period trace != mu(f) for f=" + std::to_string(cond.f));
    // irreducibility of a monic integer cubic: a rational root would be an
    // integer sitting at one of the three real roots, i.e. the periods
    for (double rho : r.periods) {
      mpz_class near((long)std::llround(rho));
      if (r.poly.eval(near) == 0)
        throw CertificationError("period polynomial reducible for f=" + std::to_string(cond.f));
    }
    mpz_class d = r.poly.disc();
    mpz_class sq;
    if (!mpz_perfect_square(d, &sq))
      throw CertificationError("polynomial discriminant not a square for f=" + std::to_string(cond.f));
    if (sq % mpz_class((unsigned long)cond.f) != 0)
      throw CertificationError("discriminant not divisible by f^2 for f=" + std::to_string(cond.f));
    CyclicCubicField K;
    K.cond = cond;
    K.chi = chars[ci];
    K.poly = r.poly;
    K.disc = mpz_class((unsigned long)cond.f) * mpz_class((unsigned long)cond.f);
    out.push_back(std::move(K));
  }
  return out;
}

inline Cubic defining_polynomial(const Conductor& cond, const CubicCharacter& chi) {
  auto fields = fields_for_conductor(cond);
  for (auto& K : fields)
    if (K.chi.exponents == chi.exponents) return K.poly;
  throw PadicError("defining_polynomial: character not canonical for this conductor");
}

// All fields with f^2 <= D, grouped by ascending conductor.
inline std::vector<CyclicCubicField> enumerate_fields(uint64_t D) {
  uint64_t fmax = (uint64_t)std::sqrt((double)D);
  while (fmax * fmax > D) --fmax;
  while ((fmax + 1) * (fmax + 1) <= D) ++fmax;
  std::vector<CyclicCubicField> out;
  for (const auto& c : enumerate_conductors(fmax)) {
    auto fs = fields_for_conductor(c);
    for (auto& K : fs) out.push_back(std::move(K));
  }
  return out;
}

inline void for_each_conductor(uint64_t D, const std::function<void(const Conductor&)>& fn) {
  uint64_t fmax = (uint64_t)std::sqrt((double)D);
  while (fmax * fmax > D) --fmax;
  while ((fmax + 1) * (fmax + 1) <= D) ++fmax;
  for (const auto& c : enumerate_conductors(fmax)) fn(c);
}

// ---------------------------------------------------------------------------
// Splitting behavior.
// ---------------------------------------------------------------------------

inline SplittingClass splitting_class(const CyclicCubicField& K, uint32_t p) {
  require(p > 3 && is_prime_u64(p), "splitting_class: p must be a prime > 3");
  if (K.cond.f % p == 0) return SplittingClass::ramified;
  int chi = 0;
  for (size_t i = 0; i < K.cond.factors.size(); ++i) {
    uint64_t q = K.cond.factors[i];
    uint64_t g = (q == 9) ? 2 : primitive_root(q);
    uint64_t phi = (q == 9) ? 6 : q - 1;
    chi += K.chi.exponents[i] * int(dlog_bsgs(g, p % q, q, phi) % 3);
  }
  SplittingClass cls = (chi % 3 == 0) ? SplittingClass::split : SplittingClass::inert;
  // cross-check against the root count of the polynomial mod p whenever the
  // reduction is separable
  if (K.poly.disc() % p != 0) {
    int roots = 0;
    for (uint64_t r = 0; r < p; ++r)
      if (K.poly.eval(r) % p == 0) ++roots;
    int expect = (cls == SplittingClass::split) ? 3 : 0;
    require(roots == expect, "splitting_class: character and root count disagree");
  }
  return cls;
}

// ---------------------------------------------------------------------------
// Export.
// ---------------------------------------------------------------------------

inline void export_fields_csv(std::ostream& os, const std::vector<CyclicCubicField>& fields) {
  os << "conductor,char,deg3_coeff_c2,c1,c0,discriminant\n";
  for (const auto& K : fields) {
    os << K.cond.f << ',' << K.chi.label() << ',' << K.poly.a2 << ',' << K.poly.a1 << ','
       << K.poly.a0 << ',' << K.disc << '\n';
  }
}

}  // namespace ccreg
