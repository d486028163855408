#pragma once

// Elementary number theory on machine words plus a few GMP helpers.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

namespace ccreg {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((__uint128_t)a * b % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
  if (m == 1) return 0;
  uint64_t r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<uint32_t> primes_up_to(uint32_t n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<uint32_t> ps;
  for (uint32_t i = 2; i <= n; ++i) {
    if (!comp[i]) {
      ps.push_back(i);
      for (uint64_t j = (uint64_t)i * i; j <= n; j += i) comp[j] = true;
    }
  }
  return ps;
}

inline std::vector<std::pair<uint64_t, int>> factor_u64(uint64_t n) {
  std::vector<std::pair<uint64_t, int>> fs;
  for (uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) { n /= d; ++e; }
      fs.emplace_back(d, e);
    }
  }
  if (n > 1) fs.emplace_back(n, 1);
  return fs;
}

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) { uint64_t t = a % b; a = b; b = t; }
  return a;
}

// Multiplicative order of g modulo m, given phi = #(Z/m)^*.
inline uint64_t mult_order(uint64_t g, uint64_t m, uint64_t phi) {
  uint64_t ord = phi;
  for (auto [q, e] : factor_u64(phi)) {
    (void)e;
    while (ord % q == 0 && powmod_u64(g, ord / q, m) == 1) ord /= q;
  }
  return ord;
}

// Smallest primitive root modulo m, for m an odd prime or m = 9.
inline uint64_t primitive_root(uint64_t m) {
  uint64_t phi = (m == 9) ? 6 : m - 1;
  for (uint64_t g = 2; g < m; ++g) {
    if (gcd_u64(g, m) != 1) continue;
    if (mult_order(g, m, phi) == phi) return g;
  }
  throw std::runtime_error("no primitive root mod " + std::to_string(m));
}

// Discrete log of x base g modulo m (g of order `ord`), baby-step giant-step.
inline uint64_t dlog_bsgs(uint64_t g, uint64_t x, uint64_t m, uint64_t ord) {
  uint64_t s = 1;
  while (s * s < ord) ++s;
  std::unordered_map<uint64_t, uint64_t> baby;
  baby.reserve(s * 2);
  uint64_t cur = 1;
  for (uint64_t j = 0; j < s; ++j) {
    baby.emplace(cur, j);
    cur = mulmod_u64(cur, g, m);
  }
  uint64_t ginv_s = powmod_u64(g, ord - (s % ord), m);  // g^{-s}
  cur = x % m;
  for (uint64_t i = 0; i <= s; ++i) {
    auto it = baby.find(cur);
    if (it != baby.end()) return (i * s + it->second) % ord;
    cur = mulmod_u64(cur, ginv_s, m);
  }
  throw std::runtime_error("dlog: not in cyclic group");
}

inline bool is_cube_mod(uint64_t x, uint64_t p) {
  // p prime. For p != 1 mod 3 cubing is a bijection.
  if (p % 3 != 1) return true;
  return powmod_u64(x % p, (p - 1) / 3, p) == 1;
}

// Smallest unit that is not a cube mod p (requires p = 1 mod 3).
inline uint64_t smallest_noncube(uint64_t p) {
  for (uint64_t u = 2; u < p; ++u)
    if (!is_cube_mod(u, p)) return u;
  throw std::runtime_error("no non-cube mod " + std::to_string(p));
}

// ---- GMP helpers ----

inline mpz_class mpz_pow_ui(const mpz_class& b, unsigned long e) {
  mpz_class r;
  ::mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline mpz_class mpz_powm(const mpz_class& b, const mpz_class& e, const mpz_class& m) {
  mpz_class r;
  ::mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline mpz_class invmod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    throw std::domain_error("invmod: not invertible");
  return r;
}

// Largest v with p^v | n (n != 0).
inline long mpz_val(const mpz_class& n, unsigned long p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  mpz_class q;
  return mpz_remove(q.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t());
}

inline bool mpz_perfect_square(const mpz_class& n, mpz_class* root = nullptr) {
  if (n < 0) return false;
  mpz_class r = sqrt(n);
  if (r * r == n) {
    if (root) *root = r;
    return true;
  }
  return false;
}

// ---- counter-based PRNG (Philox 4x32-10) ----

// Deterministic, splittable by counter partitioning; used by the Monte Carlo
// samplers so that reports are reproducible bit-for-bit from (seed, counter).
class Philox {
 public:
  explicit Philox(uint64_t seed) : key0_(uint32_t(seed)), key1_(uint32_t(seed >> 32)) {}

  // 128 bits of output for a 128-bit counter, 10 rounds.
  void block(uint64_t ctr_lo, uint64_t ctr_hi, uint32_t out[4]) const {
    uint32_t c0 = uint32_t(ctr_lo), c1 = uint32_t(ctr_lo >> 32);
    uint32_t c2 = uint32_t(ctr_hi), c3 = uint32_t(ctr_hi >> 32);
    uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      uint64_t p0 = (uint64_t)0xD2511F53u * c0;
      uint64_t p1 = (uint64_t)0xCD9E8D57u * c2;
      uint32_t h0 = uint32_t(p0 >> 32), l0 = uint32_t(p0);
      uint32_t h1 = uint32_t(p1 >> 32), l1 = uint32_t(p1);
      uint32_t n0 = h1 ^ c1 ^ k0;
      uint32_t n1 = l1;
      uint32_t n2 = h0 ^ c3 ^ k1;
      uint32_t n3 = l0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
  }

  // Uniform integer in [0, m) for the given counter, by rejection on
  // fixed-width blocks (the sub-counter walks the high word).
  mpz_class uniform(const mpz_class& m, uint64_t ctr) const {
    size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    size_t words = (bits + 63) / 64 + 1;  // one extra word shrinks rejection odds
    mpz_class bound = mpz_class(1) << (words * 64);
    mpz_class limit = bound - bound % m;
    for (uint64_t attempt = 0;; ++attempt) {
      mpz_class v = 0;
      for (size_t w = 0; w < words; w += 2) {
        uint32_t o[4];
        block(ctr, (attempt << 32) | (w / 2), o);
        mpz_class chunk = ((mpz_class((uint64_t)o[3] << 32 | o[2]) << 64) |
                           mpz_class((uint64_t)o[1] << 32 | o[0]));
        v = (v << 128) | chunk;
      }
      v >>= (words % 2) ? 64 : 0;
      mpz_class mask = (mpz_class(1) << (words * 64)) - 1;
      v &= mask;
      if (v < limit) return v % m;
    }
  }

 private:
  uint32_t key0_, key1_;
};

}  // namespace ccreg
