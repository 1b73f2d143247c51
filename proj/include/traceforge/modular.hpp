#pragma once

// Chinese remaindering and rational reconstruction for multi-modular
// linear algebra.

#include <optional>

#include "traceforge/rings.hpp"

namespace traceforge {

/// Returns x mod (m1 * p) with x = r1 mod m1 and x = r2 mod p; r1 in [0, m1).
inline BigInt crt_combine(const BigInt& r1, const BigInt& m1, std::uint64_t r2, std::uint64_t p) {
  BigInt P(static_cast<unsigned long>(p));
  BigInt inv;
  BigInt m1_mod_p = m1 % P;
  if (mpz_invert(inv.get_mpz_t(), m1_mod_p.get_mpz_t(), P.get_mpz_t()) == 0)
    throw std::domain_error("crt_combine: moduli are not coprime");
  BigInt diff = (BigInt(static_cast<unsigned long>(r2)) - r1 % P) % P;
  if (diff < 0) diff += P;
  BigInt t = (diff * inv) % P;
  return r1 + m1 * t;
}

/// Finds n/d = a mod m with |n| <= N, 0 < d <= D, where N = D = floor(sqrt(m/2)).
/// Returns nullopt when no such fraction exists.
inline std::optional<Rational> rational_reconstruct(const BigInt& a, const BigInt& m) {
  BigInt bound;
  mpz_sqrt(bound.get_mpz_t(), BigInt(m / 2).get_mpz_t());
  BigInt r0 = m, r1 = a % m;
  if (r1 < 0) r1 += m;
  BigInt t0 = 0, t1 = 1;
  while (r1 > bound) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    BigInt t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  Rational q(r1, t1);
  q.canonicalize();
  return q;
}

}  // namespace traceforge
