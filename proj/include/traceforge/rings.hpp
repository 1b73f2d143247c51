#pragma once

// Coefficient rings used by the polynomial layer.
//
// A ring is a small value type exposing `value_type` and the operations
// zero/one/add/sub/neg/mul/is_zero/equal. Polynomials carry their ring by
// value so that modular rings can hold a runtime modulus.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace traceforge {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Builds a canonical rational from numerator and denominator.
inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "n" or "n/d" (optional sign on n) into a canonical rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::domain_error("rational with zero denominator: " + s);
  q.canonicalize();
  return q;
}

/// Always "num/den" with den > 0 (the cache and certificate format).
inline std::string rational_to_fraction(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// "num" when integral, else "num/den".
inline std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return rational_to_fraction(q);
}

/// The field of rationals.
struct QQ {
  using value_type = Rational;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& a) { return sgn(a) == 0; }
  static Rational add(const Rational& a, const Rational& b) { return a + b; }
  static Rational sub(const Rational& a, const Rational& b) { return a - b; }
  static Rational neg(const Rational& a) { return -a; }
  static Rational mul(const Rational& a, const Rational& b) { return a * b; }
  static void add_mul(Rational& acc, const Rational& a, const Rational& b) {
    // acc += a*b without a named temporary per call
    mpq_t t;
    mpq_init(t);
    mpq_mul(t, a.get_mpq_t(), b.get_mpq_t());
    mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), t);
    mpq_clear(t);
  }
  static Rational from_int(long long v) { return Rational(static_cast<long>(v)); }
  static Rational from_rational(const Rational& q) { return q; }
  static std::string to_string(const Rational& a) { return rational_to_string(a); }
  friend bool operator==(const QQ&, const QQ&) { return true; }
};

// ---------------------------------------------------------------------------
// Word-sized prime fields.

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic witness set for 64-bit integers
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

/// The prime field Z/pZ for an odd prime p < 2^62.
struct Zp {
  using value_type = std::uint64_t;
  std::uint64_t p = 0;

  Zp() = default;
  explicit Zp(std::uint64_t prime) : p(prime) {}

  std::uint64_t zero() const { return 0; }
  std::uint64_t one() const { return 1; }
  static bool is_zero(std::uint64_t a) { return a == 0; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return detail::mulmod(a, b, p); }
  void add_mul(std::uint64_t& acc, std::uint64_t a, std::uint64_t b) const { acc = add(acc, mul(a, b)); }
  std::uint64_t inv(std::uint64_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero modulo p");
    return detail::powmod(a, p - 2, p);
  }
  std::uint64_t from_int(long long v) const {
    long long r = v % static_cast<long long>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(p) : r);
  }
  std::uint64_t from_bigint(const BigInt& z) const {
    static_assert(sizeof(unsigned long) == 8, "requires 64-bit unsigned long");
    return mpz_fdiv_ui(z.get_mpz_t(), p);
  }
  /// Image of a rational; throws when p divides the denominator.
  std::uint64_t from_rational(const Rational& q) const {
    std::uint64_t d = from_bigint(q.get_den());
    if (d == 0) throw std::domain_error("denominator vanishes modulo p");
    return mul(from_bigint(q.get_num()), inv(d));
  }
  static std::string to_string(std::uint64_t a) { return std::to_string(a); }
  friend bool operator==(const Zp& a, const Zp& b) { return a.p == b.p; }
};

/// Word-sized primes below 2^62, largest first, deterministic.
inline std::uint64_t nth_prime_below_2_62(std::size_t index) {
  static thread_local std::vector<std::uint64_t> found;
  std::uint64_t candidate = found.empty() ? (1ull << 62) - 1 : found.back() - 2;
  while (found.size() <= index) {
    if (candidate % 2 == 0) --candidate;
    while (!detail::is_prime_u64(candidate)) candidate -= 2;
    found.push_back(candidate);
    candidate -= 2;
  }
  return found[index];
}

}  // namespace traceforge
