#pragma once

// Sparse multivariate polynomials over an exact coefficient ring, plus
// truncated bivariate power series in (t, u).

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "traceforge/rings.hpp"

namespace traceforge {

class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// VarSet

/// An immutable ordered list of distinct variable names.
class VarSet {
 public:
  static constexpr std::size_t kMaxVars = 24;

  VarSet() : names_(std::make_shared<const std::vector<std::string>>()) {}
  explicit VarSet(std::vector<std::string> names) {
    if (names.size() > kMaxVars) throw PolyError("VarSet supports at most 24 variables");
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j]) throw PolyError("duplicate variable name: " + names[i]);
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }

  std::size_t size() const { return names_->size(); }
  const std::string& name(std::size_t i) const { return names_->at(i); }
  const std::vector<std::string>& names() const { return *names_; }
  std::optional<std::size_t> index_of(std::string_view n) const {
    for (std::size_t i = 0; i < names_->size(); ++i)
      if ((*names_)[i] == n) return i;
    return std::nullopt;
  }

  friend bool operator==(const VarSet& a, const VarSet& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

// ---------------------------------------------------------------------------
// Monomial

/// Exponent vector packed as 8-bit lanes in three machine words.
/// Multiplication of monomials is lane-wise addition; callers keep every
/// exponent below 256.
class Monomial {
 public:
  Monomial() = default;

  static Monomial from_exponents(const std::vector<int>& e) {
    if (e.size() > VarSet::kMaxVars) throw PolyError("too many exponents");
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0 || e[i] > 255) throw PolyError("exponent out of range");
      m.set(i, e[i]);
    }
    return m;
  }
  static Monomial variable(std::size_t i, int power = 1) {
    Monomial m;
    m.set(i, power);
    return m;
  }

  int exponent(std::size_t i) const { return static_cast<int>((w_[i / 8] >> (8 * (i % 8))) & 0xff); }
  void set(std::size_t i, int e) {
    const std::uint64_t shift = 8 * (i % 8);
    w_[i / 8] = (w_[i / 8] & ~(0xffull << shift)) | (static_cast<std::uint64_t>(e) << shift);
  }
  int total_degree() const {
    int d = 0;
    for (auto w : w_)
      for (int k = 0; k < 8; ++k) d += static_cast<int>((w >> (8 * k)) & 0xff);
    return d;
  }
  /// Sum of exponents of the variables in [lo, hi).
  int degree_in(std::size_t lo, std::size_t hi) const {
    int d = 0;
    for (std::size_t i = lo; i < hi; ++i) d += exponent(i);
    return d;
  }
  std::vector<int> exponents(std::size_t n) const {
    std::vector<int> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = exponent(i);
    return e;
  }
  bool is_one() const { return w_[0] == 0 && w_[1] == 0 && w_[2] == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int k = 0; k < 3; ++k) m.w_[k] = a.w_[k] + b.w_[k];
    return m;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.w_ == b.w_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  /// Graded lexicographic comparison: true when a is strictly greater.
  static bool grlex_greater(const Monomial& a, const Monomial& b, std::size_t nvars) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db;
    for (std::size_t i = 0; i < nvars; ++i) {
      int ea = a.exponent(i), eb = b.exponent(i);
      if (ea != eb) return ea > eb;
    }
    return false;
  }

  std::size_t hash() const {
    std::uint64_t h = w_[0] * 0x9E3779B97F4A7C15ull;
    h ^= (w_[1] + 0x632BE59BD9B4E019ull) * 0xC2B2AE3D27D4EB4Full;
    h ^= (w_[2] + 0x85EBCA77C2B2AE63ull) * 0x165667B19E3779F9ull;
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
  }

 private:
  std::array<std::uint64_t, 3> w_{};
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// ---------------------------------------------------------------------------
// Poly

/// A polynomial with coefficients in `Ring`, canonical: no stored zero.
template <class Ring>
class Poly {
 public:
  using Coeff = typename Ring::value_type;
  using TermMap = absl::flat_hash_map<Monomial, Coeff, MonomialHash>;

  Poly() = default;
  explicit Poly(VarSet vars, Ring ring = Ring{}) : vars_(std::move(vars)), ring_(ring) {}

  static Poly constant(const VarSet& vars, const Coeff& c, Ring ring = Ring{}) {
    Poly p(vars, ring);
    p.add_term(Monomial{}, c);
    return p;
  }
  static Poly variable(const VarSet& vars, std::size_t i, Ring ring = Ring{}) {
    if (i >= vars.size()) throw PolyError("variable index out of range");
    Poly p(vars, ring);
    p.add_term(Monomial::variable(i), ring.one());
    return p;
  }
  static Poly variable(const VarSet& vars, std::string_view name, Ring ring = Ring{}) {
    auto i = vars.index_of(name);
    if (!i) throw PolyError("unknown variable: " + std::string(name));
    return variable(vars, *i, ring);
  }

  const VarSet& vars() const { return vars_; }
  const Ring& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  void reserve(std::size_t n) { terms_.reserve(n); }

  Coeff coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  /// Accumulates c into the coefficient of m, erasing on cancellation.
  void add_term(const Monomial& m, const Coeff& c) {
    if (Ring::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = ring_.add(it->second, c);
      if (Ring::is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, ring_.neg(c));
    return *this;
  }
  Poly operator-() const {
    Poly r(vars_, ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, ring_.neg(c));
    return r;
  }
  Poly scaled(const Coeff& s) const {
    Poly r(vars_, ring_);
    if (Ring::is_zero(s)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      Coeff v = ring_.mul(c, s);
      if (!Ring::is_zero(v)) r.terms_.emplace(m, std::move(v));
    }
    return r;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) { return multiply(a, b); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  static Poly multiply(const Poly& a, const Poly& b) {
    a.check_compatible(b);
    const Poly& small = a.size() <= b.size() ? a : b;
    const Poly& big = a.size() <= b.size() ? b : a;
    Poly r(a.vars_, a.ring_);
    if (small.is_zero()) return r;
    r.terms_.reserve(big.size());
    for (const auto& [ms, cs] : small.terms_) {
      for (const auto& [mb, cb] : big.terms_) {
        auto [it, inserted] = r.terms_.try_emplace(ms * mb, r.ring_.zero());
        r.ring_.add_mul(it->second, cs, cb);
      }
    }
    absl::erase_if(r.terms_, [](const auto& kv) { return Ring::is_zero(kv.second); });
    return r;
  }

  Poly pow(int e) const {
    if (e < 0) throw PolyError("negative power");
    Poly r = constant(vars_, ring_.one(), ring_);
    for (int k = 0; k < e; ++k) r = multiply(r, *this);
    return r;
  }

  /// (x-degree, y-degree) when every term has the same split degrees.
  /// Variables [0, split) count toward the first component.
  std::optional<std::pair<int, int>> bidegree(std::size_t split) const {
    std::optional<std::pair<int, int>> bd;
    for (const auto& [m, c] : terms_) {
      std::pair<int, int> d{m.degree_in(0, split), m.degree_in(split, vars_.size())};
      if (bd && *bd != d) return std::nullopt;
      bd = d;
    }
    return bd;
  }

  /// Terms sorted graded-lex descending.
  std::vector<std::pair<Monomial, Coeff>> sorted_terms() const {
    std::vector<std::pair<Monomial, Coeff>> v(terms_.begin(), terms_.end());
    const std::size_t n = vars_.size();
    std::sort(v.begin(), v.end(),
              [n](const auto& x, const auto& y) { return Monomial::grlex_greater(x.first, y.first, n); });
    return v;
  }

  /// Image under a ring homomorphism given as a coefficient map.
  template <class Target, class F>
  Poly<Target> map_coefficients(Target target, F&& f) const {
    Poly<Target> r(vars_, target);
    r.reserve(terms_.size());
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : sorted_terms()) {
      std::string cs = Ring::to_string(c);
      if (!first) os << (cs[0] == '-' ? " - " : " + ");
      else if (cs[0] == '-') os << "-";
      if (cs[0] == '-') cs.erase(0, 1);
      first = false;
      bool unit = cs == "1";
      if (!unit || m.is_one()) os << cs;
      bool need_star = !unit;
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        int e = m.exponent(i);
        if (e == 0) continue;
        if (need_star) os << "*";
        os << vars_.name(i);
        if (e > 1) os << "^" << e;
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  void check_compatible(const Poly& o) const {
    if (!(vars_ == o.vars_)) throw PolyError("polynomials over different VarSets");
  }

  VarSet vars_;
  Ring ring_{};
  TermMap terms_;
};

using CommPoly = Poly<QQ>;
using ModPoly = Poly<Zp>;

inline CommPoly poly_add(const CommPoly& a, const CommPoly& b) { return a + b; }
inline CommPoly poly_mul(const CommPoly& a, const CommPoly& b) { return a * b; }

// ---------------------------------------------------------------------------
// Canonical text format: one term per line, "<num>/<den> e1 ... en",
// graded-lex descending.

inline void write_canonical(std::ostream& os, const CommPoly& p) {
  const std::size_t n = p.vars().size();
  for (const auto& [m, c] : p.sorted_terms()) {
    os << rational_to_fraction(c);
    for (std::size_t i = 0; i < n; ++i) os << ' ' << m.exponent(i);
    os << '\n';
  }
}

inline std::string to_canonical_text(const CommPoly& p) {
  std::ostringstream os;
  write_canonical(os, p);
  return os.str();
}

inline CommPoly read_canonical(std::istream& is, const VarSet& vars) {
  CommPoly p(vars);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string coef;
    ls >> coef;
    std::vector<int> e(vars.size());
    for (auto& x : e)
      if (!(ls >> x)) throw PolyError("canonical text: short exponent list on line " + std::to_string(lineno));
    std::string extra;
    if (ls >> extra) throw PolyError("canonical text: trailing data on line " + std::to_string(lineno));
    p.add_term(Monomial::from_exponents(e), parse_rational(coef));
  }
  return p;
}

inline CommPoly from_canonical_text(const std::string& text, const VarSet& vars) {
  std::istringstream is(text);
  return read_canonical(is, vars);
}

// ---------------------------------------------------------------------------
// BiSeries

/// Bivariate power series in t, u truncated to total degree <= bound.
class BiSeries {
 public:
  explicit BiSeries(int bound = 14) : bound_(bound) {
    if (bound < 0) throw PolyError("negative truncation bound");
    coeffs_.assign(static_cast<std::size_t>((bound + 1) * (bound + 1)), Rational(0));
  }

  static BiSeries one(int bound) {
    BiSeries s(bound);
    s.at(0, 0) = 1;
    return s;
  }
  static BiSeries monomial(int p, int q, const Rational& c, int bound) {
    BiSeries s(bound);
    if (p + q <= bound) s.at(p, q) = c;
    return s;
  }

  int bound() const { return bound_; }

  Rational coeff(int p, int q) const {
    if (p < 0 || q < 0 || p + q > bound_) return Rational(0);
    return coeffs_[index(p, q)];
  }
  Rational& at(int p, int q) {
    if (p < 0 || q < 0 || p + q > bound_) throw PolyError("series index beyond truncation bound");
    return coeffs_[index(p, q)];
  }

  BiSeries& operator+=(const BiSeries& o) {
    check_bound(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  BiSeries& operator-=(const BiSeries& o) {
    check_bound(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
  friend BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b) { return series_mul(a, b); }
  friend bool operator==(const BiSeries& a, const BiSeries& b) {
    return a.bound_ == b.bound_ && a.coeffs_ == b.coeffs_;
  }

  friend BiSeries series_mul(const BiSeries& a, const BiSeries& b) {
    a.check_bound(b);
    const int d = a.bound_;
    BiSeries r(d);
    for (int p1 = 0; p1 <= d; ++p1)
      for (int q1 = 0; p1 + q1 <= d; ++q1) {
        const Rational& c1 = a.coeffs_[a.index(p1, q1)];
        if (sgn(c1) == 0) continue;
        for (int p2 = 0; p1 + q1 + p2 <= d; ++p2)
          for (int q2 = 0; p1 + q1 + p2 + q2 <= d; ++q2) {
            const Rational& c2 = b.coeffs_[b.index(p2, q2)];
            if (sgn(c2) == 0) continue;
            r.coeffs_[r.index(p1 + p2, q1 + q2)] += c1 * c2;
          }
      }
    return r;
  }

  /// Nonzero coefficients as (p, q, c), ordered by total degree then p descending.
  std::vector<std::tuple<int, int, Rational>> nonzero_terms() const {
    std::vector<std::tuple<int, int, Rational>> v;
    for (int total = 0; total <= bound_; ++total)
      for (int p = total; p >= 0; --p) {
        const Rational& c = coeffs_[index(p, total - p)];
        if (sgn(c) != 0) v.emplace_back(p, total - p, c);
      }
    return v;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, q, c] : nonzero_terms()) {
      if (!first) os << " + ";
      first = false;
      os << rational_to_string(c);
      if (p) os << "*t^" << p;
      if (q) os << "*u^" << q;
    }
    return first ? "0" : os.str();
  }

 private:
  std::size_t index(int p, int q) const { return static_cast<std::size_t>(p * (bound_ + 1) + q); }
  void check_bound(const BiSeries& o) const {
    if (o.bound_ != bound_) throw PolyError("series truncation bounds differ");
  }

  int bound_;
  std::vector<Rational> coeffs_;
};

/// Truncation of 1 / (1 - t^p u^q).
inline BiSeries series_inv_geom(int p, int q, int bound) {
  if (p < 0 || q < 0) throw PolyError("negative exponent in geometric series");
  if (p == 0 && q == 0) throw PolyError("1/(1 - 1) diverges");
  BiSeries s(bound);
  for (int k = 0; k * (p + q) <= bound; ++k) s.at(k * p, k * q) = 1;
  return s;
}

}  // namespace traceforge
