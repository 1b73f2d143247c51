#pragma once

// Evaluation of trace polynomials on the generic traceless 4x4 matrices
//
//   x = diag(x11, x22, x33, -(x11 + x22 + x33))
//   y = (y_pq) with y44 = -(y11 + y22 + y33)
//
// over the 18 entry variables x11, x22, x33, y11, ..., y43.

#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "traceforge/poly.hpp"
#include "traceforge/trace.hpp"

namespace traceforge {

inline constexpr std::size_t kMatrixSize = 4;
/// The first three entry variables belong to x; the rest to y.
inline constexpr std::size_t kXVars = 3;

/// x11, x22, x33, y11, y12, y13, y14, y21, ..., y43 (graded-lex order base).
inline const VarSet& entry_vars() {
  static const VarSet vars = [] {
    std::vector<std::string> names{"x11", "x22", "x33"};
    for (int p = 1; p <= 4; ++p)
      for (int q = 1; q <= 4; ++q)
        if (!(p == 4 && q == 4)) names.push_back("y" + std::to_string(p) + std::to_string(q));
    return VarSet(names);
  }();
  return vars;
}

template <class Ring>
using GenericMatrixT = std::array<std::array<Poly<Ring>, kMatrixSize>, kMatrixSize>;

using GenericMatrix = GenericMatrixT<QQ>;

template <class Ring>
GenericMatrixT<Ring> build_x(Ring ring = Ring{}) {
  const VarSet& v = entry_vars();
  GenericMatrixT<Ring> m;
  for (auto& row : m)
    for (auto& e : row) e = Poly<Ring>(v, ring);
  for (std::size_t i = 0; i < 3; ++i) m[i][i] = Poly<Ring>::variable(v, i, ring);
  m[3][3] = -(m[0][0] + m[1][1] + m[2][2]);
  return m;
}

template <class Ring>
GenericMatrixT<Ring> build_y(Ring ring = Ring{}) {
  const VarSet& v = entry_vars();
  GenericMatrixT<Ring> m;
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = 0; q < 4; ++q) {
      if (p == 3 && q == 3) continue;
      m[p][q] = Poly<Ring>::variable(v, "y" + std::to_string(p + 1) + std::to_string(q + 1), ring);
    }
  m[3][3] = -(m[0][0] + m[1][1] + m[2][2]);
  return m;
}

template <class Ring>
Poly<Ring> matrix_trace(const GenericMatrixT<Ring>& m) {
  Poly<Ring> t = m[0][0];
  for (std::size_t i = 1; i < kMatrixSize; ++i) t += m[i][i];
  return t;
}

template <class Ring>
GenericMatrixT<Ring> matrix_mul(const GenericMatrixT<Ring>& a, const GenericMatrixT<Ring>& b) {
  GenericMatrixT<Ring> r;
  for (std::size_t i = 0; i < kMatrixSize; ++i)
    for (std::size_t j = 0; j < kMatrixSize; ++j) {
      Poly<Ring> acc(a[0][0].vars(), a[0][0].ring());
      for (std::size_t k = 0; k < kMatrixSize; ++k) {
        if (a[i][k].is_zero() || b[k][j].is_zero()) continue;
        acc += a[i][k] * b[k][j];
      }
      r[i][j] = std::move(acc);
    }
  return r;
}

/// Memo of evaluated traces keyed by cyclic-canonical word. Lookups and
/// inserts may come from several threads.
template <class Ring>
class EvalCacheT {
 public:
  explicit EvalCacheT(Ring ring = Ring{}) : ring_(ring), x_(build_x(ring)), y_(build_y(ring)) {}

  const Ring& ring() const { return ring_; }
  const GenericMatrixT<Ring>& x() const { return x_; }
  const GenericMatrixT<Ring>& y() const { return y_; }

  std::optional<Poly<Ring>> find(const Word& canonical) const {
    std::shared_lock lock(mu_);
    auto it = map_.find(canonical);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void insert(const Word& canonical, const Poly<Ring>& value) {
    std::unique_lock lock(mu_);
    map_[canonical] = value;
  }
  std::size_t size() const {
    std::shared_lock lock(mu_);
    return map_.size();
  }

 private:
  Ring ring_;
  GenericMatrixT<Ring> x_, y_;
  mutable std::shared_mutex mu_;
  std::map<Word, Poly<Ring>> map_;
};

using EvalCache = EvalCacheT<QQ>;

/// Number of polynomial evaluations performed by this process (word traces
/// and generator-image products); lets callers confirm a fully cached run.
inline std::atomic<std::size_t>& evaluation_counter() {
  static std::atomic<std::size_t> n{0};
  return n;
}

/// tr(M_w) computed by left-to-right products, without caching.
template <class Ring>
Poly<Ring> eval_word_trace_uncached(const Word& w, const GenericMatrixT<Ring>& x, const GenericMatrixT<Ring>& y) {
  if (w.size() < 2) throw TracelessViolation("eval_word_trace: word of length < 2: '" + w + "'");
  ++evaluation_counter();
  if (!is_word(w)) throw std::invalid_argument("eval_word_trace: not a word in x, y: " + w);
  GenericMatrixT<Ring> acc = w[0] == 'x' ? x : y;
  for (std::size_t i = 1; i < w.size(); ++i) acc = matrix_mul(acc, w[i] == 'x' ? x : y);
  return matrix_trace(acc);
}

template <class Ring>
Poly<Ring> eval_word_trace(const Word& w, EvalCacheT<Ring>& cache) {
  if (w.size() < 2) throw TracelessViolation("eval_word_trace: word of length < 2: '" + w + "'");
  Word key = cyclic_normalize(w);
  if (auto hit = cache.find(key)) return *hit;
  Poly<Ring> value = eval_word_trace_uncached(key, cache.x(), cache.y());
  cache.insert(key, value);
  return value;
}

template <class Ring>
Poly<Ring> eval_trace_monomial(const TraceMonomial& m, EvalCacheT<Ring>& cache) {
  Poly<Ring> r = Poly<Ring>::constant(entry_vars(), cache.ring().one(), cache.ring());
  for (const auto& w : m.words()) r = r * eval_word_trace(w, cache);
  return r;
}

template <class Ring>
Poly<Ring> eval_trace_expr(const TraceExpr& e, EvalCacheT<Ring>& cache) {
  const Ring& ring = cache.ring();
  Poly<Ring> r(entry_vars(), ring);
  for (const auto& [m, c] : e.terms()) {
    auto coef = ring.from_rational(c);
    r += eval_trace_monomial(m, cache).scaled(coef);
  }
  return r;
}

namespace detail {

/// Entry-variable index of y_ii and x_ii, i = 0..2.
inline constexpr std::array<std::size_t, 3> kYDiag{3, 8, 13};

inline Rational binomial(int n, int k) {
  BigInt b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

}  // namespace detail

/// Delta applied after evaluation. x is diagonal, so F(x, y + s x) moves only
/// y11, y22, y33 (and y44 along with them): Delta F = sum_i x_ii dF/dy_ii.
template <class Ring>
Poly<Ring> evaluated_delta(const Poly<Ring>& f) {
  const Ring& ring = f.ring();
  Poly<Ring> r(f.vars(), ring);
  for (const auto& [m, c] : f.terms())
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t yv = detail::kYDiag[i];
      int e = m.exponent(yv);
      if (!e) continue;
      Monomial nm = m;
      nm.set(yv, e - 1);
      nm.set(i, nm.exponent(i) + 1);
      r.add_term(nm, ring.mul(c, ring.from_int(e)));
    }
  return r;
}

/// h applied after evaluation: F(x, x + y), i.e. y_ii -> y_ii + x_ii.
template <class Ring>
Poly<Ring> evaluated_h(const Poly<Ring>& f) {
  const Ring& ring = f.ring();
  Poly<Ring> r(f.vars(), ring);
  for (const auto& [m, c] : f.terms()) {
    std::vector<std::pair<Monomial, typename Ring::value_type>> acc{{m, c}};
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t yv = detail::kYDiag[i];
      int e = m.exponent(yv);
      if (!e) continue;
      std::vector<std::pair<Monomial, typename Ring::value_type>> next;
      for (const auto& [am, ac] : acc)
        for (int k = 0; k <= e; ++k) {
          Monomial nm = am;
          nm.set(yv, e - k);
          nm.set(i, am.exponent(i) + k);
          next.emplace_back(nm, ring.mul(ac, ring.from_rational(detail::binomial(e, k))));
        }
      acc = std::move(next);
    }
    for (const auto& [am, ac] : acc) r.add_term(am, ac);
  }
  return r;
}

/// Bidegree of an evaluated polynomial: (degree in x entries, in y entries).
template <class Ring>
std::optional<std::pair<int, int>> entry_bidegree(const Poly<Ring>& p) {
  return p.bidegree(kXVars);
}

}  // namespace traceforge
