#pragma once

// Exact null spaces over Q: fraction-free elimination for small dense
// systems, and a streaming solver for tall systems whose rows are visited
// once (exact, or multi-modular with exact re-verification).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "traceforge/modular.hpp"
#include "traceforge/rings.hpp"

namespace traceforge {

class NullspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RatVector = std::vector<Rational>;

/// Rational matrix stored as sparse rows of (column, value), columns ascending.
class QMatrix {
 public:
  using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

  explicit QMatrix(std::size_t ncols = 0) : ncols_(ncols) {}

  std::size_t ncols() const { return ncols_; }
  std::size_t nrows() const { return rows_.size(); }
  const std::vector<SparseRow>& rows() const { return rows_; }

  void add_row(std::span<const Rational> dense) {
    if (dense.size() != ncols_) throw std::invalid_argument("QMatrix: row length differs from ncols");
    SparseRow r;
    for (std::size_t j = 0; j < dense.size(); ++j)
      if (sgn(dense[j]) != 0) r.emplace_back(j, dense[j]);
    rows_.push_back(std::move(r));
  }
  void add_row(const std::vector<Rational>& dense) { add_row(std::span<const Rational>(dense)); }
  void add_sparse_row(SparseRow r) {
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseRow clean;
    for (auto& [j, v] : r) {
      if (j >= ncols_) throw std::invalid_argument("QMatrix: column index out of range");
      if (!clean.empty() && clean.back().first == j) {
        clean.back().second += v;
        if (sgn(clean.back().second) == 0) clean.pop_back();
      } else if (sgn(v) != 0) {
        clean.emplace_back(j, std::move(v));
      }
    }
    rows_.push_back(std::move(clean));
  }

  /// A v, densely.
  RatVector apply(std::span<const Rational> v) const {
    RatVector out(rows_.size(), Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (const auto& [j, a] : rows_[i]) out[i] += a * v[j];
    return out;
  }

 private:
  std::size_t ncols_;
  std::vector<SparseRow> rows_;
};

struct NullBasis {
  std::size_t ncols = 0;
  std::vector<RatVector> vectors;

  std::size_t nullity() const { return vectors.size(); }
  std::size_t rank() const { return ncols - vectors.size(); }
};

// ---------------------------------------------------------------------------
// Reduced row echelon form over a field

namespace detail {

template <class Ring>
std::optional<std::size_t> leading_column(const std::vector<typename Ring::value_type>& row) {
  for (std::size_t j = 0; j < row.size(); ++j)
    if (!Ring::is_zero(row[j])) return j;
  return std::nullopt;
}

}  // namespace detail

/// Rows of the reduced row echelon form of the span of `rows`, ordered by
/// pivot column, each with pivot entry one. Canonical for the row space.
template <class Ring>
std::vector<std::vector<typename Ring::value_type>> rref_basis(std::vector<std::vector<typename Ring::value_type>> rows,
                                                              const Ring& ring, std::size_t ncols) {
  using C = typename Ring::value_type;
  std::vector<std::vector<C>> piv;
  std::size_t r = 0;
  for (std::size_t col = 0; col < ncols && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && Ring::is_zero(rows[sel][col])) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    C inv = ring.inv(rows[r][col]);
    for (auto& v : rows[r]) v = ring.mul(v, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || Ring::is_zero(rows[i][col])) continue;
      C f = rows[i][col];
      for (std::size_t j = col; j < ncols; ++j)
        if (!Ring::is_zero(rows[r][j])) rows[i][j] = ring.sub(rows[i][j], ring.mul(f, rows[r][j]));
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

/// Q as a field for rref_basis and StreamingEchelon.
struct QField : QQ {
  static Rational inv(const Rational& a) {
    if (sgn(a) == 0) throw std::domain_error("inverse of zero");
    return Rational(1) / a;
  }
};

inline std::vector<RatVector> canonical_basis(std::vector<RatVector> vectors, std::size_t ncols) {
  for (const auto& v : vectors)
    if (v.size() != ncols) throw std::invalid_argument("canonical_basis: vector length differs from ncols");
  return rref_basis(std::move(vectors), QField{}, ncols);
}

/// True when `v` lies in the span of the rows of an RREF basis.
template <class Ring>
bool in_rref_span(const std::vector<std::vector<typename Ring::value_type>>& rref, std::vector<typename Ring::value_type> v,
                  const Ring& ring) {
  for (const auto& row : rref) {
    auto lead = detail::leading_column<Ring>(row);
    if (!lead || Ring::is_zero(v[*lead])) continue;
    auto f = v[*lead];
    for (std::size_t j = *lead; j < v.size(); ++j)
      if (!Ring::is_zero(row[j])) v[j] = ring.sub(v[j], ring.mul(f, row[j]));
  }
  return !detail::leading_column<Ring>(v).has_value();
}

/// Null space of the matrix whose RREF rows are given, as RREF vectors.
template <class Ring>
std::vector<std::vector<typename Ring::value_type>> null_from_rref(
    const std::vector<std::vector<typename Ring::value_type>>& rref, const Ring& ring, std::size_t ncols) {
  using C = typename Ring::value_type;
  std::vector<std::optional<std::size_t>> pivot_row(ncols);
  for (std::size_t i = 0; i < rref.size(); ++i) pivot_row[*detail::leading_column<Ring>(rref[i])] = i;
  std::vector<std::vector<C>> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (pivot_row[f]) continue;
    std::vector<C> v(ncols, ring.zero());
    v[f] = ring.one();
    for (std::size_t c = 0; c < f; ++c)
      if (pivot_row[c]) v[c] = ring.neg(rref[*pivot_row[c]][f]);
    out.push_back(std::move(v));
  }
  return rref_basis(std::move(out), ring, ncols);
}

// ---------------------------------------------------------------------------
// Dense systems: fraction-free elimination

namespace detail {

using IntRow = std::vector<std::pair<std::size_t, BigInt>>;

inline void make_primitive(IntRow& row) {
  if (row.empty()) return;
  BigInt g = 0;
  for (const auto& [j, v] : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  if (row.front().second < 0) g = -g;
  for (auto& [j, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

inline IntRow to_int_row(const QMatrix::SparseRow& r) {
  BigInt l = 1;
  for (const auto& [j, v] : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  IntRow out;
  for (const auto& [j, v] : r) out.emplace_back(j, BigInt(v.get_num() * (l / v.get_den())));
  make_primitive(out);
  return out;
}

inline BigInt entry(const IntRow& r, std::size_t col) {
  auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
  return it != r.end() && it->first == col ? it->second : BigInt(0);
}

/// a * r - b * p, sparse.
inline IntRow combine(const BigInt& a, const IntRow& r, const BigInt& b, const IntRow& p) {
  IntRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 0, k = 0;
  while (i < r.size() || k < p.size()) {
    if (k == p.size() || (i < r.size() && r[i].first < p[k].first)) {
      out.emplace_back(r[i].first, a * r[i].second);
      ++i;
    } else if (i == r.size() || p[k].first < r[i].first) {
      out.emplace_back(p[k].first, -b * p[k].second);
      ++k;
    } else {
      BigInt v = a * r[i].second - b * p[k].second;
      if (v != 0) out.emplace_back(r[i].first, std::move(v));
      ++i;
      ++k;
    }
  }
  return out;
}

}  // namespace detail

/// Null space by fraction-free elimination with content removal. The pivot
/// for each column is the first remaining row with a nonzero entry there.
/// Result vectors are in reduced echelon form (leading coordinate one).
inline NullBasis null_dense(const QMatrix& a) {
  const std::size_t n = a.ncols();
  std::vector<detail::IntRow> rows;
  for (const auto& r : a.rows())
    if (!r.empty()) rows.push_back(detail::to_int_row(r));
  std::vector<detail::IntRow> echelon;
  for (std::size_t col = 0; col < n && !rows.empty(); ++col) {
    auto sel = std::find_if(rows.begin(), rows.end(), [col](const auto& r) { return r.front().first == col; });
    if (sel == rows.end()) continue;
    detail::IntRow piv = std::move(*sel);
    rows.erase(sel);
    const BigInt& lead = piv.front().second;
    std::vector<detail::IntRow> next;
    next.reserve(rows.size());
    for (auto& r : rows) {
      if (r.front().first == col) {
        BigInt f = r.front().second;
        detail::IntRow c = detail::combine(lead, r, f, piv);
        detail::make_primitive(c);
        if (!c.empty()) next.push_back(std::move(c));
      } else {
        next.push_back(std::move(r));
      }
    }
    rows = std::move(next);
    echelon.push_back(std::move(piv));
  }
  // Back to rationals for the (small) reduced form.
  std::vector<RatVector> dense;
  for (const auto& r : echelon) {
    RatVector v(n, Rational(0));
    for (const auto& [j, x] : r) v[j] = Rational(x);
    dense.push_back(std::move(v));
  }
  auto rref = rref_basis(std::move(dense), QField{}, n);
  return NullBasis{n, null_from_rref(rref, QField{}, n)};
}

// ---------------------------------------------------------------------------
// Streamed systems

/// Incremental reduced echelon form over a field with at most ncols pivots.
template <class Ring>
class StreamingEchelon {
 public:
  using C = typename Ring::value_type;

  StreamingEchelon(std::size_t ncols, Ring ring = Ring{}) : ncols_(ncols), ring_(ring), pivot_of_(ncols) {}

  std::size_t ncols() const { return ncols_; }
  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == ncols_; }

  /// Adds a row; returns true when the rank grew.
  bool insert(std::span<const C> row) {
    if (row.size() != ncols_) throw std::invalid_argument("StreamingEchelon: row length differs from ncols");
    if (full()) return false;
    // The reduced row vanishes at every pivot column, so it is zero iff its
    // free-column residuals are.
    bool independent = false;
    for (std::size_t f = 0; f < ncols_ && !independent; ++f) {
      if (pivot_of_[f]) continue;
      C acc = row[f];
      for (std::size_t k = 0; k < rows_.size(); ++k) {
        const C& coef = row[pivot_col_[k]];
        if (!Ring::is_zero(coef) && !Ring::is_zero(rows_[k][f])) acc = ring_.sub(acc, ring_.mul(coef, rows_[k][f]));
      }
      independent = !Ring::is_zero(acc);
    }
    if (!independent) return false;
    std::vector<C> r(row.begin(), row.end());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      C coef = r[pivot_col_[k]];
      if (Ring::is_zero(coef)) continue;
      for (std::size_t j = 0; j < ncols_; ++j)
        if (!Ring::is_zero(rows_[k][j])) r[j] = ring_.sub(r[j], ring_.mul(coef, rows_[k][j]));
    }
    std::size_t lead = *detail::leading_column<Ring>(r);
    C inv = ring_.inv(r[lead]);
    for (auto& v : r) v = ring_.mul(v, inv);
    for (auto& p : rows_) {
      if (Ring::is_zero(p[lead])) continue;
      C f = p[lead];
      for (std::size_t j = 0; j < ncols_; ++j)
        if (!Ring::is_zero(r[j])) p[j] = ring_.sub(p[j], ring_.mul(f, r[j]));
    }
    pivot_of_[lead] = rows_.size();
    pivot_col_.push_back(lead);
    rows_.push_back(std::move(r));
    return true;
  }

  /// RREF rows ordered by pivot column.
  std::vector<std::vector<C>> rref() const {
    std::vector<std::size_t> order(rows_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivot_col_[a] < pivot_col_[b]; });
    std::vector<std::vector<C>> out;
    for (auto k : order) out.push_back(rows_[k]);
    return out;
  }

  std::vector<std::vector<C>> null_basis() const { return null_from_rref(rref(), ring_, ncols_); }

 private:
  std::size_t ncols_;
  Ring ring_;
  std::vector<std::optional<std::size_t>> pivot_of_;
  std::vector<std::size_t> pivot_col_;
  std::vector<std::vector<C>> rows_;
};

/// Rows of a tall system, visited in full on each pass. Visitors return
/// false to stop a pass early.
class RowSource {
 public:
  using ExactVisitor = std::function<bool(std::span<const Rational>)>;
  using ModVisitor = std::function<bool(std::span<const std::uint64_t>)>;

  virtual ~RowSource() = default;
  virtual std::size_t ncols() const = 0;
  virtual void for_each_exact(const ExactVisitor& visit) = 0;

  /// Rows reduced modulo p. The default reduces the exact rows.
  virtual void for_each_mod(const Zp& field, const ModVisitor& visit) {
    std::vector<std::uint64_t> buf(ncols());
    for_each_exact([&](std::span<const Rational> row) {
      for (std::size_t j = 0; j < row.size(); ++j) buf[j] = field.from_rational(row[j]);
      return visit(buf);
    });
  }

  /// True iff every row is orthogonal to every candidate, in exact arithmetic.
  virtual bool annihilates(const std::vector<RatVector>& candidates) {
    bool ok = true;
    for_each_exact([&](std::span<const Rational> row) {
      for (const auto& v : candidates) {
        Rational dot = 0;
        for (std::size_t j = 0; j < row.size(); ++j)
          if (sgn(row[j]) != 0 && sgn(v[j]) != 0) dot += row[j] * v[j];
        if (sgn(dot) != 0) {
          ok = false;
          return false;
        }
      }
      return true;
    });
    return ok;
  }
};

/// A QMatrix viewed as a row source.
class MatrixRowSource : public RowSource {
 public:
  explicit MatrixRowSource(const QMatrix& m) : m_(m) {}
  std::size_t ncols() const override { return m_.ncols(); }
  void for_each_exact(const ExactVisitor& visit) override {
    RatVector buf(m_.ncols());
    for (const auto& r : m_.rows()) {
      std::fill(buf.begin(), buf.end(), Rational(0));
      for (const auto& [j, v] : r) buf[j] = v;
      if (!visit(buf)) return;
    }
  }

 private:
  const QMatrix& m_;
};

enum class NullMode { Exact, Modular };

inline const char* to_string(NullMode m) { return m == NullMode::Exact ? "exact" : "modular"; }

struct StreamOptions {
  NullMode mode = NullMode::Modular;
  std::size_t prime_budget = 8;
  std::size_t min_primes = 2;
};

/// Diagnostics of the last null_stream call.
struct StreamStats {
  std::size_t primes_used = 0;
  std::size_t primes_discarded = 0;
  std::size_t passes = 0;
  bool verified_exactly = false;
};

namespace detail {

inline NullBasis null_stream_exact(RowSource& src, StreamStats& stats) {
  StreamingEchelon<QField> ech(src.ncols());
  src.for_each_exact([&](std::span<const Rational> row) {
    ech.insert(row);
    return !ech.full();
  });
  stats.passes = 1;
  stats.verified_exactly = true;
  return NullBasis{src.ncols(), ech.null_basis()};
}

inline NullBasis null_stream_modular(RowSource& src, const StreamOptions& opt, StreamStats& stats) {
  const std::size_t n = src.ncols();
  std::vector<std::size_t> signature;  // leading columns of the modular null basis
  std::vector<std::vector<BigInt>> residues;
  BigInt modulus = 0;
  std::size_t combined = 0;
  for (std::size_t k = 0; k < opt.prime_budget; ++k) {
    Zp field(nth_prime_below_2_62(k));
    StreamingEchelon<Zp> ech(n, field);
    try {
      src.for_each_mod(field, [&](std::span<const std::uint64_t> row) {
        ech.insert(row);
        return !ech.full();
      });
    } catch (const std::domain_error&) {
      ++stats.primes_discarded;  // p divides a denominator of the system
      continue;
    }
    ++stats.passes;
    ++stats.primes_used;
    auto basis = ech.null_basis();
    std::vector<std::size_t> sig;
    for (const auto& v : basis) sig.push_back(*leading_column<Zp>(v));
    if (combined > 0 && sig != signature) {
      // Rank can only drop modulo unlucky primes: keep the larger rank.
      if (sig.size() > signature.size()) {
        ++stats.primes_discarded;
        continue;
      }
      stats.primes_discarded += combined;
      combined = 0;
    }
    if (combined == 0) {
      signature = sig;
      residues.assign(basis.size(), std::vector<BigInt>(n));
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) residues[i][j] = BigInt(static_cast<unsigned long>(basis[i][j]));
      modulus = BigInt(static_cast<unsigned long>(field.p));
    } else {
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) residues[i][j] = crt_combine(residues[i][j], modulus, basis[i][j], field.p);
      modulus *= BigInt(static_cast<unsigned long>(field.p));
    }
    ++combined;
    if (combined < opt.min_primes) continue;
    if (signature.empty()) {
      // Full rank modulo several primes: rank over Q is at least as large.
      stats.verified_exactly = true;
      return NullBasis{n, {}};
    }
    std::vector<RatVector> cand;
    bool ok = true;
    for (std::size_t i = 0; i < residues.size() && ok; ++i) {
      RatVector v(n);
      for (std::size_t j = 0; j < n && ok; ++j) {
        auto q = rational_reconstruct(residues[i][j], modulus);
        if (!q) ok = false;
        else v[j] = *q;
      }
      cand.push_back(std::move(v));
    }
    if (!ok) continue;
    ++stats.passes;
    if (src.annihilates(cand)) {
      // The candidates are exact, independent null vectors, and the rank
      // over Q is at least the modular rank: the null space is found.
      stats.verified_exactly = true;
      return NullBasis{n, std::move(cand)};
    }
  }
  throw NullspaceError("modular null space: reconstruction not verified after " + std::to_string(opt.prime_budget) +
                       " primes; increase the prime budget or use exact mode");
}

}  // namespace detail

inline NullBasis null_stream(RowSource& src, const StreamOptions& opt = {}, StreamStats* stats = nullptr) {
  StreamStats local;
  StreamStats& s = stats ? *stats : local;
  s = StreamStats{};
  if (opt.mode == NullMode::Exact) return detail::null_stream_exact(src, s);
  return detail::null_stream_modular(src, opt, s);
}

/// Exact check that A v = 0 for every basis vector.
inline bool annihilated_by(const QMatrix& a, const NullBasis& b) {
  for (const auto& v : b.vectors)
    for (const auto& x : a.apply(v))
      if (sgn(x) != 0) return false;
  return true;
}

}  // namespace traceforge
