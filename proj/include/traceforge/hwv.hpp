#pragma once

// Highest weight vectors in K[G_0]: solve Delta(sum xi_p w_p) = 0 over the
// products w_p of a given bidegree, optionally block by block.

#include <map>
#include <string>
#include <vector>

#include "traceforge/abseval.hpp"
#include "traceforge/glcat.hpp"
#include "traceforge/nullspace.hpp"

namespace traceforge {

struct HwvBasis {
  Partition lambda;
  std::size_t P = 0;  // products of bidegree lambda
  std::size_t Q = 0;  // products of bidegree (l1 + 1, l2 - 1)
  std::size_t alpha_rank = 0;
  bool blocked = false;
  std::vector<AbsMonomial> products;  // the w_p, ascending
  std::vector<RatVector> coordinates;  // one per vector, indexed like products
  std::vector<AbsPoly> vectors;

  std::size_t size() const { return vectors.size(); }
};

/// Blocking pays off above total degree 12.
inline bool default_blocked(const Partition& lambda) { return lambda.size() > 12; }

namespace detail {

/// Null space of the Delta map restricted to the given product columns.
inline NullBasis delta_null_space(const std::vector<AbsMonomial>& cols, std::size_t& rank) {
  std::map<AbsMonomial, std::size_t> row_of;
  std::vector<QMatrix::SparseRow> rows;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    AbsPoly image = abs_delta(AbsPoly::monomial(cols[p]));
    for (const auto& [m, c] : image.terms()) {
      auto [it, inserted] = row_of.try_emplace(m, rows.size());
      if (inserted) rows.emplace_back();
      rows[it->second].emplace_back(p, c);
    }
  }
  // Rows in the monomial order of the target space, for a positional pivot
  // rule independent of column visiting order.
  QMatrix alpha(cols.size());
  for (const auto& [m, r] : row_of) alpha.add_sparse_row(rows[r]);
  NullBasis nb = null_dense(alpha);
  rank = nb.rank();
  return nb;
}

inline std::size_t leading_index(const RatVector& v) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (sgn(v[j]) != 0) return j;
  return v.size();
}

}  // namespace detail

/// Basis of the highest weight vectors of bidegree lambda, normalized to
/// reduced echelon form over the ascending product order.
inline HwvBasis hwv_basis(const Partition& lambda, bool blocked, int cap = kDefaultDegreeCap) {
  check_cap(lambda, cap);
  HwvBasis b;
  b.lambda = lambda;
  b.blocked = blocked;
  b.products = abs_monomials(lambda);
  b.P = b.products.size();
  b.Q = lambda.second > 0 ? abs_monomials(lambda.first + 1, lambda.second - 1).size() : 0;
  if (!blocked) {
    NullBasis nb = detail::delta_null_space(b.products, b.alpha_rank);
    b.coordinates = std::move(nb.vectors);
  } else {
    // Delta preserves the number of factors from each module.
    std::map<std::array<int, kModuleCount>, std::vector<std::size_t>> blocks;
    for (std::size_t p = 0; p < b.P; ++p) blocks[b.products[p].module_multidegree()].push_back(p);
    for (const auto& [key, members] : blocks) {
      std::vector<AbsMonomial> cols;
      for (auto p : members) cols.push_back(b.products[p]);
      std::size_t rank = 0;
      NullBasis nb = detail::delta_null_space(cols, rank);
      b.alpha_rank += rank;
      for (const auto& v : nb.vectors) {
        RatVector full(b.P, Rational(0));
        for (std::size_t k = 0; k < members.size(); ++k) full[members[k]] = v[k];
        b.coordinates.push_back(std::move(full));
      }
    }
    // Block supports are disjoint, so ordering by leading index yields the
    // reduced echelon form of the whole space.
    std::sort(b.coordinates.begin(), b.coordinates.end(),
              [](const RatVector& x, const RatVector& y) { return detail::leading_index(x) < detail::leading_index(y); });
  }
  for (const auto& v : b.coordinates) {
    AbsPoly poly;
    for (std::size_t p = 0; p < b.P; ++p) poly.add_term(b.products[p], v[p]);
    b.vectors.push_back(std::move(poly));
  }
  return b;
}

inline HwvBasis hwv_basis(const Partition& lambda) { return hwv_basis(lambda, default_blocked(lambda)); }

struct HwvCheck {
  std::size_t index = 0;
  bool abs_delta_zero = false;
  bool evaluated_delta_zero = false;
  bool evaluated_h_fixed = false;
  bool nonzero = false;

  bool passed() const { return abs_delta_zero && evaluated_delta_zero && evaluated_h_fixed && nonzero; }
};

struct HwvReport {
  std::vector<HwvCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const HwvCheck& c) { return c.passed(); });
  }
  std::vector<std::size_t> failures() const {
    std::vector<std::size_t> f;
    for (const auto& c : checks)
      if (!c.passed()) f.push_back(c.index);
    return f;
  }
};

/// Checks a single candidate highest weight vector: formally, and on the
/// generic matrices (Delta kills the evaluation and h fixes it).
inline HwvCheck hwv_check(const AbsPoly& v, const GeneratorImages<QQ>& images, std::size_t index = 0) {
  HwvCheck c;
  c.index = index;
  c.abs_delta_zero = abs_delta(v).is_zero();
  c.nonzero = !v.is_zero();
  CommPoly f = images.eval(v);
  c.evaluated_delta_zero = evaluated_delta(f).is_zero();
  c.evaluated_h_fixed = evaluated_h(f) == f;
  return c;
}

/// The same checks, with Delta and h applied to the trace expression phi(v)
/// before evaluation. Slower; meant for small bidegrees.
inline HwvCheck hwv_check_symbolic(const AbsPoly& v, EvalCache& cache, std::size_t index = 0) {
  HwvCheck c;
  c.index = index;
  c.abs_delta_zero = abs_delta(v).is_zero();
  c.nonzero = !v.is_zero();
  TraceExpr e = phi(v);
  c.evaluated_delta_zero = eval_trace_expr(delta(e), cache).is_zero();
  c.evaluated_h_fixed = eval_trace_expr(subst_h(e), cache) == eval_trace_expr(e, cache);
  return c;
}

inline HwvReport hwv_verify(const std::vector<AbsPoly>& vectors, const GeneratorImages<QQ>& images) {
  HwvReport r;
  for (std::size_t i = 0; i < vectors.size(); ++i) r.checks.push_back(hwv_check(vectors[i], images, i));
  return r;
}

inline HwvReport hwv_verify(const HwvBasis& b) {
  GeneratorImages<QQ> images;
  return hwv_verify(b.vectors, images);
}

/// True when the two lists span the same subspace of K[G_0].
inline bool same_span(const std::vector<AbsPoly>& a, const std::vector<AbsPoly>& b) {
  std::map<AbsMonomial, std::size_t> index;
  for (const auto* list : {&a, &b})
    for (const auto& v : *list)
      for (const auto& [m, c] : v.terms()) index.try_emplace(m, 0);
  std::size_t n = 0;
  for (auto& [m, i] : index) i = n++;
  auto dense = [&](const std::vector<AbsPoly>& list) {
    std::vector<RatVector> out;
    for (const auto& v : list) {
      RatVector d(n, Rational(0));
      for (const auto& [m, c] : v.terms()) d[index[m]] = c;
      out.push_back(std::move(d));
    }
    return canonical_basis(std::move(out), n);
  };
  return dense(a) == dense(b);
}

}  // namespace traceforge
