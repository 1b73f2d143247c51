#pragma once

// Defining relations of C_0: combinations sum zeta_i w_i of highest weight
// vectors whose evaluation on generic matrices vanishes, their orbits under
// Delta_1, and the leading monomials modulo the parameter ideal.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "traceforge/abseval.hpp"
#include "traceforge/digest.hpp"
#include "traceforge/hwv.hpp"
#include "traceforge/nullspace.hpp"

namespace traceforge {

struct RelationOptions {
  NullMode mode = NullMode::Modular;
  std::size_t prime_budget = 8;
  std::optional<bool> blocked;  // default: hwv default_blocked
  int cap = kDefaultDegreeCap;
  unsigned threads = 1;
};

/// The zeta-system of a bidegree: one column per hwv basis vector, one row
/// per commutative monomial of the evaluated vectors. Rows are produced
/// from the evaluations on demand; the matrix is never stored densely.
class RelationRowSource : public RowSource {
 public:
  explicit RelationRowSource(const HwvBasis& basis, unsigned threads = 1)
      : basis_(basis), threads_(std::max(1u, threads)) {}

  std::size_t ncols() const override { return basis_.size(); }

  void for_each_exact(const ExactVisitor& visit) override { visit_rows(exact_images(), visit); }

  void for_each_mod(const Zp& field, const ModVisitor& visit) override { visit_rows(evaluate(field), visit); }

  /// sum_i c_i eval(w_i) = 0 exactly, for every candidate c.
  bool annihilates(const std::vector<RatVector>& candidates) override {
    const auto& f = exact_images();
    for (const auto& c : candidates) {
      CommPoly h(entry_vars());
      for (std::size_t i = 0; i < f.size(); ++i)
        if (sgn(c[i]) != 0) h += f[i].scaled(c[i]);
      if (!h.is_zero()) return false;
    }
    return true;
  }

  /// eval(w_i) over Q, computed once.
  const std::vector<CommPoly>& exact_images() {
    if (!exact_) exact_ = evaluate(QQ{});
    return *exact_;
  }

 private:
  template <class Ring>
  std::vector<Poly<Ring>> evaluate(Ring ring) const {
    GeneratorImages<Ring> images(exact_generator_images(), ring);
    const std::size_t s = basis_.size(), P = basis_.P;
    const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(threads_, std::max<std::size_t>(P, 1)));
    std::vector<std::vector<Poly<Ring>>> partial(nt, std::vector<Poly<Ring>>(s, Poly<Ring>(entry_vars(), ring)));
    auto work = [&](unsigned t) {
      for (std::size_t p = t; p < P; p += nt) {
        std::optional<Poly<Ring>> g;
        for (std::size_t i = 0; i < s; ++i) {
          const Rational& c = basis_.coordinates[i][p];
          if (sgn(c) == 0) continue;
          if (!g) g = images.eval(basis_.products[p]);
          partial[t][i] += g->scaled(ring.from_rational(c));
        }
      }
    };
    if (nt == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (unsigned t = 1; t < nt; ++t)
      for (std::size_t i = 0; i < s; ++i) partial[0][i] += partial[t][i];
    return std::move(partial[0]);
  }

  // Transposes the evaluated vectors into monomial rows, visited in
  // descending grlex order.
  template <class Ring, class Visitor>
  void visit_rows(const std::vector<Poly<Ring>>& f, const Visitor& visit) const {
    using C = typename Ring::value_type;
    const C zero = f.empty() ? C{} : f.front().ring().zero();
    const std::size_t nv = entry_vars().size();
    absl::flat_hash_map<Monomial, std::size_t, MonomialHash> row_of;
    std::vector<Monomial> keys;
    for (const auto& fi : f)
      for (const auto& [m, c] : fi.terms())
        if (row_of.try_emplace(m, 0).second) keys.push_back(m);
    std::sort(keys.begin(), keys.end(), [&](const Monomial& a, const Monomial& b) { return Monomial::grlex_greater(a, b, nv); });
    for (std::size_t k = 0; k < keys.size(); ++k) row_of[keys[k]] = k;
    std::vector<std::vector<std::pair<std::uint32_t, C>>> rows(keys.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      for (const auto& [m, c] : f[i].terms()) rows[row_of[m]].emplace_back(static_cast<std::uint32_t>(i), c);
    std::vector<C> buf(f.size());
    for (const auto& r : rows) {
      std::fill(buf.begin(), buf.end(), zero);
      for (const auto& [i, c] : r) buf[i] = c;
      if (!visit(std::span<const C>(buf))) return;
    }
  }

  const HwvBasis& basis_;
  unsigned threads_;
  std::optional<std::vector<CommPoly>> exact_;
};

struct RelationSpace {
  Partition lambda;
  HwvBasis hwv;
  std::vector<RatVector> zeta;        // reduced echelon null basis of the zeta-system
  std::vector<AbsPoly> relvectors;    // sum_i zeta_i w_i
  NullMode mode = NullMode::Modular;
  StreamStats stats;

  std::size_t r() const { return relvectors.size(); }
};

inline AbsPoly combine(const HwvBasis& b, const RatVector& zeta) {
  AbsPoly v;
  for (std::size_t i = 0; i < zeta.size(); ++i)
    if (sgn(zeta[i]) != 0) v += b.vectors[i].scaled(zeta[i]);
  return v;
}

/// Relations of bidegree lambda that are highest weight vectors.
inline RelationSpace relation_space(const Partition& lambda, const RelationOptions& opt = {}) {
  RelationSpace sp;
  sp.lambda = lambda;
  sp.mode = opt.mode;
  sp.hwv = hwv_basis(lambda, opt.blocked.value_or(default_blocked(lambda)), opt.cap);
  if (sp.hwv.size() == 0) {
    sp.stats.verified_exactly = true;
    return sp;
  }
  RelationRowSource src(sp.hwv, opt.threads);
  NullBasis nb = null_stream(src, StreamOptions{opt.mode, opt.prime_budget, 2}, &sp.stats);
  sp.zeta = std::move(nb.vectors);
  for (const auto& z : sp.zeta) sp.relvectors.push_back(combine(sp.hwv, z));
  return sp;
}

// ---------------------------------------------------------------------------
// Zero checks.

struct ZeroReport {
  bool zero = false;
  std::size_t residual_terms = 0;
  std::vector<std::string> samples;  // leading residual terms, canonical text
  std::string digest;                // sha256 of the canonical text of the evaluation
};

inline ZeroReport zero_report(const CommPoly& f, std::size_t sample_cap = 8) {
  ZeroReport r;
  r.zero = f.is_zero();
  r.residual_terms = f.size();
  const std::string text = to_canonical_text(f);
  r.digest = sha256_hex(text);
  std::size_t pos = 0;
  while (r.samples.size() < sample_cap && pos < text.size() && !r.zero) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    if (end > pos) r.samples.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return r;
}

inline ZeroReport verify_zero(const TraceExpr& e, EvalCache& cache, std::size_t sample_cap = 8) {
  return zero_report(eval_trace_expr(e, cache), sample_cap);
}

inline ZeroReport verify_zero(const TraceExpr& e, std::size_t sample_cap = 8) {
  EvalCache cache;
  return verify_zero(e, cache, sample_cap);
}

/// Same as verify_zero(phi(v)), through the generator images.
inline ZeroReport verify_zero(const AbsPoly& v, const GeneratorImages<QQ>& images, std::size_t sample_cap = 8) {
  return zero_report(images.eval(v), sample_cap);
}

// ---------------------------------------------------------------------------
// Span membership.

namespace detail {

struct MonomialIndex {
  std::map<AbsMonomial, std::size_t> index;

  void add(const AbsPoly& v) {
    for (const auto& [m, c] : v.terms()) index.try_emplace(m, 0);
  }
  void finish() {
    std::size_t n = 0;
    for (auto& [m, i] : index) i = n++;
  }
  std::size_t size() const { return index.size(); }
  RatVector dense(const AbsPoly& v) const {
    RatVector d(index.size(), Rational(0));
    for (const auto& [m, c] : v.terms()) d[index.at(m)] = c;
    return d;
  }
};

inline std::size_t span_rank(const std::vector<AbsPoly>& vs) {
  MonomialIndex ix;
  for (const auto& v : vs) ix.add(v);
  ix.finish();
  std::vector<RatVector> rows;
  for (const auto& v : vs) rows.push_back(ix.dense(v));
  return canonical_basis(std::move(rows), ix.size()).size();
}

}  // namespace detail

/// True iff candidate lies in the rational span of the relations.
inline bool membership(const AbsPoly& candidate, const RelationSpace& space) {
  if (candidate.is_zero()) return true;
  auto bd = candidate.bidegree();
  if (!bd) throw std::invalid_argument("membership: candidate is not bihomogeneous");
  if (*bd != std::make_pair(space.lambda.first, space.lambda.second))
    throw std::invalid_argument("membership: candidate bidegree (" + std::to_string(bd->first) + "," +
                                std::to_string(bd->second) + ") differs from " + space.lambda.to_string());
  detail::MonomialIndex ix;
  ix.add(candidate);
  for (const auto& v : space.relvectors) ix.add(v);
  ix.finish();
  std::vector<RatVector> rows;
  for (const auto& v : space.relvectors) rows.push_back(ix.dense(v));
  auto rref = canonical_basis(std::move(rows), ix.size());
  return in_rref_span(rref, ix.dense(candidate), QField{});
}

/// Scalars c_k, normalized with c_0 = 1, such that sum_k c_k s_k lies in the
/// span of the relations; empty when no such combination exists. Used to
/// localize a misprinted summand in a published relation.
inline std::optional<std::vector<Rational>> summand_fit(const std::vector<AbsPoly>& summands, const RelationSpace& space) {
  if (summands.empty()) return std::nullopt;
  std::vector<const AbsPoly*> cols;
  for (const auto& s : summands) cols.push_back(&s);
  for (const auto& v : space.relvectors) cols.push_back(&v);
  detail::MonomialIndex ix;
  for (const auto* c : cols) ix.add(*c);
  ix.finish();
  std::vector<QMatrix::SparseRow> rows(ix.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [m, c] : cols[j]->terms()) rows[ix.index.at(m)].emplace_back(j, c);
  QMatrix a(cols.size());
  for (auto& r : rows) a.add_sparse_row(r);
  NullBasis nb = null_dense(a);
  // Reduced echelon: a vector with a nonzero first coordinate is the first one.
  if (nb.vectors.empty() || sgn(nb.vectors[0][0]) == 0) return std::nullopt;
  std::vector<Rational> scale(nb.vectors[0].begin(), nb.vectors[0].begin() + static_cast<std::ptrdiff_t>(summands.size()));
  for (auto& c : scale) c /= nb.vectors[0][0];
  return scale;
}

// ---------------------------------------------------------------------------
// Orbits.

/// e_j = Delta_1^j(v) / (a (a-1) ... (a-j+1)) for j = 0..a, a = l1 - l2.
inline std::vector<AbsPoly> orbit_of(const AbsPoly& v, const Partition& lambda) {
  const int a = lambda.width();
  std::vector<AbsPoly> out{v};
  for (int j = 1; j <= a; ++j) out.push_back(abs_delta1(out.back()).scaled(Rational(1) / Rational(a - j + 1)));
  return out;
}

inline std::vector<AbsPoly> orbit(const RelationSpace& space) {
  std::vector<AbsPoly> out;
  for (const auto& v : space.relvectors)
    for (auto& e : orbit_of(v, space.lambda)) out.push_back(std::move(e));
  return out;
}

/// Relation spaces of every bidegree lambda of a total degree, computed
/// once each. An optional loader/saver pair hooks in a persistent cache.
class RelationAtlas {
 public:
  using Loader = std::function<std::optional<RelationSpace>(const Partition&)>;
  using Saver = std::function<void(const RelationSpace&)>;

  explicit RelationAtlas(RelationOptions opt = {}, Loader load = {}, Saver save = {})
      : opt_(opt), load_(std::move(load)), save_(std::move(save)) {}

  const RelationOptions& options() const { return opt_; }

  const RelationSpace& get(const Partition& lambda) {
    auto it = spaces_.find(lambda);
    if (it != spaces_.end()) return it->second;
    std::optional<RelationSpace> sp;
    if (load_) sp = load_(lambda);
    if (!sp) {
      sp = relation_space(lambda, opt_);
      if (save_) save_(*sp);
    }
    return spaces_.emplace(lambda, std::move(*sp)).first->second;
  }

  std::vector<const RelationSpace*> degree(int d) {
    check_cap(Partition(d, 0), opt_.cap);
    std::vector<const RelationSpace*> out;
    for (int second = d / 2; second >= 0; --second) out.push_back(&get(Partition(d - second, second)));
    return out;
  }

  std::vector<AbsPoly> orbit_vectors(int d) {
    std::vector<AbsPoly> out;
    for (const auto* sp : degree(d))
      for (auto& e : orbit(*sp)) out.push_back(std::move(e));
    return out;
  }

 private:
  RelationOptions opt_;
  Loader load_;
  Saver save_;
  std::map<Partition, RelationSpace> spaces_;
};

// ---------------------------------------------------------------------------
// Leading monomials modulo omega(S) B.

/// Homogeneous system of parameters S and the complementary generators B.
struct ParameterSplit {
  std::vector<int> hsop;        // flat indices
  std::vector<int> complement;  // flat indices, in decreasing order of precedence
  std::array<bool, kGeneratorCount> in_hsop{};

  bool is_hsop(int flat) const { return in_hsop[static_cast<std::size_t>(flat)]; }
};

inline const ParameterSplit& parameter_split() {
  static const ParameterSplit split = [] {
    ParameterSplit s;
    for (int m = 1; m <= 4; ++m)
      for (int j = 0; j <= module_partitions()[static_cast<std::size_t>(m - 1)].width(); ++j) s.hsop.push_back(abs_index(m, j));
    s.hsop.push_back(abs_index(6, 0));
    s.hsop.push_back(abs_index(6, 2));
    for (int g : s.hsop) s.in_hsop[static_cast<std::size_t>(g)] = true;
    // u50 > u51 > u70 > u80 > u81 > u61 > u90 > u91 > u92 > u10,0 > u11,0 > ... > u11,3 > u12,0
    const std::vector<std::pair<int, int>> order{{5, 0}, {5, 1}, {7, 0}, {8, 0}, {8, 1}, {6, 1}, {9, 0}, {9, 1},
                                                 {9, 2}, {10, 0}, {11, 0}, {11, 1}, {11, 2}, {11, 3}, {12, 0}};
    for (auto [m, j] : order) s.complement.push_back(abs_index(m, j));
    if (s.hsop.size() + s.complement.size() != static_cast<std::size_t>(kGeneratorCount))
      throw CatalogError("parameter split does not cover the generators");
    return s;
  }();
  return split;
}

/// a > b in the lexicographic order induced by the complement precedence.
/// Only meaningful for monomials in the complementary generators.
inline bool lead_greater(const AbsMonomial& a, const AbsMonomial& b) {
  for (int g : parameter_split().complement)
    if (a.exponent(g) != b.exponent(g)) return a.exponent(g) > b.exponent(g);
  return false;
}

/// Drops every term divisible by a parameter.
inline AbsPoly reduce_mod_parameters(const AbsPoly& v) {
  const auto& split = parameter_split();
  AbsPoly r;
  for (const auto& [m, c] : v.terms()) {
    bool keep = true;
    for (int g : split.hsop)
      if (m.exponent(g)) keep = false;
    if (keep) r.add_term(m, c);
  }
  return r;
}

inline std::optional<AbsMonomial> leading_monomial(const AbsPoly& v) {
  std::optional<AbsMonomial> best;
  for (const auto& [m, c] : v.terms())
    if (!best || lead_greater(m, *best)) best = m;
  return best;
}

struct LeadingEntry {
  Partition lambda;
  std::size_t relvector = 0;
  int orbit_index = 0;
  std::pair<int, int> bidegree{0, 0};
  AbsPoly reduced;
  std::optional<AbsMonomial> leading;  // of the reduced vector itself; empty when degenerate
};

struct LeadingReport {
  int degree = 0;
  std::vector<LeadingEntry> entries;  // one per orbit vector
  std::vector<AbsMonomial> leading;   // distinct leading monomials of the reduced span
  std::size_t degenerate = 0;         // orbit vectors that vanish modulo the parameters
  std::size_t dependent = 0;          // nonzero reductions already in the span of earlier ones

  /// sum over the leading monomials of t^p u^q.
  BiSeries generating_function(int bound = kDefaultDegreeCap) const {
    BiSeries s(bound);
    for (const auto& m : leading) {
      auto [p, q] = m.bidegree();
      s.at(p, q) += 1;
    }
    return s;
  }
};

namespace detail {

// Echelon form with respect to lead_greater; returns the distinct leading
// monomials and the number of vectors that reduced to zero.
inline std::pair<std::vector<AbsMonomial>, std::size_t> lead_echelon(const std::vector<AbsPoly>& vs) {
  std::map<AbsMonomial, AbsPoly, decltype(&lead_greater)> pivots(&lead_greater);
  std::size_t dependent = 0;
  for (AbsPoly v : vs) {
    while (auto lm = leading_monomial(v)) {
      auto it = pivots.find(*lm);
      if (it == pivots.end()) {
        Rational c = v.coeff(*lm);
        pivots.emplace(*lm, v.scaled(Rational(1) / c));
        break;
      }
      v -= it->second.scaled(v.coeff(*lm));
    }
    if (v.is_zero()) ++dependent;
  }
  std::vector<AbsMonomial> out;
  for (const auto& [m, p] : pivots) out.push_back(m);
  return {out, dependent};
}

}  // namespace detail

/// Leading monomials of the relations of one total degree: the orbit vectors
/// of every relation space are reduced modulo the parameters and brought to
/// echelon form bidegree by bidegree.
inline LeadingReport leading_analysis(const std::vector<const RelationSpace*>& spaces) {
  LeadingReport rep;
  std::map<std::pair<int, int>, std::vector<AbsPoly>> by_bidegree;
  for (const auto* sp : spaces) {
    rep.degree = sp->lambda.size();
    for (std::size_t k = 0; k < sp->relvectors.size(); ++k) {
      auto orb = orbit_of(sp->relvectors[k], sp->lambda);
      for (std::size_t j = 0; j < orb.size(); ++j) {
        LeadingEntry e;
        e.lambda = sp->lambda;
        e.relvector = k;
        e.orbit_index = static_cast<int>(j);
        e.bidegree = {sp->lambda.first - static_cast<int>(j), sp->lambda.second + static_cast<int>(j)};
        e.reduced = reduce_mod_parameters(orb[j]);
        e.leading = leading_monomial(e.reduced);
        if (!e.leading) ++rep.degenerate;
        else by_bidegree[e.bidegree].push_back(e.reduced);
        rep.entries.push_back(std::move(e));
      }
    }
  }
  for (const auto& [bd, vs] : by_bidegree) {
    auto [lms, dep] = detail::lead_echelon(vs);
    rep.dependent += dep;
    for (auto& m : lms) rep.leading.push_back(m);
  }
  return rep;
}

inline LeadingReport leading_analysis(const RelationSpace& space) { return leading_analysis(std::vector<const RelationSpace*>{&space}); }

inline LeadingReport leading_analysis(RelationAtlas& atlas, int degree) {
  LeadingReport rep = leading_analysis(atlas.degree(degree));
  rep.degree = degree;
  return rep;
}

// ---------------------------------------------------------------------------
// Old and new relations.

struct NewRelationEntry {
  Partition lambda;
  std::size_t total = 0;  // multiplicity of W(lambda) in the relations
  std::size_t old = 0;    // inside the ideal generated by lower-degree relations
  std::size_t fresh = 0;
};

struct NewRelationReport {
  int degree = 0;
  std::vector<NewRelationEntry> entries;  // lambda with total > 0, descending l1
};

/// Smallest total degree carrying a relation.
inline constexpr int kFirstRelationDegree = 12;

inline NewRelationReport new_relations(RelationAtlas& atlas, int degree) {
  if (degree < kFirstRelationDegree || degree > 14)
    throw std::invalid_argument("new_relations: degree must be 12, 13 or 14");
  // Products of lower-degree orbit vectors with monomials of complementary degree.
  std::map<std::pair<int, int>, std::vector<AbsPoly>> old_by_bidegree;
  for (int lower = kFirstRelationDegree; lower <= degree - 2; ++lower) {
    std::vector<AbsMonomial> cofactors;
    for (int p = 0; p <= degree - lower; ++p)
      for (auto& m : abs_monomials(p, degree - lower - p)) cofactors.push_back(m);
    if (cofactors.empty()) continue;
    for (const auto& e : atlas.orbit_vectors(lower))
      for (const auto& m : cofactors) {
        AbsPoly prod = e * AbsPoly::monomial(m);
        old_by_bidegree[*prod.bidegree()].push_back(std::move(prod));
      }
  }
  auto old_dim = [&](int p, int q) -> std::size_t {
    auto it = old_by_bidegree.find({p, q});
    return it == old_by_bidegree.end() ? 0 : detail::span_rank(it->second);
  };
  NewRelationReport rep;
  rep.degree = degree;
  for (const auto* sp : atlas.degree(degree)) {
    if (sp->r() == 0) continue;
    NewRelationEntry e;
    e.lambda = sp->lambda;
    e.total = sp->r();
    const auto [l1, l2] = std::make_pair(sp->lambda.first, sp->lambda.second);
    e.old = old_dim(l1, l2) - (l2 > 0 ? old_dim(l1 + 1, l2 - 1) : 0);
    if (e.old > e.total) throw std::logic_error("new_relations: old part exceeds the relation space at " + sp->lambda.to_string());
    e.fresh = e.total - e.old;
    rep.entries.push_back(e);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Certificates.

struct RelationCertificate {
  Partition lambda;
  RatVector zeta;
  AbsPoly relvector;
  std::string trace_form;
  std::string digest;
  std::string leading;  // leading monomial modulo the parameters, or "degenerate"
};

inline RelationCertificate make_certificate(const RelationSpace& sp, std::size_t k, const GeneratorImages<QQ>& images) {
  RelationCertificate c;
  c.lambda = sp.lambda;
  c.zeta = sp.zeta.at(k);
  c.relvector = sp.relvectors.at(k);
  c.trace_form = phi(c.relvector).to_string();
  ZeroReport z = verify_zero(c.relvector, images);
  if (!z.zero) throw std::logic_error("make_certificate: relation does not vanish");
  c.digest = z.digest;
  auto lm = leading_monomial(reduce_mod_parameters(c.relvector));
  c.leading = lm ? lm->to_string() : "degenerate";
  return c;
}

/// Re-evaluates the certified relation; true when it vanishes with the recorded digest.
inline bool check_certificate(const RelationCertificate& c, const GeneratorImages<QQ>& images) {
  if (c.relvector.is_zero()) return false;
  ZeroReport z = verify_zero(c.relvector, images);
  return z.zero && z.digest == c.digest;
}

}  // namespace traceforge
