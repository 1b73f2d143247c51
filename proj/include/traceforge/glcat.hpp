#pragma once

// GL_2 bookkeeping for the traceless trace algebra of two 4x4 matrices:
// two-row partitions, Schur functions, the twelve generator modules and
// their normalized bases, the free commutative algebra on the thirty basis
// generators u_{i,j}, its raising/lowering derivations, and the map Phi
// back to trace polynomials.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "traceforge/genmat.hpp"
#include "traceforge/poly.hpp"
#include "traceforge/trace.hpp"

namespace traceforge {

inline constexpr int kDefaultDegreeCap = 14;

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A two-row partition (first, second) with first >= second >= 0.
struct Partition {
  int first = 0;
  int second = 0;

  Partition() = default;
  Partition(int l1, int l2) : first(l1), second(l2) {
    if (l2 < 0 || l1 < l2) throw std::invalid_argument("not a partition: (" + std::to_string(l1) + "," + std::to_string(l2) + ")");
  }
  int size() const { return first + second; }
  /// The width a of lambda = (a + b, b).
  int width() const { return first - second; }
  std::string to_string() const { return "(" + std::to_string(first) + "," + std::to_string(second) + ")"; }
  friend bool operator==(const Partition& a, const Partition& b) { return a.first == b.first && a.second == b.second; }
  friend bool operator<(const Partition& a, const Partition& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.first > b.first;
  }
};

/// (tu)^l2 (t^a + t^{a-1} u + ... + u^a), a = l1 - l2.
inline BiSeries schur(const Partition& lambda, int bound) {
  if (lambda.size() > bound) throw std::invalid_argument("schur: partition exceeds truncation bound");
  BiSeries s(bound);
  for (int k = 0; k <= lambda.width(); ++k) s.at(lambda.first - k, lambda.second + k) = 1;
  return s;
}

// ---------------------------------------------------------------------------
// Generator modules

/// One irreducible summand W(a + b, b) of the generating module.
struct GeneratorModule {
  int index = 0;  // 1..12
  Partition partition;
  TraceExpr hwv;
  std::vector<TraceExpr> basis;  // e_0 .. e_a

  int a() const { return partition.width(); }
  int b() const { return partition.second; }
  int dimension() const { return a() + 1; }
};

inline constexpr int kModuleCount = 12;
inline constexpr int kGeneratorCount = 30;

/// The module partitions in their fixed order.
inline const std::array<Partition, kModuleCount>& module_partitions() {
  static const std::array<Partition, kModuleCount> parts{
      Partition(2, 0), Partition(3, 0), Partition(4, 0), Partition(2, 2), Partition(3, 2), Partition(4, 2),
      Partition(3, 3), Partition(4, 3), Partition(5, 3), Partition(4, 4), Partition(6, 3), Partition(5, 5)};
  return parts;
}

/// tr([x,y]^b x^a), or the special generator of W(5,5).
inline TraceExpr module_hwv(const Partition& p) {
  const NcPoly x = NcPoly::x(), y = NcPoly::y();
  const NcPoly c = commutator(x, y);
  if (p == Partition(5, 5)) {
    NcPoly tail = x * x * y * y - x * y * y * x - y * x * x * y + y * y * x * x;
    return trace_of(c.pow(3) * tail);
  }
  return trace_of(c.pow(p.second) * x.pow(p.width()));
}

/// e_j = Delta_1^j(w) / (a (a-1) ... (a-j+1)).
inline std::vector<TraceExpr> module_basis(const TraceExpr& hwv, int a) {
  std::vector<TraceExpr> basis{hwv};
  TraceExpr cur = hwv;
  Rational falling(1);
  for (int j = 1; j <= a; ++j) {
    cur = delta1(cur);
    falling *= a - j + 1;
    basis.push_back(cur.scaled(Rational(1) / falling));
  }
  return basis;
}

namespace detail {

/// Certifies the ladder constants used by the abstract derivations:
/// Delta(e_j) = j e_{j-1} and Delta_1(e_j) = (a - j) e_{j+1} after evaluation,
/// plus bidegrees and Delta_1(e_a) = 0.
inline void certify_module(const GeneratorModule& m, EvalCache& cache) {
  const int a = m.a();
  for (int j = 0; j <= a; ++j) {
    const TraceExpr& e = m.basis[static_cast<std::size_t>(j)];
    auto bd = e.bidegree();
    if (!bd || *bd != std::pair<int, int>{m.partition.first - j, m.partition.second + j})
      throw CatalogError("catalog: basis element has wrong bidegree in module " + std::to_string(m.index));
    CommPoly raised = eval_trace_expr(delta(e), cache);
    CommPoly expect_raised(entry_vars());
    if (j > 0) expect_raised = eval_trace_expr(m.basis[static_cast<std::size_t>(j - 1)], cache).scaled(Rational(j));
    if (raised != expect_raised)
      throw CatalogError("catalog: Delta ladder constant fails for u_{" + std::to_string(m.index) + "," + std::to_string(j) + "}");
    CommPoly lowered = eval_trace_expr(delta1(e), cache);
    CommPoly expect_lowered(entry_vars());
    if (j < a) expect_lowered = eval_trace_expr(m.basis[static_cast<std::size_t>(j + 1)], cache).scaled(Rational(a - j));
    if (lowered != expect_lowered)
      throw CatalogError("catalog: Delta_1 ladder constant fails for u_{" + std::to_string(m.index) + "," + std::to_string(j) + "}");
    if (eval_trace_expr(e, cache).is_zero())
      throw CatalogError("catalog: basis element evaluates to zero in module " + std::to_string(m.index));
  }
}

}  // namespace detail

/// The twelve generator modules as trace expressions, without evaluation.
inline const std::vector<GeneratorModule>& catalog_modules() {
  static const std::vector<GeneratorModule> modules = [] {
    std::vector<GeneratorModule> out;
    for (int i = 0; i < kModuleCount; ++i) {
      GeneratorModule m;
      m.index = i + 1;
      m.partition = module_partitions()[static_cast<std::size_t>(i)];
      m.hwv = module_hwv(m.partition);
      m.basis = module_basis(m.hwv, m.a());
      out.push_back(std::move(m));
    }
    return out;
  }();
  return modules;
}

/// The same modules, certified once on the generic matrices. Throws
/// CatalogError if any certification fails.
inline const std::vector<GeneratorModule>& catalog() {
  static const bool certified = [] {
    EvalCache cache;
    for (const auto& m : catalog_modules()) detail::certify_module(m, cache);
    return true;
  }();
  (void)certified;
  return catalog_modules();
}

// ---------------------------------------------------------------------------
// Abstract generators u_{i,j}

/// Basis generator u_{module, j}; flat index 0..29 in the order
/// u_{1,0} < u_{1,1} < ... < u_{12,0}.
struct AbsGen {
  int module = 0;  // 1..12
  int j = 0;       // 0..a
  int flat = 0;
  std::pair<int, int> bidegree{0, 0};

  std::string name() const {
    return "u" + std::to_string(module) + (module >= 10 ? "," : "") + std::to_string(j);
  }
  /// u_{i,j} with explicit comma, e.g. "u_{5,0}".
  std::string long_name() const { return "u_{" + std::to_string(module) + "," + std::to_string(j) + "}"; }
};

inline const std::array<AbsGen, kGeneratorCount>& abs_generators() {
  static const std::array<AbsGen, kGeneratorCount> gens = [] {
    std::array<AbsGen, kGeneratorCount> g{};
    int flat = 0;
    for (int i = 0; i < kModuleCount; ++i) {
      const Partition& p = module_partitions()[static_cast<std::size_t>(i)];
      for (int j = 0; j <= p.width(); ++j) {
        g[static_cast<std::size_t>(flat)] = AbsGen{i + 1, j, flat, {p.first - j, p.second + j}};
        ++flat;
      }
    }
    if (flat != kGeneratorCount) throw CatalogError("generator count mismatch");
    return g;
  }();
  return gens;
}

/// Flat index of u_{module, j}.
inline int abs_index(int module, int j) {
  if (module < 1 || module > kModuleCount) throw std::out_of_range("module index out of range");
  const Partition& p = module_partitions()[static_cast<std::size_t>(module - 1)];
  if (j < 0 || j > p.width()) throw std::out_of_range("basis index out of range for module " + std::to_string(module));
  int flat = 0;
  for (int i = 1; i < module; ++i) flat += module_partitions()[static_cast<std::size_t>(i - 1)].width() + 1;
  return flat + j;
}

/// Monomial in the thirty generators; exponents packed as bytes.
class AbsMonomial {
 public:
  AbsMonomial() = default;
  static AbsMonomial generator(int flat, int power = 1) {
    AbsMonomial m;
    m.set(flat, power);
    return m;
  }

  int exponent(int flat) const { return e_[static_cast<std::size_t>(flat)]; }
  void set(int flat, int e) {
    if (e < 0 || e > 255) throw std::out_of_range("generator exponent out of range");
    e_[static_cast<std::size_t>(flat)] = static_cast<std::uint8_t>(e);
  }
  int factor_count() const {
    int n = 0;
    for (auto v : e_) n += v;
    return n;
  }
  bool is_one() const { return factor_count() == 0; }
  std::pair<int, int> bidegree() const {
    std::pair<int, int> d{0, 0};
    for (int g = 0; g < kGeneratorCount; ++g) {
      int e = exponent(g);
      d.first += e * abs_generators()[static_cast<std::size_t>(g)].bidegree.first;
      d.second += e * abs_generators()[static_cast<std::size_t>(g)].bidegree.second;
    }
    return d;
  }
  /// Number of factors drawn from each module.
  std::array<int, kModuleCount> module_multidegree() const {
    std::array<int, kModuleCount> m{};
    for (int g = 0; g < kGeneratorCount; ++g) m[static_cast<std::size_t>(abs_generators()[static_cast<std::size_t>(g)].module - 1)] += exponent(g);
    return m;
  }

  friend AbsMonomial operator*(const AbsMonomial& a, const AbsMonomial& b) {
    AbsMonomial m;
    for (std::size_t i = 0; i < a.e_.size(); ++i) {
      int s = a.e_[i] + b.e_[i];
      if (s > 255) throw std::out_of_range("generator exponent overflow");
      m.e_[i] = static_cast<std::uint8_t>(s);
    }
    return m;
  }
  friend bool operator==(const AbsMonomial& a, const AbsMonomial& b) { return a.e_ == b.e_; }
  friend bool operator!=(const AbsMonomial& a, const AbsMonomial& b) { return !(a == b); }

  /// Graded lex: fewer factors first; then compare exponents from u_{12,0}
  /// downward, smaller exponent first.
  friend bool operator<(const AbsMonomial& a, const AbsMonomial& b) {
    int fa = a.factor_count(), fb = b.factor_count();
    if (fa != fb) return fa < fb;
    for (int g = kGeneratorCount - 1; g >= 0; --g)
      if (a.exponent(g) != b.exponent(g)) return a.exponent(g) < b.exponent(g);
    return false;
  }

  /// "u10^2*u81"; "1" for the empty monomial.
  std::string to_string() const {
    std::string out;
    for (int g = 0; g < kGeneratorCount; ++g) {
      int e = exponent(g);
      if (!e) continue;
      if (!out.empty()) out += "*";
      out += abs_generators()[static_cast<std::size_t>(g)].name();
      if (e > 1) out += "^" + std::to_string(e);
    }
    return out.empty() ? "1" : out;
  }

  /// (flat index, exponent) pairs for JSON emission.
  std::vector<std::pair<int, int>> factors() const {
    std::vector<std::pair<int, int>> f;
    for (int g = 0; g < kGeneratorCount; ++g)
      if (exponent(g)) f.emplace_back(g, exponent(g));
    return f;
  }

 private:
  std::array<std::uint8_t, 32> e_{};
};

/// Element of the free commutative algebra K[G_0] on the thirty generators.
class AbsPoly {
 public:
  using TermMap = std::map<AbsMonomial, Rational>;

  AbsPoly() = default;
  static AbsPoly monomial(const AbsMonomial& m, const Rational& c = Rational(1)) {
    AbsPoly p;
    p.add_term(m, c);
    return p;
  }
  static AbsPoly generator(int module, int j) { return monomial(AbsMonomial::generator(abs_index(module, j))); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const AbsMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const AbsMonomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  AbsPoly& operator+=(const AbsPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  AbsPoly& operator-=(const AbsPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  AbsPoly scaled(const Rational& s) const {
    AbsPoly r;
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }
  friend AbsPoly operator+(AbsPoly a, const AbsPoly& b) { return a += b; }
  friend AbsPoly operator-(AbsPoly a, const AbsPoly& b) { return a -= b; }
  friend AbsPoly operator*(const AbsPoly& a, const AbsPoly& b) {
    AbsPoly r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  friend bool operator==(const AbsPoly& a, const AbsPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const AbsPoly& a, const AbsPoly& b) { return !(a == b); }

  std::optional<std::pair<int, int>> bidegree() const {
    std::optional<std::pair<int, int>> d;
    for (const auto& [m, c] : terms_) {
      auto md = m.bidegree();
      if (d && *d != md) return std::nullopt;
      d = md;
    }
    return d;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string cs = rational_to_string(c);
      bool negative = cs[0] == '-';
      if (negative) cs.erase(0, 1);
      os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      first = false;
      if (m.is_one()) {
        os << cs;
      } else {
        if (cs != "1") os << cs << "*";
        os << m.to_string();
      }
    }
    return os.str();
  }

 private:
  TermMap terms_;
};

namespace detail {

/// Leibniz extension of u_{i,j} -> weight(i, j) * u_{i, j + step}.
template <class Weight>
AbsPoly abs_derivation(const AbsPoly& p, int step, Weight weight) {
  const auto& gens = abs_generators();
  AbsPoly r;
  for (const auto& [m, c] : p.terms()) {
    for (int g = 0; g < kGeneratorCount; ++g) {
      int e = m.exponent(g);
      if (!e) continue;
      const AbsGen& gen = gens[static_cast<std::size_t>(g)];
      int target_j = gen.j + step;
      int a = module_partitions()[static_cast<std::size_t>(gen.module - 1)].width();
      if (target_j < 0 || target_j > a) continue;
      Rational w = weight(gen.j, a);
      if (sgn(w) == 0) continue;
      AbsMonomial nm = m;
      nm.set(g, e - 1);
      int tg = g + step;
      nm.set(tg, nm.exponent(tg) + 1);
      r.add_term(nm, c * e * w);
    }
  }
  return r;
}

}  // namespace detail

/// Delta(u_{i,j}) = j u_{i,j-1}.
inline AbsPoly abs_delta(const AbsPoly& p) {
  return detail::abs_derivation(p, -1, [](int j, int) { return Rational(j); });
}
/// Delta_1(u_{i,j}) = (a_i - j) u_{i,j+1}.
inline AbsPoly abs_delta1(const AbsPoly& p) {
  return detail::abs_derivation(p, +1, [](int j, int a) { return Rational(a - j); });
}

/// Truncated Hilbert series of K[G_0]: product of 1/(1 - t^p u^q) over the
/// generator bidegrees.
inline BiSeries hilbert_KG0(int bound = kDefaultDegreeCap) {
  BiSeries h = BiSeries::one(bound);
  for (const auto& g : abs_generators()) h = series_mul(h, series_inv_geom(g.bidegree.first, g.bidegree.second, bound));
  return h;
}

inline void check_cap(const Partition& lambda, int cap) {
  if (lambda.size() > cap) throw std::out_of_range("partition " + lambda.to_string() + " exceeds degree cap " + std::to_string(cap));
}

/// m(lambda) = h(l1, l2) - h(l1 + 1, l2 - 1).
inline long multiplicity(const Partition& lambda, int cap = kDefaultDegreeCap) {
  check_cap(lambda, cap);
  BiSeries h = hilbert_KG0(cap);
  Rational m = h.coeff(lambda.first, lambda.second) - h.coeff(lambda.first + 1, lambda.second - 1);
  return m.get_num().get_si();
}

namespace detail {

inline void enumerate_monomials(int g, std::pair<int, int> remaining, AbsMonomial& cur, std::vector<AbsMonomial>& out) {
  if (remaining.first == 0 && remaining.second == 0) {
    out.push_back(cur);
    return;
  }
  if (g < 0) return;
  const auto [p, q] = abs_generators()[static_cast<std::size_t>(g)].bidegree;
  for (int e = 0; e * p <= remaining.first && e * q <= remaining.second; ++e) {
    cur.set(g, e);
    enumerate_monomials(g - 1, {remaining.first - e * p, remaining.second - e * q}, cur, out);
  }
  cur.set(g, 0);
}

}  // namespace detail

/// All monomials of the given bidegree, sorted ascending.
inline std::vector<AbsMonomial> abs_monomials(int p, int q) {
  std::vector<AbsMonomial> out;
  if (p < 0 || q < 0) return out;
  AbsMonomial cur;
  detail::enumerate_monomials(kGeneratorCount - 1, {p, q}, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}
inline std::vector<AbsMonomial> abs_monomials(const Partition& lambda) { return abs_monomials(lambda.first, lambda.second); }

/// Phi: u_{i,j} -> e_j of module i, extended multiplicatively.
inline TraceExpr phi(const AbsPoly& p) {
  const auto& mods = catalog_modules();
  const auto& gens = abs_generators();
  TraceExpr r;
  for (const auto& [m, c] : p.terms()) {
    TraceExpr prod = TraceExpr::constant(c);
    for (int g = 0; g < kGeneratorCount; ++g) {
      int e = m.exponent(g);
      if (!e) continue;
      const AbsGen& gen = gens[static_cast<std::size_t>(g)];
      const TraceExpr& base = mods[static_cast<std::size_t>(gen.module - 1)].basis[static_cast<std::size_t>(gen.j)];
      for (int k = 0; k < e; ++k) prod = trace_mul(prod, base);
    }
    r += prod;
  }
  return r;
}

}  // namespace traceforge
