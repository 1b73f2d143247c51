#pragma once

// Words in {x, y}, noncommutative polynomials, and trace polynomials in
// cyclic-canonical form, with the polarization derivations and the
// triangular substitutions acting on them.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "traceforge/rings.hpp"

namespace traceforge {

class TracelessViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A word over {x, y}; stored as a string of the letters 'x' and 'y'.
using Word = std::string;

inline bool is_word(const Word& w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c == 'x' || c == 'y'; });
}

inline std::pair<int, int> word_bidegree(const Word& w) {
  int nx = static_cast<int>(std::count(w.begin(), w.end(), 'x'));
  return {nx, static_cast<int>(w.size()) - nx};
}

/// Lexicographically least rotation (x < y).
inline Word cyclic_normalize(const Word& w) {
  const std::size_t n = w.size();
  if (n < 2) return w;
  Word doubled = w + w;
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r)
    if (doubled.compare(r, n, doubled, best, n) < 0) best = r;
  return doubled.substr(best, n);
}

/// Shortlex order used to sort the factors of a trace monomial.
inline bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// "xxyxy" -> "x^2yxy"
inline std::string compress_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    out += w[i];
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// NcPoly

/// Element of the free associative algebra K<x, y>.
class NcPoly {
 public:
  using TermMap = std::map<Word, Rational>;

  NcPoly() = default;
  static NcPoly word(const Word& w, const Rational& c = Rational(1)) {
    if (!is_word(w)) throw std::invalid_argument("word must use letters x and y only: " + w);
    NcPoly p;
    p.add_term(w, c);
    return p;
  }
  static NcPoly one() { return word(""); }
  static NcPoly x() { return word("x"); }
  static NcPoly y() { return word("y"); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& w, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  NcPoly& operator+=(const NcPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NcPoly& operator-=(const NcPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NcPoly scaled(const Rational& s) const {
    NcPoly r;
    for (const auto& [w, c] : terms_) r.add_term(w, c * s);
    return r;
  }
  friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b) { return nc_mul(a, b); }
  friend bool operator==(const NcPoly& a, const NcPoly& b) { return a.terms_ == b.terms_; }

  friend NcPoly nc_mul(const NcPoly& a, const NcPoly& b) {
    NcPoly r;
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) r.add_term(wa + wb, ca * cb);
    return r;
  }

  NcPoly pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative power");
    NcPoly r = one();
    for (int k = 0; k < e; ++k) r = nc_mul(r, *this);
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      std::string cs = rational_to_string(c);
      bool negative = cs[0] == '-';
      if (negative) cs.erase(0, 1);
      os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      first = false;
      if (cs != "1" || w.empty()) os << cs << (w.empty() ? "" : "*");
      os << compress_word(w);
    }
    return os.str();
  }

 private:
  TermMap terms_;
};

/// xy - yx
inline NcPoly commutator(const NcPoly& a, const NcPoly& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------
// Trace monomials and trace polynomials

/// Product of traces of words: a sorted multiset of cyclic-canonical words,
/// each of length at least 2. The empty monomial is the constant 1.
class TraceMonomial {
 public:
  TraceMonomial() = default;
  explicit TraceMonomial(std::vector<Word> words) : words_(std::move(words)) {
    for (auto& w : words_) {
      if (!is_word(w)) throw std::invalid_argument("trace factor must use letters x and y only: " + w);
      if (w.size() < 2) throw TracelessViolation("trace of a word of length < 2 in the traceless setting: tr(" + w + ")");
      w = cyclic_normalize(w);
    }
    std::sort(words_.begin(), words_.end(), word_less);
  }
  static TraceMonomial single(const Word& w) { return TraceMonomial(std::vector<Word>{w}); }

  const std::vector<Word>& words() const { return words_; }
  bool is_one() const { return words_.empty(); }

  std::pair<int, int> bidegree() const {
    std::pair<int, int> d{0, 0};
    for (const auto& w : words_) {
      auto [a, b] = word_bidegree(w);
      d.first += a;
      d.second += b;
    }
    return d;
  }

  friend TraceMonomial operator*(const TraceMonomial& a, const TraceMonomial& b) {
    TraceMonomial r;
    r.words_.reserve(a.words_.size() + b.words_.size());
    std::merge(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end(), std::back_inserter(r.words_),
               word_less);
    return r;
  }
  friend bool operator==(const TraceMonomial& a, const TraceMonomial& b) { return a.words_ == b.words_; }
  friend bool operator<(const TraceMonomial& a, const TraceMonomial& b) {
    if (a.words_.size() != b.words_.size()) return a.words_.size() < b.words_.size();
    return std::lexicographical_compare(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end(),
                                        word_less);
  }

  /// "tr(x^2)*tr(xy)^2"; "1" for the empty monomial.
  std::string to_string() const {
    if (words_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < words_.size();) {
      std::size_t j = i;
      while (j < words_.size() && words_[j] == words_[i]) ++j;
      if (!out.empty()) out += "*";
      out += "tr(" + compress_word(words_[i]) + ")";
      if (j - i > 1) out += "^" + std::to_string(j - i);
      i = j;
    }
    return out;
  }

 private:
  std::vector<Word> words_;
};

/// Q-linear combination of trace monomials; an element of the traceless
/// trace algebra up to cyclic invariance.
class TraceExpr {
 public:
  using TermMap = std::map<TraceMonomial, Rational>;

  TraceExpr() = default;
  static TraceExpr constant(const Rational& c) {
    TraceExpr e;
    e.add_term(TraceMonomial{}, c);
    return e;
  }
  static TraceExpr monomial(const TraceMonomial& m, const Rational& c = Rational(1)) {
    TraceExpr e;
    e.add_term(m, c);
    return e;
  }
  static TraceExpr trace(const Word& w) { return monomial(TraceMonomial::single(w)); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const TraceMonomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  TraceExpr& operator+=(const TraceExpr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  TraceExpr& operator-=(const TraceExpr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  TraceExpr scaled(const Rational& s) const {
    TraceExpr r;
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }
  friend TraceExpr operator+(TraceExpr a, const TraceExpr& b) { return a += b; }
  friend TraceExpr operator-(TraceExpr a, const TraceExpr& b) { return a -= b; }
  friend TraceExpr operator*(const TraceExpr& a, const TraceExpr& b) { return trace_mul(a, b); }
  friend bool operator==(const TraceExpr& a, const TraceExpr& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const TraceExpr& a, const TraceExpr& b) { return !(a == b); }

  friend TraceExpr trace_mul(const TraceExpr& a, const TraceExpr& b) {
    TraceExpr r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  TraceExpr pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative power");
    TraceExpr r = constant(Rational(1));
    for (int k = 0; k < e; ++k) r = trace_mul(r, *this);
    return r;
  }

  /// Common bidegree of all monomials; nullopt when not bihomogeneous.
  /// The zero expression has no bidegree.
  std::optional<std::pair<int, int>> bidegree() const {
    std::optional<std::pair<int, int>> d;
    for (const auto& [m, c] : terms_) {
      auto md = m.bidegree();
      if (d && *d != md) return std::nullopt;
      d = md;
    }
    return d;
  }

  /// Rendering in the trace grammar.
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

/// Maps each word to its cyclic class; rejects words of length < 2.
inline TraceExpr trace_of(const NcPoly& a) {
  TraceExpr r;
  for (const auto& [w, c] : a.terms()) {
    if (w.size() < 2) throw TracelessViolation("trace_of: word '" + w + "' has length < 2; tr(1), tr(x), tr(y) must be reduced explicitly");
    r.add_term(TraceMonomial::single(w), c);
  }
  return r;
}

namespace detail {

/// Derivation sending letter `from` to letter `to`, extended by Leibniz
/// across trace factors and across letters of each word.
inline TraceExpr letter_derivation(const TraceExpr& e, char from, char to) {
  TraceExpr r;
  for (const auto& [m, c] : e.terms()) {
    const auto& ws = m.words();
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const Word& w = ws[i];
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] != from) continue;
        std::vector<Word> nw = ws;
        nw[i][k] = to;
        r.add_term(TraceMonomial(std::move(nw)), c);
      }
    }
  }
  return r;
}

/// All words obtained by replacing each `from` letter by either itself or
/// `to` (the expansion of from -> from + to).
inline void expand_letter(const Word& w, char from, char to, std::size_t pos, Word& cur, std::vector<Word>& out) {
  if (pos == w.size()) {
    out.push_back(cur);
    return;
  }
  cur.push_back(w[pos]);
  expand_letter(w, from, to, pos + 1, cur, out);
  cur.pop_back();
  if (w[pos] == from) {
    cur.push_back(to);
    expand_letter(w, from, to, pos + 1, cur, out);
    cur.pop_back();
  }
}

inline TraceExpr linear_substitution(const TraceExpr& e, char from, char to) {
  TraceExpr r;
  for (const auto& [m, c] : e.terms()) {
    TraceExpr prod = TraceExpr::constant(c);
    for (const auto& w : m.words()) {
      std::vector<Word> expansions;
      Word cur;
      expand_letter(w, from, to, 0, cur, expansions);
      TraceExpr factor;
      for (const auto& x : expansions) factor.add_term(TraceMonomial::single(x), Rational(1));
      prod = trace_mul(prod, factor);
    }
    r += prod;
  }
  return r;
}

}  // namespace detail

/// Raising derivation: x -> 0, y -> x.
inline TraceExpr delta(const TraceExpr& e) { return detail::letter_derivation(e, 'y', 'x'); }
/// Lowering derivation: x -> y, y -> 0.
inline TraceExpr delta1(const TraceExpr& e) { return detail::letter_derivation(e, 'x', 'y'); }
/// y -> x + y
inline TraceExpr subst_h(const TraceExpr& e) { return detail::linear_substitution(e, 'y', 'x'); }
/// x -> x + y
inline TraceExpr subst_h1(const TraceExpr& e) { return detail::linear_substitution(e, 'x', 'y'); }

}  // namespace traceforge
