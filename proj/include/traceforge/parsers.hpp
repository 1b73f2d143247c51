#pragma once

// Concrete syntax: the trace grammar (tr(...) products with rational
// coefficients) and the Phi grammar over t_i, x_i, y_i, z_i^(j,k).

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "traceforge/glcat.hpp"
#include "traceforge/trace.hpp"

namespace traceforge {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// A Phi monomial that is not a product of complete module basis elements.
class CompletenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Character cursor shared by both grammars; '#' starts a comment.
class Cursor {
 public:
  explicit Cursor(std::string_view src) : s_(src) {}

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
      else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else break;
    }
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  // Next raw character, no whitespace skipping.
  char raw() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_end() { return peek() == '\0'; }
  bool starts_with(std::string_view w) {
    skip();
    return s_.substr(i_, w.size()) == w;
  }
  void advance(std::size_t n) { i_ += n; }
  std::size_t pos() const { return i_; }

  /// Unsigned decimal integer.
  long integer() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected integer");
    if (i_ - start > 9) fail("integer too large");
    return std::stol(std::string(s_.substr(start, i_ - start)));
  }
  /// Unsigned "n" or "n/d".
  Rational rational() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected number");
    if (i_ < s_.size() && s_[i_] == '/') {
      ++i_;
      std::size_t d = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (d == i_) fail("expected denominator");
    }
    try {
      return parse_rational(s_.substr(start, i_ - start));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), start);
    }
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i_); }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// ---------------------------------------------------------------------------
// Trace grammar.

class TraceParser {
 public:
  explicit TraceParser(std::string_view src) : c_(src) {}

  TraceExpr parse() {
    TraceExpr e = expr();
    if (!c_.at_end()) c_.fail("unexpected character '" + std::string(1, c_.peek()) + "'");
    return e;
  }

 private:
  TraceExpr expr() {
    TraceExpr r;
    bool negative = c_.eat('-');
    if (!negative) c_.eat('+');
    r += term().scaled(Rational(negative ? -1 : 1));
    while (true) {
      if (c_.eat('+')) r += term();
      else if (c_.eat('-')) r -= term();
      else break;
    }
    return r;
  }

  // term := rational? ('*'? factor)+ | rational
  TraceExpr term() {
    Rational coef(1);
    bool have_coef = false;
    if (is_digit(c_.peek())) {
      coef = c_.rational();
      have_coef = true;
    }
    TraceExpr r = TraceExpr::constant(coef);
    bool any = false;
    while (true) {
      bool star = c_.eat('*');
      if (c_.starts_with("tr")) {
        r = trace_mul(r, factor());
        any = true;
      } else if (star) {
        c_.fail("expected tr(...) after '*'");
      } else {
        break;
      }
    }
    if (!any && !have_coef) c_.fail("expected a term");
    return r;
  }

  TraceExpr factor() {
    std::size_t at = c_.pos();
    c_.advance(2);
    c_.expect('(');
    NcPoly w = ncword();
    c_.expect(')');
    TraceExpr t;
    try {
      t = trace_of(w);
    } catch (const TracelessViolation& e) {
      throw ParseError(e.what(), at);
    }
    if (c_.eat('^')) {
      long k = c_.integer();
      TraceExpr p = TraceExpr::constant(Rational(1));
      for (long i = 0; i < k; ++i) p = trace_mul(p, t);
      return p;
    }
    return t;
  }

  NcPoly ncword() {
    NcPoly r = ncatom();
    while (true) {
      char ch = c_.peek();
      if (ch == 'x' || ch == 'y' || ch == '[' || ch == '(') r = r * ncatom();
      else break;
    }
    return r;
  }

  NcPoly ncatom() {
    NcPoly a;
    char ch = c_.peek();
    if (ch == 'x' || ch == 'y') {
      c_.advance(1);
      a = ch == 'x' ? NcPoly::x() : NcPoly::y();
    } else if (c_.eat('[')) {
      NcPoly l = ncword();
      c_.expect(',');
      NcPoly r = ncword();
      c_.expect(']');
      a = commutator(l, r);
    } else if (c_.eat('(')) {
      a = ncsum();
      c_.expect(')');
    } else {
      c_.fail("expected x, y, '[' or '('");
    }
    while (c_.eat('^')) a = a.pow(static_cast<int>(c_.integer()));
    return a;
  }

  NcPoly ncsum() {
    bool negative = c_.eat('-');
    if (!negative) c_.eat('+');
    NcPoly r = negative ? NcPoly() - ncword() : ncword();
    while (true) {
      if (c_.eat('+')) r = r + ncword();
      else if (c_.eat('-')) r = r - ncword();
      else break;
    }
    return r;
  }

  Cursor c_;
};

// ---------------------------------------------------------------------------
// Phi grammar.

/// Symbols of the Phi language, laid out module by module:
/// t_i, x_i, y_i, then z_i^(a_i - k, k) for k = 0..a_i.
struct PhiSymbols {
  std::array<int, kModuleCount> offset{};
  int count = 0;

  PhiSymbols() {
    for (int i = 0; i < kModuleCount; ++i) {
      offset[static_cast<std::size_t>(i)] = count;
      count += 3 + module_partitions()[static_cast<std::size_t>(i)].width() + 1;
    }
  }
  int t(int m) const { return offset[static_cast<std::size_t>(m - 1)]; }
  int x(int m) const { return t(m) + 1; }
  int y(int m) const { return t(m) + 2; }
  int z(int m, int k) const { return t(m) + 3 + k; }
};

inline const PhiSymbols& phi_symbols() {
  static const PhiSymbols s;
  return s;
}

/// Polynomial in the Phi symbols; exponent vectors as keys.
using PhiMonomial = std::vector<int>;
using PhiPoly = std::map<PhiMonomial, Rational>;

inline PhiPoly phi_const(const Rational& c) {
  PhiPoly p;
  if (sgn(c) != 0) p[PhiMonomial(static_cast<std::size_t>(phi_symbols().count), 0)] = c;
  return p;
}

inline void phi_add_into(PhiPoly& a, const PhiPoly& b, const Rational& s = Rational(1)) {
  for (const auto& [m, c] : b) {
    Rational& slot = a[m];
    slot += c * s;
    if (sgn(slot) == 0) a.erase(m);
  }
}

inline PhiPoly phi_mul(const PhiPoly& a, const PhiPoly& b) {
  PhiPoly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      PhiMonomial m(ma.size());
      for (std::size_t k = 0; k < m.size(); ++k) m[k] = ma[k] + mb[k];
      Rational& slot = r[m];
      slot += ca * cb;
      if (sgn(slot) == 0) r.erase(m);
    }
  return r;
}

inline PhiPoly phi_pow(const PhiPoly& a, long e) {
  PhiPoly r = phi_const(Rational(1));
  for (long k = 0; k < e; ++k) r = phi_mul(r, a);
  return r;
}

class PhiParser {
 public:
  explicit PhiParser(std::string_view src) : c_(src) {}

  PhiPoly parse() {
    PhiPoly p = sum();
    if (!c_.at_end()) c_.fail("unexpected character '" + std::string(1, c_.peek()) + "'");
    return p;
  }

 private:
  PhiPoly sum() {
    PhiPoly r;
    bool negative = c_.eat('-');
    if (!negative) c_.eat('+');
    phi_add_into(r, prod(), Rational(negative ? -1 : 1));
    while (true) {
      if (c_.eat('+')) phi_add_into(r, prod());
      else if (c_.eat('-')) phi_add_into(r, prod(), Rational(-1));
      else break;
    }
    return r;
  }

  PhiPoly prod() {
    PhiPoly r = atom();
    while (c_.eat('*')) r = phi_mul(r, atom());
    return r;
  }

  PhiPoly atom() {
    char ch = c_.peek();
    if (is_digit(ch)) return phi_const(c_.rational());
    if (c_.eat('(')) {
      PhiPoly inner = sum();
      c_.expect(')');
      if (c_.eat('^')) inner = phi_pow(inner, c_.integer());
      return inner;
    }
    if (ch == 't' || ch == 'x' || ch == 'y' || ch == 'z') {
      int sym = var();
      long e = 1;
      if (c_.eat('^')) e = c_.integer();
      PhiPoly p = phi_const(Rational(1));
      PhiMonomial m = p.begin()->first;
      m[static_cast<std::size_t>(sym)] = static_cast<int>(e);
      PhiPoly r;
      r[m] = Rational(1);
      return r;
    }
    c_.fail("expected number, variable or '('");
  }

  int var() {
    char kind = c_.peek();
    c_.advance(1);
    if (!is_digit(c_.raw())) c_.fail(std::string("expected module index after '") + kind + "'");
    std::size_t at = c_.pos();
    long idx = c_.integer();
    if (idx < 1 || idx > kModuleCount) throw ParseError("module index " + std::to_string(idx) + " outside 1..12", at);
    const int m = static_cast<int>(idx);
    const auto& s = phi_symbols();
    if (kind == 't') return s.t(m);
    if (kind == 'x') return s.x(m);
    if (kind == 'y') return s.y(m);
    // z_i^(j,k) = x_i^j y_i^k with j + k = a_i
    c_.expect('^');
    c_.expect('(');
    long j = c_.integer();
    c_.expect(',');
    long k = c_.integer();
    c_.expect(')');
    const int a = module_partitions()[static_cast<std::size_t>(m - 1)].width();
    if (j + k != a)
      throw ParseError("z" + std::to_string(m) + "^(" + std::to_string(j) + "," + std::to_string(k) + ") needs degree " +
                           std::to_string(a),
                       at);
    return s.z(m, static_cast<int>(k));
  }

  Cursor c_;
};

inline std::string phi_monomial_text(const PhiMonomial& m) {
  const auto& s = phi_symbols();
  std::string out;
  for (int i = 1; i <= kModuleCount; ++i) {
    const int a = module_partitions()[static_cast<std::size_t>(i - 1)].width();
    auto put = [&](const std::string& name, int e) {
      if (!e) return;
      if (!out.empty()) out += "*";
      out += e > 1 ? "(" + name + ")^" + std::to_string(e) : name;
    };
    put("t" + std::to_string(i), m[static_cast<std::size_t>(s.t(i))]);
    put("x" + std::to_string(i), m[static_cast<std::size_t>(s.x(i))]);
    put("y" + std::to_string(i), m[static_cast<std::size_t>(s.y(i))]);
    for (int k = 0; k <= a; ++k)
      put("z" + std::to_string(i) + "^(" + std::to_string(a - k) + "," + std::to_string(k) + ")", m[static_cast<std::size_t>(s.z(i, k))]);
  }
  return out.empty() ? "1" : out;
}

/// Maps an expanded Phi monomial to its generator monomial, enforcing
/// the completeness rule module by module.
inline AbsMonomial phi_to_abs(const PhiMonomial& pm) {
  const auto& s = phi_symbols();
  AbsMonomial out;
  auto bump = [&](int module, int k, int e) {
    if (!e) return;
    int g = abs_index(module, k);
    out.set(g, out.exponent(g) + e);
  };
  for (int i = 1; i <= kModuleCount; ++i) {
    const Partition& p = module_partitions()[static_cast<std::size_t>(i - 1)];
    const int a = p.width(), b = p.second;
    const int te = pm[static_cast<std::size_t>(s.t(i))];
    const int px = pm[static_cast<std::size_t>(s.x(i))], py = pm[static_cast<std::size_t>(s.y(i))];
    int zcount = 0;
    for (int k = 0; k <= a; ++k) zcount += pm[static_cast<std::size_t>(s.z(i, k))];
    auto bad = [&](const std::string& why) -> CompletenessError {
      return CompletenessError("module " + std::to_string(i) + " in monomial " + phi_monomial_text(pm) + ": " + why);
    };
    int plain_slots = 0;
    if (b > 0) {
      if (te % b != 0) throw bad("t" + std::to_string(i) + " exponent must be a multiple of " + std::to_string(b));
      const int m = te / b;
      plain_slots = m - zcount;
      if (plain_slots < 0) throw bad("more z factors than t" + std::to_string(i) + " slots");
      if (px + py != a * plain_slots)
        throw bad("x/y degree " + std::to_string(px + py) + " does not fill " + std::to_string(plain_slots) + " slot(s) of degree " + std::to_string(a));
    } else {
      if (te) throw bad("t" + std::to_string(i) + " cannot appear (b = 0)");
      if ((px + py) % a != 0) throw bad("x/y degree " + std::to_string(px + py) + " is not a multiple of " + std::to_string(a));
      plain_slots = (px + py) / a;
    }
    if (a == 0) {
      bump(i, 0, plain_slots + zcount);
      continue;
    }
    if (a == 1) {
      // Every slot is a single letter, so the split is unambiguous.
      bump(i, 0, px);
      bump(i, 1, py);
    } else if (plain_slots == 1) {
      bump(i, py, 1);
    } else if (plain_slots > 1) {
      throw bad("plain x/y span " + std::to_string(plain_slots) + " slots; use z notation");
    }
    for (int k = 0; k <= a; ++k) bump(i, k, pm[static_cast<std::size_t>(s.z(i, k))]);
  }
  return out;
}

}  // namespace detail

inline TraceExpr parse_trace(std::string_view src) { return detail::TraceParser(src).parse(); }

/// Expands a Phi expression and maps it into K[G_0].
inline AbsPoly parse_phi(std::string_view src) {
  detail::PhiPoly p = detail::PhiParser(src).parse();
  AbsPoly out;
  for (const auto& [m, c] : p) out.add_term(detail::phi_to_abs(m), c);
  return out;
}

/// Splits Phi source at its top-level '+' and '-' (comments dropped); each
/// piece keeps its sign and parses on its own.
inline std::vector<std::string> phi_summands(std::string_view src) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  bool in_comment = false;
  for (char ch : src) {
    if (in_comment) {
      if (ch == '\n') in_comment = false;
      continue;
    }
    if (ch == '#') {
      in_comment = true;
      continue;
    }
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    bool blank = cur.find_first_not_of(" \t\r\n") == std::string::npos;
    if (depth == 0 && (ch == '+' || ch == '-') && !blank) {
      out.push_back(cur);
      cur.clear();
    }
    cur += ch;
  }
  if (cur.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(cur);
  for (auto& piece : out) {
    piece.erase(0, piece.find_first_not_of(" \t\r\n"));
    piece.erase(piece.find_last_not_of(" \t\r\n") + 1);
  }
  return out;
}

/// Phi-grammar text of a generator polynomial: t_i^(b_i m_i) per module and
/// one z factor per slot (modules with a_i = 0 carry t_i only).
inline std::string emit_phi(const AbsPoly& p) {
  if (p.is_zero()) return "0";
  const auto& gens = abs_generators();
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string cs = rational_to_string(c);
    bool negative = cs[0] == '-';
    if (negative) cs.erase(0, 1);
    os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;
    std::vector<std::string> factors;
    if (cs != "1") factors.push_back(cs);
    std::array<int, kModuleCount> slots{};
    for (int g = 0; g < kGeneratorCount; ++g) slots[static_cast<std::size_t>(gens[static_cast<std::size_t>(g)].module - 1)] += m.exponent(g);
    for (int i = 1; i <= kModuleCount; ++i) {
      const Partition& part = module_partitions()[static_cast<std::size_t>(i - 1)];
      const int te = part.second * slots[static_cast<std::size_t>(i - 1)];
      if (te) factors.push_back("t" + std::to_string(i) + (te > 1 ? "^" + std::to_string(te) : ""));
      if (part.width() == 0) continue;
      for (int k = 0; k <= part.width(); ++k) {
        int e = m.exponent(abs_index(i, k));
        if (!e) continue;
        std::string z = "z" + std::to_string(i) + "^(" + std::to_string(part.width() - k) + "," + std::to_string(k) + ")";
        factors.push_back(e > 1 ? "(" + z + ")^" + std::to_string(e) : z);
      }
    }
    if (factors.empty()) factors.push_back("1");
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

}  // namespace traceforge
