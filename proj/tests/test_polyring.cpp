#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "traceforge/genmat.hpp"
#include "traceforge/poly.hpp"

using namespace traceforge;

namespace {

const VarSet& small_vars() {
  static const VarSet v({"a", "b", "c", "d"});
  return v;
}

CommPoly random_poly(std::mt19937_64& rng, const VarSet& vars, int terms, int max_exp) {
  std::uniform_int_distribution<int> coef(-9, 9), den(1, 4), ex(0, max_exp);
  CommPoly p(vars);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(vars.size());
    for (auto& x : e) x = ex(rng);
    p.add_term(Monomial::from_exponents(e), make_rational(coef(rng), den(rng)));
  }
  return p;
}

/// Bihomogeneous in the split {a, b} | {c, d}.
CommPoly random_bihomogeneous(std::mt19937_64& rng, int p, int q, int terms) {
  std::uniform_int_distribution<int> coef(-5, 5);
  CommPoly r(small_vars());
  for (int t = 0; t < terms; ++t) {
    int a = std::uniform_int_distribution<int>(0, p)(rng);
    int c = std::uniform_int_distribution<int>(0, q)(rng);
    r.add_term(Monomial::from_exponents({a, p - a, c, q - c}), Rational(coef(rng)));
  }
  return r;
}

bool no_zero_terms(const CommPoly& p) {
  for (const auto& [m, c] : p.terms())
    if (sgn(c) == 0) return false;
  return true;
}

CommPoly var(const char* name) { return CommPoly::variable(entry_vars(), name); }

}  // namespace

TEST(Rational, LowestTermsAndParsing) {
  Rational q = make_rational(6, -4);
  EXPECT_EQ(q.get_num(), -3);
  EXPECT_EQ(q.get_den(), 2);
  EXPECT_EQ(parse_rational("10/4"), make_rational(5, 2));
  EXPECT_EQ(rational_to_fraction(Rational(3)), "3/1");
  EXPECT_THROW(parse_rational("1/0"), std::exception);
}

TEST(PolyAdd, Examples) {
  CommPoly x11 = var("x11"), y12 = var("y12");
  EXPECT_TRUE((x11 + (-x11)).is_zero());
  CommPoly s = (x11 + y12) + y12;
  EXPECT_EQ(s, x11 + y12.scaled(Rational(2)));
  EXPECT_EQ(s.size(), 2u);
  std::mt19937_64 rng(1);
  CommPoly p = random_poly(rng, entry_vars(), 20, 3);
  EXPECT_EQ(poly_add(p, CommPoly(entry_vars())), p);
}

TEST(PolyAdd, MismatchedVarSets) {
  CommPoly a = CommPoly::variable(small_vars(), 0);
  EXPECT_THROW(poly_add(a, var("x11")), PolyError);
  EXPECT_THROW(poly_mul(a, var("x11")), PolyError);
}

TEST(PolyMul, Examples) {
  CommPoly x11 = var("x11"), x22 = var("x22");
  EXPECT_EQ((x11 + x22) * (x11 - x22), x11 * x11 - x22 * x22);
  std::mt19937_64 rng(2);
  CommPoly p = random_poly(rng, entry_vars(), 15, 2);
  EXPECT_EQ(p * CommPoly::constant(entry_vars(), Rational(1)), p);
}

TEST(PolyMul, AgreesWithEvaluatedTraceProduct) {
  EvalCache cache;
  CommPoly a = eval_word_trace("xx", cache), b = eval_word_trace("yy", cache);
  TraceExpr e = TraceExpr::monomial(TraceMonomial({"xx", "yy"}));
  EXPECT_EQ(poly_mul(a, b), eval_trace_expr(e, cache));
}

TEST(PolyProperties, RingAxiomsAndCanonicalForm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    CommPoly a = random_poly(rng, small_vars(), 6, 3), b = random_poly(rng, small_vars(), 6, 3),
             c = random_poly(rng, small_vars(), 6, 3);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE(no_zero_terms(a + b));
    EXPECT_TRUE(no_zero_terms(a * b));
    EXPECT_TRUE(no_zero_terms(a - a));
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(PolyProperties, Bihomogeneity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    int p1 = trial % 4, q1 = (trial / 4) % 3, p2 = trial % 3, q2 = 2;
    CommPoly a = random_bihomogeneous(rng, p1, q1, 5), b = random_bihomogeneous(rng, p2, q2, 5);
    if (a.is_zero() || b.is_zero()) continue;
    ASSERT_EQ(a.bidegree(2), std::make_pair(p1, q1));
    CommPoly prod = a * b;
    if (prod.is_zero()) continue;
    EXPECT_EQ(prod.bidegree(2), std::make_pair(p1 + p2, q1 + q2));
  }
}

TEST(CanonicalText, RoundTripAndOrder) {
  std::mt19937_64 rng(5);
  CommPoly p = random_poly(rng, entry_vars(), 30, 3);
  std::string text = to_canonical_text(p);
  EXPECT_EQ(from_canonical_text(text, entry_vars()), p);
  EXPECT_EQ(to_canonical_text(from_canonical_text(text, entry_vars())), text);
  CommPoly q = var("x11") * var("x11") + var("y43").scaled(make_rational(-1, 2));
  std::ostringstream line1, line2;
  line1 << "1/1 2";
  for (int i = 0; i < 17; ++i) line1 << " 0";
  line2 << "-1/2";
  for (int i = 0; i < 17; ++i) line2 << " 0";
  line2 << " 1";
  EXPECT_EQ(to_canonical_text(q), line1.str() + "\n" + line2.str() + "\n");
  EXPECT_THROW(from_canonical_text("1/1 2 0\n", entry_vars()), PolyError);
}

TEST(SeriesInvGeom, Examples) {
  BiSeries s = series_inv_geom(2, 0, 4);
  BiSeries expect = BiSeries::one(4) + BiSeries::monomial(2, 0, 1, 4) + BiSeries::monomial(4, 0, 1, 4);
  EXPECT_EQ(s, expect);
  EXPECT_EQ(series_inv_geom(1, 1, 3), BiSeries::one(3) + BiSeries::monomial(1, 1, 1, 3));
  BiSeries k = series_inv_geom(2, 0, 6) * series_inv_geom(1, 1, 6) * series_inv_geom(0, 2, 6);
  int count = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 3; ++c) count += (2 * a + b == 2 && b + 2 * c == 2);
  EXPECT_EQ(count, 2);
  EXPECT_EQ(k.coeff(2, 2), count);
  EXPECT_THROW(series_inv_geom(0, 0, 4), PolyError);
}

TEST(SeriesInvGeom, InverseProperty) {
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q) {
      if (p == 0 && q == 0) continue;
      const int d = 9;
      BiSeries one_minus = BiSeries::one(d) - BiSeries::monomial(p, q, 1, d);
      EXPECT_EQ(series_inv_geom(p, q, d) * one_minus, BiSeries::one(d));
    }
}

TEST(SeriesMul, Examples) {
  BiSeries a = BiSeries::one(2) + BiSeries::monomial(1, 0, 1, 2);
  BiSeries b = BiSeries::one(2) + BiSeries::monomial(0, 1, 1, 2);
  BiSeries expect = BiSeries::one(2) + BiSeries::monomial(1, 0, 1, 2) + BiSeries::monomial(0, 1, 1, 2) +
                    BiSeries::monomial(1, 1, 1, 2);
  EXPECT_EQ(a * b, expect);
  EXPECT_EQ(a * BiSeries::one(2), a);
  BiSeries s20 = BiSeries::monomial(2, 0, 1, 4) + BiSeries::monomial(1, 1, 1, 4) + BiSeries::monomial(0, 2, 1, 4);
  EXPECT_EQ((s20 * s20).coeff(2, 2), 3);
  EXPECT_THROW(series_mul(BiSeries(2), BiSeries(3)), PolyError);
}
