#include <random>

#include <gtest/gtest.h>

#include "traceforge/genmat.hpp"

using namespace traceforge;

namespace {

CommPoly var(const char* name) { return CommPoly::variable(entry_vars(), name); }

std::vector<Word> all_words(std::size_t len) {
  std::vector<Word> out;
  for (std::size_t mask = 0; mask < (1u << len); ++mask) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) w += (mask >> i) & 1 ? 'y' : 'x';
    out.push_back(w);
  }
  return out;
}

TraceExpr tr(const NcPoly& p) { return trace_of(p); }

}  // namespace

TEST(BuildMatrices, Entries) {
  auto x = build_x<QQ>();
  auto y = build_y<QQ>();
  EXPECT_TRUE(matrix_trace(x).is_zero());
  EXPECT_TRUE(matrix_trace(y).is_zero());
  EXPECT_EQ(x[0][0], var("x11"));
  EXPECT_TRUE(x[0][1].is_zero());
  EXPECT_EQ(y[3][3], -(var("y11") + var("y22") + var("y33")));
  EXPECT_EQ(y[0][3], var("y14"));
  auto xy = matrix_mul(x, y), yx = matrix_mul(y, x);
  GenericMatrix comm;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) comm[i][j] = xy[i][j] - yx[i][j];
  EXPECT_TRUE(matrix_trace(comm).is_zero());
}

TEST(EvalWordTrace, Examples) {
  EvalCache cache;
  CommPoly x11 = var("x11"), x22 = var("x22"), x33 = var("x33");
  CommPoly y11 = var("y11"), y22 = var("y22"), y33 = var("y33");
  CommPoly sx = x11 + x22 + x33, sy = y11 + y22 + y33;
  EXPECT_EQ(eval_word_trace("xx", cache), x11 * x11 + x22 * x22 + x33 * x33 + sx * sx);
  EXPECT_EQ(eval_word_trace("xy", cache), x11 * y11 + x22 * y22 + x33 * y33 + sx * sy);
  EXPECT_TRUE((eval_word_trace("xyxy", cache) - eval_word_trace("yxyx", cache)).is_zero());
  EXPECT_THROW(eval_word_trace("x", cache), TracelessViolation);
}

TEST(EvalWordTrace, RotationInvarianceAndBidegreeExhaustive) {
  auto x = build_x<QQ>();
  auto y = build_y<QQ>();
  for (std::size_t len = 2; len <= 8; ++len) {
    std::map<Word, CommPoly> by_class;
    for (const Word& w : all_words(len)) {
      CommPoly v = eval_word_trace_uncached(w, x, y);
      auto [it, inserted] = by_class.try_emplace(cyclic_normalize(w), v);
      if (!inserted) EXPECT_EQ(it->second, v) << w;
      if (!v.is_zero()) EXPECT_EQ(entry_bidegree(v), word_bidegree(w)) << w;
    }
  }
}

TEST(EvalWordTrace, RandomLongWordsAndCacheCoherence) {
  std::mt19937_64 rng(21);
  EvalCache cache;
  auto x = build_x<QQ>();
  auto y = build_y<QQ>();
  for (int trial = 0; trial < 12; ++trial) {
    std::size_t len = 9 + trial % 4;
    Word w;
    for (std::size_t i = 0; i < len; ++i) w += rng() & 1 ? 'x' : 'y';
    std::size_t k = rng() % len;
    Word r = w.substr(k) + w.substr(0, k);
    CommPoly direct = eval_word_trace_uncached(w, x, y);
    EXPECT_EQ(direct, eval_word_trace_uncached(r, x, y));
    EXPECT_EQ(direct, eval_word_trace(r, cache));
    EXPECT_EQ(direct, eval_word_trace(w, cache));
  }
}

TEST(EvalTraceExpr, Homomorphism) {
  EvalCache cache;
  TraceExpr e = trace_mul(TraceExpr::trace("xx"), TraceExpr::trace("yy"));
  EXPECT_EQ(eval_trace_expr(e, cache), eval_word_trace("xx", cache) * eval_word_trace("yy", cache));
  TraceExpr lin = TraceExpr::trace("xy").scaled(Rational(3)) - TraceExpr::trace("xx");
  EXPECT_EQ(eval_trace_expr(lin, cache),
            eval_word_trace("xy", cache).scaled(Rational(3)) - eval_word_trace("xx", cache));
  EXPECT_EQ(eval_trace_expr(TraceExpr::constant(Rational(5)), cache), CommPoly::constant(entry_vars(), Rational(5)));
}

TEST(EvalTraceExpr, CommutatorSquareIsNonzero) {
  EvalCache cache;
  NcPoly c = commutator(NcPoly::x(), NcPoly::y());
  CommPoly v = eval_trace_expr(tr(c * c), cache);
  EXPECT_FALSE(v.is_zero());
  EXPECT_EQ(entry_bidegree(v), std::make_pair(2, 2));
}

TEST(EvalTraceExpr, SimpleDegreeTwelveRelationVanishes) {
  // 3 u1 + 4 u2 + 6 u3 with the u_k written out as trace polynomials.
  const NcPoly x = NcPoly::x(), y = NcPoly::y(), c3 = commutator(x, y).pow(3), c2 = commutator(x, y).pow(2);
  auto t = [](const char* w) { return TraceExpr::trace(w); };
  TraceExpr c3x = tr(c3 * x), c3y = tr(c3 * y);
  TraceExpr u1 = t("xx") * t("yyy") * c3x - t("xx") * t("xyy") * c3y - (t("xy") * t("xyy") * c3x).scaled(2) +
                 (t("xy") * t("xxy") * c3y).scaled(2) + t("yy") * t("xxy") * c3x - t("yy") * t("xxx") * c3y;
  TraceExpr u2 = (t("yyy") * tr(c3 * x.pow(3))).scaled(-1) +
                 t("xyy") * tr(c3 * (y * x * x + x * y * x + x * x * y)) -
                 t("xxy") * tr(c3 * (y * y * x + y * x * y + x * y * y)) + t("xxx") * tr(c3 * y.pow(3));
  TraceExpr u3 = (tr(c2 * x) * c3y).scaled(-1) + tr(c2 * y) * c3x;
  EvalCache cache;
  TraceExpr v = u1.scaled(3) + u2.scaled(4) + u3.scaled(6);
  EXPECT_EQ(v.bidegree(), std::make_pair(6, 6));
  EXPECT_TRUE(eval_trace_expr(v, cache).is_zero());
  EXPECT_FALSE(eval_trace_expr(u3, cache).is_zero());
}

TEST(Derivations, EvaluationCommutesWithLeibnizExpansion) {
  std::mt19937_64 rng(22);
  EvalCache cache;
  auto x = build_x<QQ>();
  auto y = build_y<QQ>();
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t len = 3 + trial % 5;
    Word w;
    for (std::size_t i = 0; i < len; ++i) w += rng() & 1 ? 'x' : 'y';
    TraceExpr e = TraceExpr::trace(w);
    // Symbolic Delta_1 then evaluate, against the explicit sum over x positions.
    CommPoly expanded(entry_vars());
    for (std::size_t i = 0; i < len; ++i)
      if (w[i] == 'x') {
        Word v = w;
        v[i] = 'y';
        expanded += eval_word_trace_uncached(v, x, y);
      }
    EXPECT_EQ(eval_trace_expr(delta1(e), cache), expanded) << w;
    // Delta after evaluation is the directional derivative along x.
    CommPoly f = eval_trace_expr(e, cache);
    EXPECT_EQ(eval_trace_expr(delta(e), cache), evaluated_delta(f)) << w;
    EXPECT_EQ(eval_trace_expr(subst_h(e), cache), evaluated_h(f)) << w;
  }
}

TEST(EvalModular, ReductionCommutesWithEvaluation) {
  Zp field(nth_prime_below_2_62(0));
  EvalCacheT<Zp> mod_cache(field);
  EvalCache cache;
  for (const Word& w : {Word("xxyy"), Word("xyxyy"), Word("xxxyyy")}) {
    ModPoly m = eval_word_trace(w, mod_cache);
    ModPoly reduced = eval_word_trace(w, cache).map_coefficients(field, [&](const Rational& c) { return field.from_rational(c); });
    EXPECT_EQ(m, reduced);
  }
}
