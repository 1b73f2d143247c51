#include <random>

#include <gtest/gtest.h>

#include "traceforge/trace.hpp"

using namespace traceforge;

namespace {

std::vector<Word> all_words(std::size_t len) {
  std::vector<Word> out;
  for (std::size_t mask = 0; mask < (1u << len); ++mask) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) w += (mask >> i) & 1 ? 'y' : 'x';
    out.push_back(w);
  }
  return out;
}

Word rotate(const Word& w, std::size_t k) { return w.substr(k) + w.substr(0, k); }

/// Random bihomogeneous trace expression of bidegree (p, q) built from
/// products of random words.
TraceExpr random_expr(std::mt19937_64& rng, int p, int q, int terms) {
  TraceExpr e;
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int t = 0; t < terms; ++t) {
    int xs = p, ys = q;
    std::vector<Word> words;
    while (xs + ys > 0) {
      int total = xs + ys;
      int len = total <= 3 ? total : std::uniform_int_distribution<int>(2, std::min(total - 2, 4))(rng);
      if (total - len == 1) len = total;
      Word w;
      for (int i = 0; i < len; ++i) {
        bool take_x = ys == 0 || (xs > 0 && std::uniform_int_distribution<int>(0, xs + ys - 1)(rng) < xs);
        w += take_x ? 'x' : 'y';
        (take_x ? xs : ys)--;
      }
      words.push_back(w);
    }
    if (words.empty() || std::any_of(words.begin(), words.end(), [](const Word& w) { return w.size() < 2; })) continue;
    e.add_term(TraceMonomial(words), Rational(coef(rng)));
  }
  return e;
}

}  // namespace

TEST(CyclicNormalize, Examples) {
  EXPECT_EQ(cyclic_normalize("yxy"), "xyy");
  EXPECT_EQ(cyclic_normalize("xxxx"), "xxxx");
  EXPECT_EQ(cyclic_normalize("xyxy"), "xyxy");
}

TEST(CyclicNormalize, IdempotentAndRotationInvariantExhaustive) {
  for (std::size_t len = 1; len <= 8; ++len)
    for (const Word& w : all_words(len)) {
      Word c = cyclic_normalize(w);
      EXPECT_EQ(cyclic_normalize(c), c);
      for (std::size_t k = 0; k < len; ++k) {
        Word r = rotate(w, k);
        EXPECT_EQ(cyclic_normalize(r), c);
        EXPECT_LE(c, r);
      }
    }
}

TEST(NcMul, Examples) {
  NcPoly c = commutator(NcPoly::x(), NcPoly::y());
  NcPoly sq = nc_mul(c, c);
  NcPoly expect = NcPoly::word("xyxy") - NcPoly::word("xyyx") - NcPoly::word("yxxy") + NcPoly::word("yxyx");
  EXPECT_EQ(sq, expect);
  EXPECT_EQ(nc_mul(c, NcPoly::one()), c);
}

TEST(NcMul, CommutatorCubeByBruteForce) {
  // Expand [x,y]^3 as a sum over choices of xy (+) or yx (-) per factor.
  std::map<Word, Rational> brute;
  for (int mask = 0; mask < 8; ++mask) {
    Word w;
    int sign = 1;
    for (int i = 0; i < 3; ++i) {
      bool yx = (mask >> i) & 1;
      w += yx ? "yx" : "xy";
      if (yx) sign = -sign;
    }
    brute[w] += sign;
  }
  NcPoly cube = commutator(NcPoly::x(), NcPoly::y()).pow(3);
  EXPECT_EQ(cube.terms().size(), 8u);
  for (const auto& [w, c] : cube.terms()) {
    EXPECT_EQ(abs(c), 1);
    EXPECT_EQ(brute.at(w), c);
  }
}

TEST(TraceOf, Examples) {
  EXPECT_EQ(trace_of(NcPoly::word("xy") + NcPoly::word("yx")), TraceExpr::trace("xy").scaled(Rational(2)));
  NcPoly c = commutator(NcPoly::x(), NcPoly::y());
  // Oracle: rotations of xyxy, xyyx, yxxy, yxyx land on classes xyxy, xxyy.
  std::map<Word, Rational> classes;
  const NcPoly sq = nc_mul(c, c);
  for (const auto& [w, k] : sq.terms()) classes[cyclic_normalize(w)] += k;
  TraceExpr expect;
  for (const auto& [w, k] : classes) expect.add_term(TraceMonomial::single(w), k);
  EXPECT_EQ(trace_of(c * c), expect);
  EXPECT_EQ(expect, TraceExpr::trace("xyxy").scaled(Rational(2)) - TraceExpr::trace("xxyy").scaled(Rational(2)));
  TraceExpr prod = trace_mul(TraceExpr::trace("xx"), TraceExpr::trace("yy"));
  EXPECT_EQ(prod, TraceExpr::monomial(TraceMonomial({"xx", "yy"})));
}

TEST(TraceOf, RejectsLengthOneWords) {
  EXPECT_THROW(trace_of(NcPoly::x() + NcPoly::word("xy")), TracelessViolation);
  EXPECT_THROW(TraceExpr::trace("y"), TracelessViolation);
}

TEST(Derivations, Examples) {
  EXPECT_EQ(delta(TraceExpr::trace("xy")), TraceExpr::trace("xx"));
  EXPECT_EQ(delta1(TraceExpr::trace("xx")), TraceExpr::trace("xy").scaled(Rational(2)));
  NcPoly c = commutator(NcPoly::x(), NcPoly::y());
  EXPECT_TRUE(delta(trace_of(c * c)).is_zero());
}

TEST(Substitutions, Examples) {
  EXPECT_EQ(subst_h(TraceExpr::trace("xx")), TraceExpr::trace("xx"));
  EXPECT_EQ(subst_h(TraceExpr::trace("xy")), TraceExpr::trace("xx") + TraceExpr::trace("xy"));
  NcPoly c = commutator(NcPoly::x(), NcPoly::y());
  TraceExpr w = trace_of(c * c);
  EXPECT_EQ(subst_h(w), w);
  EXPECT_EQ(subst_h1(TraceExpr::trace("xy")), TraceExpr::trace("xy") + TraceExpr::trace("yy"));
}

TEST(Bidegree, Examples) {
  EXPECT_EQ(TraceExpr::trace("xy").bidegree(), std::make_pair(1, 1));
  EXPECT_FALSE((TraceExpr::trace("xx") + TraceExpr::trace("xy")).bidegree().has_value());
  NcPoly x = NcPoly::x(), y = NcPoly::y();
  EXPECT_EQ(trace_of(commutator(x, y).pow(3) * x * x).bidegree(), std::make_pair(5, 3));
}

TEST(Derivations, LeibnizAndDegreeShift) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int p1 = 1 + trial % 3, q1 = 1 + trial % 2, p2 = 2, q2 = trial % 3;
    TraceExpr a = random_expr(rng, p1, q1, 4), b = random_expr(rng, p2, q2, 4);
    EXPECT_EQ(delta(trace_mul(a, b)), trace_mul(delta(a), b) + trace_mul(a, delta(b)));
    EXPECT_EQ(delta1(trace_mul(a, b)), trace_mul(delta1(a), b) + trace_mul(a, delta1(b)));
    TraceExpr da = delta(a), d1a = delta1(a);
    if (!da.is_zero()) EXPECT_EQ(da.bidegree(), std::make_pair(p1 + 1, q1 - 1));
    if (!d1a.is_zero()) EXPECT_EQ(d1a.bidegree(), std::make_pair(p1 - 1, q1 + 1));
  }
}

TEST(Derivations, SubstitutionIsExponentialOfDerivation) {
  // h = exp(Delta) on a bihomogeneous expression of y-degree q: sum_k Delta^k / k!.
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    TraceExpr a = random_expr(rng, 2, 3, 3);
    TraceExpr sum = a, term = a;
    Rational fact(1);
    for (int k = 1; k <= 3; ++k) {
      term = delta(term);
      fact *= k;
      sum += term.scaled(Rational(1) / fact);
    }
    EXPECT_EQ(subst_h(a), sum);
  }
}
