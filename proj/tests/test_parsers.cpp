#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "traceforge/parsers.hpp"

using namespace traceforge;

namespace {

AbsPoly u(int module, int j) { return AbsPoly::generator(module, j); }

std::string data(const std::string& name) {
  std::ifstream in(std::string(TRACEFORGE_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t error_position(const std::string& src, bool phi) {
  try {
    if (phi) parse_phi(src);
    else parse_trace(src);
  } catch (const ParseError& e) {
    return e.position();
  }
  return std::string::npos;
}

}  // namespace

TEST(PhiParser, SingleGenerator) { EXPECT_EQ(parse_phi("t5^2*x5"), u(5, 0)); }

TEST(PhiParser, SignedDeterminant) {
  EXPECT_EQ(parse_phi("-(x5*y8-y5*x8)*t5^2*t8^3"), u(5, 1) * u(8, 0) - u(5, 0) * u(8, 1));
}

TEST(PhiParser, ZNotationKeepsSlotsApart) {
  AbsPoly square = parse_phi("(z1^(1,1))^2");
  AbsPoly mixed = parse_phi("z1^(2,0)*z1^(0,2)");
  EXPECT_EQ(square, u(1, 1) * u(1, 1));
  EXPECT_EQ(mixed, u(1, 0) * u(1, 2));
  EXPECT_NE(square, mixed);
}

TEST(PhiParser, OneDimensionalSlotsMayUsePlainVariables) {
  // W(1,1) modules have a = 1, so x^p y^q names a product of p + q slots.
  EXPECT_EQ(parse_phi("x5^2*y5*t5^6"), u(5, 0) * u(5, 0) * u(5, 1));
  EXPECT_EQ(parse_phi("(x5*t5^2)^2"), u(5, 0) * u(5, 0));
}

TEST(PhiParser, WidthZeroModules) {
  // W(2,2), W(3,3), W(4,4) and W(5,5) are one-dimensional: t alone.
  EXPECT_EQ(parse_phi("t4^2"), u(4, 0));
  EXPECT_EQ(parse_phi("3*t4^4*t7^3"), (u(4, 0) * u(4, 0) * u(7, 0)).scaled(Rational(3)));
}

TEST(PhiParser, RationalCoefficientsAndComments) {
  EXPECT_EQ(parse_phi("# a comment\n1/2*t5^2*x5 + 1/2*t5^2*x5"), u(5, 0));
  EXPECT_TRUE(parse_phi("t5^2*x5 - t5^2*x5").is_zero());
}

TEST(PhiParser, SyntaxErrorsCarryPositions) {
  EXPECT_EQ(error_position("t5^2*x5 +", true), 9u);
  EXPECT_EQ(error_position("t5^2*x13", true), 6u);
  EXPECT_EQ(error_position("t5^2**x5", true), 5u);
  EXPECT_NE(error_position("z1^(2,1)", true), std::string::npos);   // wrong slot degree for W(2,0)
  EXPECT_NE(error_position("(t5^2*x5", true), std::string::npos);
  EXPECT_NE(error_position("t5^2 x5", true), std::string::npos);    // juxtaposition is not a product
  EXPECT_NE(error_position("w5", true), std::string::npos);
}

TEST(PhiParser, CompletenessViolations) {
  EXPECT_THROW(parse_phi("t5*x5"), CompletenessError);          // t5 exponent not a multiple of b = 2
  EXPECT_THROW(parse_phi("x1"), CompletenessError);             // half a W(2,0) slot
  EXPECT_THROW(parse_phi("t5^2"), CompletenessError);           // empty slot
  EXPECT_THROW(parse_phi("x1^2*y1^2"), CompletenessError);      // plain variables over two wide slots
  EXPECT_THROW(parse_phi("t1*x1^2"), CompletenessError);        // b = 0 forbids t
  EXPECT_THROW(parse_phi("z1^(2,0)*x1*t1"), CompletenessError);
  EXPECT_THROW(parse_phi("t7^3*x7^3"), CompletenessError);      // W(3,3) has no x/y part
  try {
    parse_phi("t9^3*x9");
    FAIL();
  } catch (const CompletenessError& e) {
    EXPECT_NE(std::string(e.what()).find("9"), std::string::npos);
  }
}

TEST(PhiParser, EmitRoundTripsPublishedRelations) {
  for (const char* f : {"v66prime.phi", "v75.phi", "v66second.phi", "v66second_printed.phi"}) {
    AbsPoly p = parse_phi(data(f));
    ASSERT_FALSE(p.is_zero()) << f;
    EXPECT_EQ(parse_phi(emit_phi(p)), p) << f;
  }
}

TEST(PhiParser, EmitRoundTripsRandomPolynomials) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> gen(0, kGeneratorCount - 1), coef(-5, 5), len(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    AbsPoly p;
    for (int t = 0; t < 3; ++t) {
      AbsPoly m = AbsPoly::monomial(AbsMonomial(), make_rational(coef(rng), 1 + trial % 3));
      for (int k = len(rng); k > 0; --k) {
        const AbsGen& g = abs_generators()[static_cast<std::size_t>(gen(rng))];
        m = m * u(g.module, g.j);
      }
      p = p + m;
    }
    EXPECT_EQ(parse_phi(emit_phi(p)), p) << emit_phi(p);
  }
}

TEST(PhiParser, Summands) {
  EXPECT_EQ(phi_summands("a - (b + c) + d^2").size(), 3u);
  EXPECT_EQ(phi_summands(data("v66second_printed.phi")).size(), 23u);
  EXPECT_EQ(phi_summands(data("v66prime.phi")).size(), 3u);
}

TEST(TraceParser, BasicForms) {
  TraceExpr xx = TraceExpr::trace("xx"), yy = TraceExpr::trace("yy");
  EXPECT_EQ(parse_trace("tr(x^2)*tr(y^2)"), xx * yy);
  EXPECT_EQ(parse_trace("tr(x^2)tr(y^2)"), xx * yy);
  EXPECT_EQ(parse_trace("2tr(xy) - tr(yx)"), TraceExpr::trace("xy"));
  EXPECT_EQ(parse_trace("tr(xy)^2"), TraceExpr::trace("xy").pow(2));
  EXPECT_EQ(parse_trace("-1/2*tr(x^2)"), xx.scaled(Rational(-1, 2)));
  EXPECT_EQ(parse_trace("tr([x,y]^2)"), trace_of(commutator(NcPoly::x(), NcPoly::y()).pow(2)));
  EXPECT_EQ(parse_trace("tr((xy+yx)y)"), TraceExpr::trace("xyy").scaled(Rational(2)));
}

TEST(TraceParser, Errors) {
  EXPECT_THROW(parse_trace("tr(x)"), ParseError);  // traceless: explicit rejection
  EXPECT_EQ(error_position("tr(xy", false), 5u);
  EXPECT_EQ(error_position("tr(xz)", false), 4u);
  EXPECT_NE(error_position("tr(x^2) +", false), std::string::npos);
  EXPECT_NE(error_position("tr([x,y)", false), std::string::npos);
}

TEST(TraceParser, RoundTripsCatalogAndPublishedForms) {
  for (const auto& m : catalog_modules())
    for (const auto& b : m.basis) EXPECT_EQ(parse_trace(b.to_string()), b) << b.to_string();
  TraceExpr v = parse_trace(data("v66prime.trace"));
  EXPECT_EQ(parse_trace(v.to_string()), v);
  EXPECT_EQ(v.bidegree(), std::make_optional(std::make_pair(6, 6)));
  AbsPoly p = parse_phi(data("v75.phi"));
  EXPECT_EQ(parse_trace(phi(p).to_string()), phi(p));
}
