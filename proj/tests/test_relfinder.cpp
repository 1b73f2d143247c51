#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "traceforge/parsers.hpp"
#include "traceforge/relfinder.hpp"

using namespace traceforge;

namespace {

AbsPoly u(int module, int j) { return AbsPoly::generator(module, j); }

std::string data(const std::string& name) {
  std::ifstream in(std::string(TRACEFORGE_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RelationAtlas& atlas() {
  static RelationAtlas a{RelationOptions{}};
  return a;
}

const GeneratorImages<QQ>& images() {
  static const GeneratorImages<QQ> g;
  return g;
}

}  // namespace

TEST(RelationSpace, DegreeTwelveDimensions) {
  const RelationSpace& a = atlas().get(Partition(7, 5));
  const RelationSpace& b = atlas().get(Partition(6, 6));
  EXPECT_EQ(a.r(), 1u);
  EXPECT_EQ(b.r(), 2u);
  for (const auto* sp : {&a, &b}) {
    EXPECT_TRUE(sp->stats.verified_exactly);
    for (const auto& v : sp->relvectors) {
      EXPECT_TRUE(abs_delta(v).is_zero());
      EXPECT_EQ(v.bidegree(), std::make_optional(std::make_pair(sp->lambda.first, sp->lambda.second)));
      EXPECT_TRUE(verify_zero(v, images()).zero);
    }
  }
}

TEST(RelationSpace, NoRelationsBelowDegreeTwelve) {
  for (const Partition& l : {Partition(6, 5), Partition(8, 3), Partition(7, 4)}) EXPECT_EQ(relation_space(l).r(), 0u) << l.to_string();
}

TEST(RelationSpace, ExactAgreesWithModular) {
  RelationOptions exact;
  exact.mode = NullMode::Exact;
  for (const Partition& l : {Partition(7, 5), Partition(6, 4)}) {
    RelationSpace e = relation_space(l, exact);
    const RelationSpace m = l == Partition(7, 5) ? atlas().get(l) : relation_space(l);
    EXPECT_EQ(e.zeta, m.zeta) << l.to_string();
  }
}

TEST(RelationSpace, ThreadCountDoesNotChangeResult) {
  RelationOptions two;
  two.threads = 2;
  EXPECT_EQ(relation_space(Partition(6, 6), two).zeta, atlas().get(Partition(6, 6)).zeta);
}

TEST(RelationSpace, CapEnforced) { EXPECT_THROW(relation_space(Partition(8, 7)), std::out_of_range); }

TEST(VerifyZero, NegativeControls) {
  ZeroReport z = verify_zero(parse_trace("tr(x^2)*tr(y^2)"));
  EXPECT_FALSE(z.zero);
  EXPECT_GT(z.residual_terms, 0u);
  EXPECT_FALSE(z.samples.empty());
  // The first highest weight vector of (7,5) is not a relation.
  const RelationSpace& sp = atlas().get(Partition(7, 5));
  EXPECT_FALSE(verify_zero(sp.hwv.vectors.front(), images()).zero);
}

TEST(VerifyZero, PublishedRelations) {
  EXPECT_TRUE(verify_zero(parse_trace(data("v66prime.trace"))).zero);
  EXPECT_TRUE(verify_zero(parse_phi(data("v66prime.phi")), images()).zero);
  EXPECT_TRUE(verify_zero(parse_phi(data("v75.phi")), images()).zero);
  EXPECT_TRUE(verify_zero(parse_phi(data("v66second.phi")), images()).zero);
  EXPECT_FALSE(verify_zero(parse_phi(data("v66second_printed.phi")), images()).zero);
}

TEST(VerifyZero, TraceAndPhiFormsAgree) {
  // Phi of the (6,6) relation in generator form equals its trace form.
  EXPECT_EQ(verify_zero(phi(parse_phi(data("v66prime.phi")))).digest, verify_zero(parse_phi(data("v66prime.phi")), images()).digest);
}

TEST(Membership, ScalingAndSpan) {
  const RelationSpace& a = atlas().get(Partition(7, 5));
  const RelationSpace& b = atlas().get(Partition(6, 6));
  EXPECT_TRUE(membership(a.relvectors[0], a));
  EXPECT_TRUE(membership(a.relvectors[0].scaled(Rational(7)), a));
  EXPECT_TRUE(membership(b.relvectors[0].scaled(Rational(-2, 3)) + b.relvectors[1], b));
  EXPECT_TRUE(membership(AbsPoly(), a));
  EXPECT_FALSE(membership(a.relvectors[0] + a.hwv.vectors.front(), a));
  EXPECT_FALSE(membership(a.hwv.vectors.back(), a));
}

TEST(Membership, Errors) {
  const RelationSpace& a = atlas().get(Partition(7, 5));
  EXPECT_THROW(membership(u(1, 0), a), std::invalid_argument);
  EXPECT_THROW(membership(u(5, 0) * u(8, 0) + u(1, 0), a), std::invalid_argument);
}

TEST(Membership, PublishedRelations) {
  EXPECT_TRUE(membership(parse_phi(data("v75.phi")), atlas().get(Partition(7, 5))));
  const RelationSpace& b = atlas().get(Partition(6, 6));
  EXPECT_TRUE(membership(parse_phi(data("v66prime.phi")), b));
  EXPECT_TRUE(membership(parse_phi(data("v66second.phi")), b));
  EXPECT_FALSE(membership(parse_phi(data("v66second_printed.phi")), b));
  // Published (6,6) relations span the whole space.
  EXPECT_EQ(detail::span_rank({parse_phi(data("v66prime.phi")), parse_phi(data("v66second.phi")), b.relvectors[0], b.relvectors[1]}), 2u);
}

TEST(SummandFit, RecoversScaling) {
  const RelationSpace& b = atlas().get(Partition(6, 6));
  std::vector<AbsPoly> parts;
  for (const auto& s : phi_summands(data("v66second_printed.phi"))) parts.push_back(parse_phi(s));
  auto fit = summand_fit(parts, b);
  ASSERT_TRUE(fit.has_value());
  ASSERT_EQ(fit->size(), 23u);
  for (std::size_t i = 0; i < fit->size(); ++i) EXPECT_EQ((*fit)[i], Rational(i < 9 ? 1 : 4)) << i;

  // A relation split into a relation-free piece and its complement.
  const AbsPoly& v = atlas().get(Partition(7, 5)).relvectors[0];
  AbsPoly w = atlas().get(Partition(7, 5)).hwv.vectors.front();
  auto two = summand_fit({v - w, w.scaled(Rational(3))}, atlas().get(Partition(7, 5)));
  ASSERT_TRUE(two.has_value());
  EXPECT_EQ(*two, (std::vector<Rational>{Rational(1), Rational(1, 3)}));
  EXPECT_FALSE(summand_fit({w}, atlas().get(Partition(7, 5))).has_value());
}

TEST(Orbit, SizesAndWeights) {
  const RelationSpace& a = atlas().get(Partition(7, 5));
  auto o = orbit(a);
  ASSERT_EQ(o.size(), 3u);
  for (std::size_t j = 0; j < o.size(); ++j) {
    EXPECT_EQ(o[j].bidegree(), std::make_optional(std::make_pair(7 - static_cast<int>(j), 5 + static_cast<int>(j))));
    EXPECT_TRUE(verify_zero(o[j], images()).zero);
  }
  // Lowering past the bottom of W(7,5) gives zero; raising returns up the ladder.
  EXPECT_TRUE(abs_delta1(o[2]).is_zero());
  EXPECT_EQ(abs_delta(o[1]), o[0]);
  EXPECT_EQ(orbit(atlas().get(Partition(6, 6))).size(), 2u);
  EXPECT_EQ(atlas().orbit_vectors(12).size(), 5u);
}

TEST(Leading, DegreeTwelve) {
  LeadingReport rep = leading_analysis(atlas(), 12);
  std::set<std::string> got;
  for (const auto& m : rep.leading) got.insert(m.to_string());
  EXPECT_EQ(got, (std::set<std::string>{"u50*u80", "u50*u81", "u51*u80", "u51*u81", "u70^2"}));
  EXPECT_EQ(rep.leading.size(), 5u);
  EXPECT_EQ(rep.degenerate, 0u);
  EXPECT_EQ(rep.dependent, 0u);
  BiSeries want = schur(Partition(7, 5), 14) + schur(Partition(6, 6), 14) + schur(Partition(6, 6), 14);
  EXPECT_EQ(rep.generating_function(14), want);
}

TEST(Leading, ReductionDropsParameters) {
  const ParameterSplit& s = parameter_split();
  EXPECT_EQ(s.hsop.size(), 15u);
  EXPECT_EQ(s.hsop.size() + s.complement.size(), static_cast<std::size_t>(kGeneratorCount));
  AbsPoly p = u(5, 0) * u(8, 0) + u(1, 0) * u(9, 0) + u(6, 0) * u(7, 0);
  EXPECT_EQ(reduce_mod_parameters(p), u(5, 0) * u(8, 0));
  EXPECT_EQ(leading_monomial(u(5, 1) * u(8, 0) + u(5, 0) * u(8, 1))->to_string(), "u50*u81");
  EXPECT_FALSE(leading_monomial(reduce_mod_parameters(u(1, 0) * u(4, 0))).has_value());
}

TEST(NewRelations, DegreeTwelveIsAllNew) {
  NewRelationReport rep = new_relations(atlas(), 12);
  ASSERT_EQ(rep.entries.size(), 2u);
  for (const auto& e : rep.entries) {
    EXPECT_EQ(e.old, 0u);
    EXPECT_EQ(e.fresh, e.total);
  }
  EXPECT_THROW(new_relations(atlas(), 11), std::invalid_argument);
  EXPECT_THROW(new_relations(atlas(), 15), std::invalid_argument);
}

TEST(Certificates, MakeAndCheck) {
  const RelationSpace& b = atlas().get(Partition(6, 6));
  for (std::size_t k = 0; k < b.r(); ++k) {
    RelationCertificate c = make_certificate(b, k, images());
    EXPECT_TRUE(check_certificate(c, images()));
    EXPECT_EQ(parse_trace(c.trace_form), phi(c.relvector));
    EXPECT_NE(c.leading, "degenerate");
    RelationCertificate bad = c;
    bad.relvector += b.hwv.vectors.front();
    EXPECT_FALSE(check_certificate(bad, images()));
  }
  EXPECT_THROW(make_certificate(b, 2, images()), std::out_of_range);
}
