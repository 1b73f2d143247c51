#pragma once

// JSON forms of the catalog, hwv bases, relation spaces, certificates and
// reports. Rationals are strings ("n" or "n/d").

#include <string>
#include <vector>

#include "json.hpp"
#include "traceforge/hwv.hpp"
#include "traceforge/relfinder.hpp"

namespace traceforge {

using json = nlohmann::json;

inline json to_json(const Partition& p) { return json::array({p.first, p.second}); }

inline Partition partition_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("partition must be [l1, l2]");
  return Partition(j[0].get<int>(), j[1].get<int>());
}

inline json to_json(const RatVector& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(rational_to_string(c));
  return a;
}

inline RatVector ratvector_from_json(const json& j) {
  RatVector v;
  for (const auto& c : j) v.push_back(parse_rational(c.get<std::string>()));
  return v;
}

inline json to_json(const AbsMonomial& m) {
  json f = json::array();
  for (auto [g, e] : m.factors()) f.push_back(json::array({g, e}));
  return f;
}

/// [{"coef": "-6", "monomial": "u50*u81", "factors": [[flat, exp], ...]}, ...]
inline json to_json(const AbsPoly& p) {
  json a = json::array();
  for (const auto& [m, c] : p.terms())
    a.push_back({{"coef", rational_to_string(c)}, {"monomial", m.to_string()}, {"factors", to_json(m)}});
  return a;
}

inline AbsPoly abspoly_from_json(const json& j) {
  AbsPoly p;
  for (const auto& t : j) {
    AbsMonomial m;
    for (const auto& f : t.at("factors")) {
      int g = f.at(0).get<int>(), e = f.at(1).get<int>();
      if (g < 0 || g >= kGeneratorCount) throw std::invalid_argument("generator index out of range");
      m.set(g, e);
    }
    p.add_term(m, parse_rational(t.at("coef").get<std::string>()));
  }
  return p;
}

inline json catalog_json() {
  json mods = json::array();
  for (const auto& m : catalog()) {
    json basis = json::array();
    for (std::size_t j = 0; j < m.basis.size(); ++j)
      basis.push_back({{"name", abs_generators()[static_cast<std::size_t>(abs_index(m.index, static_cast<int>(j)))].name()},
                       {"trace", m.basis[j].to_string()}});
    mods.push_back({{"module", m.index}, {"partition", to_json(m.partition)}, {"dimension", m.a() + 1}, {"basis", basis}});
  }
  return {{"modules", mods}, {"generators", kGeneratorCount}};
}

inline json to_json(const HwvBasis& b) {
  json vectors = json::array();
  for (const auto& v : b.vectors) vectors.push_back(to_json(v));
  return {{"lambda", to_json(b.lambda)}, {"m", b.size()},        {"P", b.P},
          {"Q", b.Q},                    {"alpha_rank", b.alpha_rank}, {"blocked", b.blocked},
          {"vectors", vectors}};
}

inline json to_json(const StreamStats& s) {
  return {{"primes_used", s.primes_used}, {"primes_discarded", s.primes_discarded}, {"passes", s.passes}, {"verified_exactly", s.verified_exactly}};
}

/// Relation space without the hwv vectors (those are recomputed on load).
inline json to_json(const RelationSpace& sp) {
  json zeta = json::array(), rel = json::array();
  for (const auto& z : sp.zeta) zeta.push_back(to_json(z));
  for (const auto& v : sp.relvectors) rel.push_back(to_json(v));
  return {{"lambda", to_json(sp.lambda)}, {"s", sp.hwv.size()}, {"r", sp.r()}, {"mode", to_string(sp.mode)},
          {"stats", to_json(sp.stats)},  {"zeta", zeta},        {"relvectors", rel}};
}

/// Rebuilds a relation space from its JSON and a freshly computed hwv basis.
inline RelationSpace relation_space_from_json(const json& j, HwvBasis hwv) {
  RelationSpace sp;
  sp.lambda = partition_from_json(j.at("lambda"));
  if (!(sp.lambda == hwv.lambda)) throw std::invalid_argument("relation space: lambda mismatch");
  if (j.at("s").get<std::size_t>() != hwv.size()) throw std::invalid_argument("relation space: hwv basis size mismatch");
  sp.hwv = std::move(hwv);
  sp.mode = j.at("mode").get<std::string>() == "exact" ? NullMode::Exact : NullMode::Modular;
  const json& st = j.at("stats");
  sp.stats.primes_used = st.at("primes_used").get<std::size_t>();
  sp.stats.primes_discarded = st.at("primes_discarded").get<std::size_t>();
  sp.stats.passes = st.at("passes").get<std::size_t>();
  sp.stats.verified_exactly = st.at("verified_exactly").get<bool>();
  for (const auto& z : j.at("zeta")) {
    RatVector v = ratvector_from_json(z);
    if (v.size() != sp.hwv.size()) throw std::invalid_argument("relation space: zeta length mismatch");
    sp.zeta.push_back(v);
    sp.relvectors.push_back(combine(sp.hwv, v));
  }
  return sp;
}

inline json to_json(const RelationCertificate& c) {
  return {{"lambda", to_json(c.lambda)}, {"zeta", to_json(c.zeta)},   {"abspoly", to_json(c.relvector)},
          {"trace_form", c.trace_form},  {"leading", c.leading},      {"digest", c.digest}};
}

inline RelationCertificate certificate_from_json(const json& j) {
  RelationCertificate c;
  c.lambda = partition_from_json(j.at("lambda"));
  c.zeta = ratvector_from_json(j.at("zeta"));
  c.relvector = abspoly_from_json(j.at("abspoly"));
  c.trace_form = j.at("trace_form").get<std::string>();
  c.leading = j.at("leading").get<std::string>();
  c.digest = j.at("digest").get<std::string>();
  return c;
}

inline json to_json(const ZeroReport& z) {
  return {{"zero", z.zero}, {"residual_terms", z.residual_terms}, {"samples", z.samples}, {"digest", z.digest}};
}

inline ZeroReport zero_report_from_json(const json& j) {
  ZeroReport z;
  z.zero = j.at("zero").get<bool>();
  z.residual_terms = j.at("residual_terms").get<std::size_t>();
  z.samples = j.at("samples").get<std::vector<std::string>>();
  z.digest = j.at("digest").get<std::string>();
  return z;
}

inline json to_json(const HwvReport& r) {
  json fails = json::array();
  for (const auto& c : r.checks)
    if (!c.passed())
      fails.push_back({{"index", c.index}, {"abs_delta_zero", c.abs_delta_zero}, {"evaluated_delta_zero", c.evaluated_delta_zero},
                       {"evaluated_h_fixed", c.evaluated_h_fixed}, {"nonzero", c.nonzero}});
  return {{"checked", r.checks.size()}, {"passed", r.passed()}, {"failures", fails}};
}

inline json to_json(const LeadingReport& r) {
  json lead = json::array(), entries = json::array();
  for (const auto& m : r.leading) {
    auto [p, q] = m.bidegree();
    lead.push_back({{"monomial", m.to_string()}, {"bidegree", json::array({p, q})}});
  }
  for (const auto& e : r.entries)
    entries.push_back({{"lambda", to_json(e.lambda)},
                       {"relvector", e.relvector},
                       {"orbit_index", e.orbit_index},
                       {"bidegree", json::array({e.bidegree.first, e.bidegree.second})},
                       {"leading", e.leading ? json(e.leading->to_string()) : json(nullptr)},
                       {"reduced_terms", e.reduced.terms().size()}});
  return {{"degree", r.degree},
          {"leading", lead},
          {"count", r.leading.size()},
          {"degenerate", r.degenerate},
          {"dependent", r.dependent},
          {"generating_function", r.generating_function().to_string()},
          {"orbit_vectors", entries}};
}

inline json to_json(const NewRelationReport& r) {
  json e = json::array();
  for (const auto& x : r.entries) e.push_back({{"lambda", to_json(x.lambda)}, {"total", x.total}, {"old", x.old}, {"new", x.fresh}});
  return {{"degree", r.degree}, {"entries", e}};
}

}  // namespace traceforge
