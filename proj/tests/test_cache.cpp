#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "traceforge/cache.hpp"
#include "traceforge/parsers.hpp"

using namespace traceforge;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("traceforge-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void overwrite(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
}

}  // namespace

TEST(CacheStore, RoundTripAndMiss) {
  TempDir d;
  CacheStore c(d.path());
  EXPECT_FALSE(c.get("k", "txt").has_value());
  c.put("k", "txt", "hello\n");
  EXPECT_EQ(c.get("k", "txt"), std::make_optional(std::string("hello\n")));
  EXPECT_EQ(c.stats().hits, 1u);
  EXPECT_EQ(c.stats().misses, 1u);
  EXPECT_NE(c.path_for("k", "txt"), c.path_for("k2", "txt"));
}

TEST(CacheStore, CorruptionIsDetectedAndRemoved) {
  TempDir d;
  CacheStore c(d.path());
  c.put("k", "txt", "payload");
  overwrite(c.path_for("k", "txt"), "payloaX");
  EXPECT_FALSE(c.get("k", "txt").has_value());
  EXPECT_EQ(c.stats().corrupt, 1u);
  EXPECT_FALSE(fs::exists(c.path_for("k", "txt")));
}

TEST(CacheStore, DisabledStoresNothing) {
  TempDir d;
  CacheStore c(d.path() / "off", false);
  c.put("k", "txt", "x");
  EXPECT_FALSE(c.get("k", "txt").has_value());
  EXPECT_FALSE(fs::exists(d.path() / "off"));
}

TEST(CacheStore, GeneratorImagesAreByteIdenticalAndRepaired) {
  TempDir d;
  std::vector<CommPoly> first;
  std::vector<std::pair<fs::path, std::string>> files;
  {
    CacheStore c(d.path());
    first = c.generator_images();
    ASSERT_EQ(first.size(), static_cast<std::size_t>(kGeneratorCount));
    for (const auto& e : fs::directory_iterator(d.path()))
      if (e.path().extension() == ".poly") files.emplace_back(e.path(), bytes(e.path()));
    ASSERT_EQ(files.size(), static_cast<std::size_t>(kGeneratorCount));
  }
  {
    // A clean hit performs no evaluation.
    CacheStore c(d.path());
    const std::size_t before = evaluation_counter();
    EXPECT_EQ(c.generator_images(), first);
    EXPECT_EQ(evaluation_counter(), before);
    EXPECT_EQ(c.stats().hits, static_cast<std::size_t>(kGeneratorCount));
  }
  {
    // Flip one digit in one file: detected, recomputed, rewritten identically.
    std::string body = files[3].second;
    auto pos = body.find_last_of("123456789");
    ASSERT_NE(pos, std::string::npos);
    body[pos] = body[pos] == '9' ? '8' : static_cast<char>(body[pos] + 1);
    overwrite(files[3].first, body);
    CacheStore c(d.path());
    EXPECT_EQ(c.generator_images(), first);
    EXPECT_EQ(c.stats().corrupt, 1u);
    for (const auto& [p, b] : files) EXPECT_EQ(bytes(p), b) << p;
  }
  {
    // Each file is the canonical text of its polynomial.
    for (int g = 0; g < kGeneratorCount; ++g) {
      CacheStore c(d.path());
      EXPECT_EQ(bytes(c.path_for("generator-image/" + abs_generators()[static_cast<std::size_t>(g)].name(), "poly")),
                to_canonical_text(first[static_cast<std::size_t>(g)]));
    }
  }
}

TEST(CacheStore, RelationSpacesAndZeroChecksSkipEvaluation) {
  TempDir d;
  RelationOptions opt;
  RatVector zeta;
  ZeroReport z0;
  AbsPoly v;
  {
    CacheStore c(d.path());
    RelationAtlas a = c.atlas(opt);
    const RelationSpace& sp = a.get(Partition(7, 5));
    zeta = sp.zeta.at(0);
    v = sp.relvectors.at(0);
    z0 = c.zero_check(v);
    EXPECT_TRUE(z0.zero);
  }
  CacheStore c(d.path());
  const std::size_t before = evaluation_counter();
  RelationAtlas a = c.atlas(opt);
  const RelationSpace& sp = a.get(Partition(7, 5));
  EXPECT_EQ(sp.zeta.at(0), zeta);
  EXPECT_EQ(sp.relvectors.at(0), v);
  ZeroReport z1 = c.zero_check(v);
  EXPECT_EQ(z1.digest, z0.digest);
  EXPECT_TRUE(z1.zero);
  EXPECT_TRUE(c.zero_check(parse_trace("tr(xy)-tr(yx)")).zero);
  const std::size_t mid = evaluation_counter();
  EXPECT_TRUE(c.zero_check(parse_trace("tr(xy)-tr(yx)")).zero);
  EXPECT_EQ(evaluation_counter(), mid);
  EXPECT_EQ(mid, before);  // the empty expression never reaches the evaluator
  // An exact request is not served the modular entry.
  RelationOptions exact = opt;
  exact.mode = NullMode::Exact;
  EXPECT_FALSE(c.load_relation_space(Partition(7, 5), exact).has_value());
}

TEST(CacheStore, CertificateJsonRoundTrip) {
  TempDir d;
  CacheStore c(d.path());
  RelationAtlas a = c.atlas(RelationOptions{});
  const RelationSpace& sp = a.get(Partition(6, 6));
  RelationCertificate cert = make_certificate(sp, 1, GeneratorImages<QQ>());
  RelationCertificate back = certificate_from_json(json::parse(to_json(cert).dump()));
  EXPECT_EQ(back.relvector, cert.relvector);
  EXPECT_EQ(back.zeta, cert.zeta);
  EXPECT_EQ(back.digest, cert.digest);
  EXPECT_EQ(back.leading, cert.leading);
  EXPECT_EQ(parse_trace(back.trace_form), phi(cert.relvector));
  json j = to_json(cert);
  for (const char* key : {"lambda", "zeta", "abspoly", "trace_form", "leading"}) EXPECT_TRUE(j.contains(key)) << key;
}
