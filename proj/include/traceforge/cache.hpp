#pragma once

// Content-addressed on-disk cache. Each entry is <sha256(key)>.<ext> plus a
// sidecar <name>.sha256 holding the digest of the body; an entry whose body
// no longer matches is treated as corrupt, removed and recomputed.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "traceforge/abseval.hpp"
#include "traceforge/digest.hpp"
#include "traceforge/json_io.hpp"
#include "traceforge/relfinder.hpp"

namespace traceforge {

/// Bump when a cached format or a computation it depends on changes.
inline constexpr const char* kCacheVersion = "traceforge-cache-1";

struct CacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t writes = 0;
  std::size_t corrupt = 0;
};

class CacheStore {
 public:
  explicit CacheStore(std::filesystem::path dir, bool enabled = true) : dir_(std::move(dir)), enabled_(enabled) {
    if (enabled_) std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }
  bool enabled() const { return enabled_; }
  const CacheStats& stats() const { return stats_; }

  std::filesystem::path path_for(const std::string& key, const std::string& ext) const {
    return dir_ / (sha256_hex(std::string(kCacheVersion) + "\n" + key) + "." + ext);
  }

  std::optional<std::string> get(const std::string& key, const std::string& ext) {
    if (!enabled_) return std::nullopt;
    auto path = path_for(key, ext);
    auto sum = path;
    sum += ".sha256";
    if (!std::filesystem::exists(path) || !std::filesystem::exists(sum)) {
      ++stats_.misses;
      return std::nullopt;
    }
    std::string body = slurp(path), digest = slurp(sum);
    while (!digest.empty() && std::isspace(static_cast<unsigned char>(digest.back()))) digest.pop_back();
    if (sha256_hex(body) != digest) {
      ++stats_.corrupt;
      ++stats_.misses;
      std::error_code ec;
      std::filesystem::remove(path, ec);
      std::filesystem::remove(sum, ec);
      return std::nullopt;
    }
    ++stats_.hits;
    return body;
  }

  void put(const std::string& key, const std::string& ext, const std::string& body) {
    if (!enabled_) return;
    auto path = path_for(key, ext);
    auto sum = path;
    sum += ".sha256";
    write_atomic(path, body);
    write_atomic(sum, sha256_hex(body) + "\n");
    ++stats_.writes;
  }

  // -- typed entries -------------------------------------------------------

  /// The 30 generator images, loaded from the cache or computed (with catalog
  /// certification) and stored as canonical .poly files.
  std::vector<CommPoly> generator_images() {
    std::vector<CommPoly> out;
    for (int g = 0; g < kGeneratorCount; ++g) {
      auto body = get(image_key(g), "poly");
      if (!body) break;
      try {
        out.push_back(from_canonical_text(*body, entry_vars()));
      } catch (const std::exception&) {
        break;
      }
    }
    if (out.size() == static_cast<std::size_t>(kGeneratorCount)) return out;
    out = compute_generator_images();
    for (int g = 0; g < kGeneratorCount; ++g) put(image_key(g), "poly", to_canonical_text(out[static_cast<std::size_t>(g)]));
    return out;
  }

  /// Installs cached generator images for this process, when enabled and
  /// the process has not evaluated anything yet.
  void install_images() {
    if (enabled_ && !generator_images_fixed()) install_generator_images(generator_images());
  }

  std::optional<RelationSpace> load_relation_space(const Partition& lambda, const RelationOptions& opt) {
    auto body = get(relation_key(lambda, opt), "json");
    if (!body) return std::nullopt;
    try {
      return relation_space_from_json(json::parse(*body),
                                      hwv_basis(lambda, opt.blocked.value_or(default_blocked(lambda)), opt.cap));
    } catch (const std::exception&) {
      ++stats_.corrupt;
      return std::nullopt;
    }
  }

  void save_relation_space(const RelationSpace& sp, const RelationOptions& opt) {
    put(relation_key(sp.lambda, opt), "json", to_json(sp).dump(1));
  }

  /// A relation atlas backed by this cache.
  RelationAtlas atlas(const RelationOptions& opt) {
    return RelationAtlas(
        opt, [this, opt](const Partition& l) { return load_relation_space(l, opt); },
        [this, opt](const RelationSpace& sp) { save_relation_space(sp, opt); });
  }

  /// Zero check of phi(v), keyed by the generator polynomial itself.
  ZeroReport zero_check(const AbsPoly& v, const GeneratorImages<QQ>* images = nullptr) {
    const std::string key = "zero/abs/" + v.to_string();
    if (auto body = get(key, "json")) {
      try {
        return zero_report_from_json(json::parse(*body));
      } catch (const std::exception&) {
        ++stats_.corrupt;
      }
    }
    ZeroReport z = images ? verify_zero(v, *images) : verify_zero(v, GeneratorImages<QQ>());
    put(key, "json", to_json(z).dump(1));
    return z;
  }

  /// Zero check of a trace expression, keyed by its canonical rendering.
  ZeroReport zero_check(const TraceExpr& e) {
    const std::string key = "zero/trace/" + e.to_string();
    if (auto body = get(key, "json")) {
      try {
        return zero_report_from_json(json::parse(*body));
      } catch (const std::exception&) {
        ++stats_.corrupt;
      }
    }
    ZeroReport z = verify_zero(e);
    put(key, "json", to_json(z).dump(1));
    return z;
  }

  void put_certificate(const RelationCertificate& c, std::size_t k) {
    put("certificate/" + c.lambda.to_string() + "/" + std::to_string(k) + "/" + c.relvector.to_string(), "json", to_json(c).dump(1));
  }

 private:
  static std::string image_key(int g) { return "generator-image/" + abs_generators()[static_cast<std::size_t>(g)].name(); }

  static std::string relation_key(const Partition& l, const RelationOptions& opt) {
    // Blocking does not change the canonical result; the mode is kept apart so
    // that an exact request is never served a modular computation.
    return "relation-space/" + l.to_string() + "/cap" + std::to_string(opt.cap) + "/" + to_string(opt.mode);
  }

  static std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static void write_atomic(const std::filesystem::path& p, const std::string& body) {
    auto tmp = p;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
      out << body;
    }
    std::filesystem::rename(tmp, p);
  }

  std::filesystem::path dir_;
  bool enabled_;
  CacheStats stats_;
};

}  // namespace traceforge
