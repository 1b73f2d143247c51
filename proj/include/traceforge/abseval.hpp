#pragma once

// Evaluation of K[G_0] on the generic traceless matrices through the
// images of the thirty basis generators.

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "traceforge/genmat.hpp"
#include "traceforge/glcat.hpp"

namespace traceforge {

/// Evaluated e_j of every module, flat generator order.
inline std::vector<CommPoly> compute_generator_images() {
  EvalCache cache;
  std::vector<CommPoly> out;
  for (const auto& g : abs_generators())
    out.push_back(eval_trace_expr(catalog()[static_cast<std::size_t>(g.module - 1)].basis[static_cast<std::size_t>(g.j)], cache));
  return out;
}

namespace detail {

inline std::optional<std::vector<CommPoly>>& installed_generator_images() {
  static std::optional<std::vector<CommPoly>> images;
  return images;
}

}  // namespace detail

inline bool generator_images_fixed(bool mark = false) {
  static bool fixed = false;
  if (mark) fixed = true;
  return fixed;
}

/// Supplies the images (e.g. from a verified cache) before first use.
/// Throws if the process already fixed its images.
inline void install_generator_images(std::vector<CommPoly> images);

/// Process-wide exact images: the installed ones, else computed on first use.
inline const std::vector<CommPoly>& exact_generator_images() {
  static const std::vector<CommPoly> images = [] {
    generator_images_fixed(true);
    auto& installed = detail::installed_generator_images();
    if (installed) return std::move(*installed);
    return compute_generator_images();
  }();
  return images;
}

inline void install_generator_images(std::vector<CommPoly> images) {
  if (generator_images_fixed()) throw std::logic_error("generator images already in use");
  if (images.size() != static_cast<std::size_t>(kGeneratorCount)) throw CatalogError("expected 30 generator images");
  detail::installed_generator_images() = std::move(images);
}

/// Generator images over a coefficient ring, plus product evaluation.
template <class Ring>
class GeneratorImages {
 public:
  using P = Poly<Ring>;

  GeneratorImages(const std::vector<CommPoly>& exact, Ring ring) : ring_(ring) {
    if (exact.size() != static_cast<std::size_t>(kGeneratorCount)) throw CatalogError("expected 30 generator images");
    for (const auto& e : exact)
      images_.push_back(e.map_coefficients(ring, [&](const Rational& c) { return ring.from_rational(c); }));
  }
  explicit GeneratorImages(Ring ring = Ring{}) : GeneratorImages(exact_generator_images(), ring) {}

  const Ring& ring() const { return ring_; }
  const P& image(int flat) const { return images_[static_cast<std::size_t>(flat)]; }

  /// The factors of m as flat indices, smallest image first.
  std::vector<int> factor_order(const AbsMonomial& m) const {
    std::vector<int> f;
    for (int g = 0; g < kGeneratorCount; ++g)
      for (int k = 0; k < m.exponent(g); ++k) f.push_back(g);
    std::stable_sort(f.begin(), f.end(), [&](int a, int b) { return image(a).size() < image(b).size(); });
    return f;
  }

  P eval(const AbsMonomial& m) const {
    ++evaluation_counter();
    P r = P::constant(entry_vars(), ring_.one(), ring_);
    for (int g : factor_order(m)) r = r * image(g);
    return r;
  }

  P eval(const AbsPoly& p) const {
    P r(entry_vars(), ring_);
    for (const auto& [m, c] : p.terms()) r += eval(m).scaled(ring_.from_rational(c));
    return r;
  }

 private:
  Ring ring_;
  std::vector<P> images_;
};

}  // namespace traceforge
