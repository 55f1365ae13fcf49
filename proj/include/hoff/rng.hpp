#pragma once

#include <cstdint>
#include <random>

#include "hoff/modp.hpp"

namespace hoff {

// Seeded generator with a portable integer mapping: std::mt19937_64 output
// is fixed by the standard while the library distributions are not, so
// draws are produced by rejection sampling on the raw stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  Residue residue(std::uint32_t p) { return static_cast<Residue>(below(p)); }

  Point point(std::uint32_t p, std::size_t dim) {
    Point x(dim);
    for (auto& c : x) c = residue(p);
    return x;
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hoff
