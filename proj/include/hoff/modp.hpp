#pragma once

#include <cstdint>
#include <vector>

#include "hoff/errors.hpp"

namespace hoff {

using Residue = std::uint32_t;
using Point = std::vector<Residue>;
using PointTuple = std::vector<Point>;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Arithmetic in F_p for a prime p < 2^16; products fit in 32 bits.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p >= (1u << 16))
      throw InvalidArgument("modulus must be a prime below 65536, got " + std::to_string(p));
  }

  std::uint32_t p() const noexcept { return p_; }

  Residue reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept { return (a * b) % p_; }

  Residue pow(Residue a, std::uint64_t e) const noexcept {
    Residue result = 1 % p_;
    while (e) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  Residue inv(Residue a) const {
    if (a % p_ == 0) throw InvalidArgument("inverse of zero in F_p");
    return pow(a, p_ - 2);
  }

 private:
  std::uint32_t p_;
};

}  // namespace hoff
