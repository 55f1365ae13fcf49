#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hoff/modp.hpp"

namespace hoff::ffpoly {

// An element of F_p[t], stored little-endian (coeffs[i] is the coefficient
// of t^i) with no trailing zeros. The zero polynomial has no coefficients.
class PolyFp {
 public:
  static constexpr int kZeroDegree = -1;

  explicit PolyFp(std::uint32_t p);
  PolyFp(std::uint32_t p, std::vector<Residue> coeffs);

  static PolyFp monomial(std::uint32_t p, std::size_t degree, Residue c = 1);
  static PolyFp constant(std::uint32_t p, Residue c) { return monomial(p, 0, c); }

  std::uint32_t p() const noexcept { return p_; }
  const std::vector<Residue>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  Residue leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
  Residue coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }

  /// Coefficients padded (or required to fit) to length n: the coordinates of
  /// this polynomial as an element of G_n.
  Point coordinates(std::size_t n) const;

  PolyFp monic() const;

  friend bool operator==(const PolyFp&, const PolyFp&) = default;

  std::string to_string() const;

 private:
  void trim();

  std::uint32_t p_;
  std::vector<Residue> coeffs_;
};

PolyFp operator+(const PolyFp& f, const PolyFp& g);
PolyFp operator-(const PolyFp& f, const PolyFp& g);
PolyFp operator*(const PolyFp& f, const PolyFp& g);
PolyFp scale(const PolyFp& f, Residue c);
/// f * t^shift
PolyFp shift(const PolyFp& f, std::size_t shift);

struct DivRem {
  PolyFp quotient;
  PolyFp remainder;
};

DivRem divrem(const PolyFp& f, const PolyFp& g);
PolyFp mod(const PolyFp& f, const PolyFp& g);
/// Monic gcd; gcd(0, 0) = 0.
PolyFp gcd(const PolyFp& f, const PolyFp& g);
PolyFp derivative(const PolyFp& f);
/// base^e mod modulus by square-and-multiply.
PolyFp powmod(const PolyFp& base, std::uint64_t e, const PolyFp& modulus);

bool is_squarefree(const PolyFp& f);
/// Number of monic irreducible factors of a squarefree f, by distinct-degree
/// splitting.
unsigned count_irreducible_factors(const PolyFp& f);
int mobius(const PolyFp& f);

// G_n: polynomials of degree at most n-1. A_n: monic of degree exactly n.
enum class SpaceKind { G, A };

struct SpaceIndex {
  std::uint32_t p;
  std::size_t n;
  SpaceKind kind;
};

std::uint64_t space_size(const SpaceIndex& s);
/// The element with the given position in little-endian lexicographic order
/// (t^0 coefficient varies fastest).
PolyFp space_element(const SpaceIndex& s, std::uint64_t index);
/// Visits every element in order; refuses when p^n exceeds the budget.
void for_each_in_space(const SpaceIndex& s, const std::function<void(const PolyFp&)>& visit);
std::vector<PolyFp> enumerate_space(const SpaceIndex& s);

// x = res + w * sum_j t^{jd} chunks[j] + over, with deg res < deg w and
// over divisible by w t^{sd}.
struct BaseWDecomposition {
  PolyFp w;
  std::size_t d;
  std::size_t s;
  PolyFp res;
  std::vector<PolyFp> chunks;
  PolyFp over;

  PolyFp main_part() const;
  PolyFp reconstruct() const;
};

BaseWDecomposition base_w_decompose(const PolyFp& x, const PolyFp& w, std::size_t d, std::size_t s);

/// "c0:c1:...": the CSV cell encoding of a polynomial.
std::string to_csv_cell(const PolyFp& f);
PolyFp from_csv_cell(std::uint32_t p, const std::string& cell);

}  // namespace hoff::ffpoly
