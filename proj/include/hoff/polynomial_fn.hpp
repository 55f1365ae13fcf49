#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hoff/modp.hpp"
#include "hoff/rng.hpp"

namespace hoff {

using Exponents = std::vector<std::uint32_t>;

// A polynomial function F_p^n -> F_p. Exponents are stored reduced, since
// x^p = x as functions: any e >= p becomes ((e - 1) mod (p - 1)) + 1.
class PolynomialFn {
 public:
  PolynomialFn(std::uint32_t p, std::size_t n);

  static PolynomialFn constant(std::uint32_t p, std::size_t n, Residue c);
  /// The coordinate function x_i.
  static PolynomialFn variable(std::uint32_t p, std::size_t n, std::size_t i);
  /// a . x + b
  static PolynomialFn affine(std::uint32_t p, const Point& a, Residue b);
  /// Uniform coefficients on every monomial of total degree k, plus a
  /// uniform lower-order part when with_lower is set.
  static PolynomialFn random(std::uint32_t p, std::size_t n, unsigned k, Rng& rng, bool with_lower = true);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t n() const noexcept { return n_; }
  const std::map<Exponents, Residue>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree of the highest nonzero term; -1 for the zero polynomial.
  int degree() const;

  void add_term(Exponents e, Residue c);
  Residue coefficient(const Exponents& e) const;
  Residue eval(const Point& x) const;

  /// Sum of the terms of total degree exactly d.
  PolynomialFn homogeneous_part(unsigned d) const;
  /// Sum of the terms of total degree below d.
  PolynomialFn part_below(unsigned d) const;

  friend bool operator==(const PolynomialFn&, const PolynomialFn&) = default;
  friend bool operator<(const PolynomialFn& a, const PolynomialFn& b) { return a.terms_ < b.terms_; }

  std::string to_string() const;

 private:
  std::uint32_t p_;
  std::size_t n_;
  std::map<Exponents, Residue> terms_;
};

PolynomialFn operator+(const PolynomialFn& f, const PolynomialFn& g);
PolynomialFn operator-(const PolynomialFn& f, const PolynomialFn& g);
PolynomialFn operator*(const PolynomialFn& f, const PolynomialFn& g);
PolynomialFn scale(const PolynomialFn& f, Residue c);

/// All monomials in n variables of total degree exactly d with each exponent
/// below p, in lexicographic order.
std::vector<Exponents> monomials_of_degree(std::uint32_t p, std::size_t n, unsigned d);

}  // namespace hoff
