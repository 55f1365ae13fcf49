#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hoff {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A nonnegative rational num / p^exp. Biases and variety densities are
// stored this way so that every inequality between them is decided
// exactly.
class ExactFraction {
 public:
  ExactFraction() = default;
  ExactFraction(BigInt numerator, std::uint32_t p, std::uint32_t exponent);

  static ExactFraction one(std::uint32_t p) { return {1, p, 0}; }
  /// p^{-r}
  static ExactFraction inverse_power(std::uint32_t p, std::uint32_t r) { return {1, p, r}; }
  /// count / p^exponent, the normalised size of a subset of F_p^exponent.
  static ExactFraction from_count(std::uint64_t count, std::uint32_t p, std::uint32_t exponent) {
    return {BigInt(count), p, exponent};
  }

  const BigInt& numerator() const { return num_; }
  std::uint32_t p() const { return p_; }
  std::uint32_t exponent() const { return exp_; }
  BigInt denominator() const;

  Rational to_rational() const;
  double to_double() const;
  /// log_p of the value; -inf for zero.
  double log_p() const;
  bool is_zero() const { return num_ == 0; }

  /// "num/den" in lowest terms.
  std::string to_string() const;

  friend ExactFraction operator*(const ExactFraction& a, const ExactFraction& b);
  friend std::strong_ordering operator<=>(const ExactFraction& a, const ExactFraction& b);
  friend bool operator==(const ExactFraction& a, const ExactFraction& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  /// Exact comparison against an arbitrary rational.
  std::strong_ordering compare(const Rational& r) const;

  /// Parses "a/b" or "a" where b must be a power of p.
  static ExactFraction parse(const std::string& text, std::uint32_t p);

 private:
  void normalize();

  BigInt num_ = 0;
  std::uint32_t p_ = 2;
  std::uint32_t exp_ = 0;
};

}  // namespace hoff
