#include "hoff/exact_fraction.hpp"

#include <cmath>
#include <limits>

#include "hoff/errors.hpp"

namespace hoff {
namespace {

BigInt big_pow(std::uint32_t p, std::uint32_t e) {
  BigInt r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= p;
  return r;
}

}  // namespace

ExactFraction::ExactFraction(BigInt numerator, std::uint32_t p, std::uint32_t exponent)
    : num_(std::move(numerator)), p_(p), exp_(exponent) {
  if (num_ < 0) throw InvalidArgument("ExactFraction must be nonnegative");
  if (p_ < 2) throw InvalidArgument("ExactFraction base must be at least 2");
  normalize();
}

void ExactFraction::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && num_ % p_ == 0) {
    num_ /= p_;
    --exp_;
  }
}

BigInt ExactFraction::denominator() const { return big_pow(p_, exp_); }

Rational ExactFraction::to_rational() const { return Rational(num_, denominator()); }

double ExactFraction::to_double() const {
  return num_.convert_to<double>() / std::pow(static_cast<double>(p_), static_cast<double>(exp_));
}

double ExactFraction::log_p() const {
  if (num_ == 0) return -std::numeric_limits<double>::infinity();
  return std::log(num_.convert_to<double>()) / std::log(static_cast<double>(p_)) -
         static_cast<double>(exp_);
}

std::string ExactFraction::to_string() const {
  Rational r = to_rational();
  auto n = boost::multiprecision::numerator(r);
  auto d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

ExactFraction operator*(const ExactFraction& a, const ExactFraction& b) {
  if (a.p_ != b.p_) throw InvalidArgument("ExactFraction product across different bases");
  return {a.num_ * b.num_, a.p_, a.exp_ + b.exp_};
}

std::strong_ordering operator<=>(const ExactFraction& a, const ExactFraction& b) {
  BigInt lhs = a.num_ * b.denominator();
  BigInt rhs = b.num_ * a.denominator();
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering ExactFraction::compare(const Rational& r) const {
  Rational self = to_rational();
  if (self < r) return std::strong_ordering::less;
  if (self > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ExactFraction ExactFraction::parse(const std::string& text, std::uint32_t p) {
  auto slash = text.find('/');
  try {
    BigInt num(text.substr(0, slash));
    if (slash == std::string::npos) return {num, p, 0};
    BigInt den(text.substr(slash + 1));
    std::uint32_t e = 0;
    while (den > 1 && den % p == 0) {
      den /= p;
      ++e;
    }
    if (den != 1) throw InvalidArgument("denominator of '" + text + "' is not a power of " + std::to_string(p));
    return {num, p, e};
  } catch (const std::runtime_error& err) {
    if (dynamic_cast<const InvalidArgument*>(&err)) throw;
    throw InvalidArgument("cannot parse fraction '" + text + "'");
  }
}

}  // namespace hoff
