#include "hoff/polynomial_fn.hpp"

#include <functional>
#include <numeric>
#include <sstream>

namespace hoff {
namespace {

std::uint32_t reduce_exponent(std::uint32_t e, std::uint32_t p) {
  if (e < p) return e;
  return ((e - 1) % (p - 1)) + 1;
}

unsigned total(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

void require_compatible(const PolynomialFn& f, const PolynomialFn& g) {
  if (f.p() != g.p() || f.n() != g.n()) throw InvalidArgument("polynomial shape mismatch");
}

}  // namespace

PolynomialFn::PolynomialFn(std::uint32_t p, std::size_t n) : p_(PrimeField(p).p()), n_(n) {}

PolynomialFn PolynomialFn::constant(std::uint32_t p, std::size_t n, Residue c) {
  PolynomialFn f(p, n);
  f.add_term(Exponents(n, 0), c);
  return f;
}

PolynomialFn PolynomialFn::variable(std::uint32_t p, std::size_t n, std::size_t i) {
  PolynomialFn f(p, n);
  Exponents e(n, 0);
  e.at(i) = 1;
  f.add_term(std::move(e), 1);
  return f;
}

PolynomialFn PolynomialFn::affine(std::uint32_t p, const Point& a, Residue b) {
  PolynomialFn f(p, a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Exponents e(a.size(), 0);
    e[i] = 1;
    f.add_term(std::move(e), a[i]);
  }
  f.add_term(Exponents(a.size(), 0), b);
  return f;
}

PolynomialFn PolynomialFn::random(std::uint32_t p, std::size_t n, unsigned k, Rng& rng, bool with_lower) {
  PolynomialFn f(p, n);
  for (unsigned d = with_lower ? 0 : k; d <= k; ++d)
    for (auto& e : monomials_of_degree(p, n, d)) f.add_term(std::move(e), rng.residue(p));
  return f;
}

int PolynomialFn::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(total(e)));
  return d;
}

void PolynomialFn::add_term(Exponents e, Residue c) {
  if (e.size() != n_) throw InvalidArgument("monomial has " + std::to_string(e.size()) + " exponents, expected " + std::to_string(n_));
  for (auto& v : e) v = reduce_exponent(v, p_);
  c %= p_;
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(std::move(e), c);
  if (!inserted) {
    it->second = (it->second + c) % p_;
    if (it->second == 0) terms_.erase(it);
  }
}

Residue PolynomialFn::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

Residue PolynomialFn::eval(const Point& x) const {
  if (x.size() != n_) throw InvalidArgument("polynomial evaluated at a point of the wrong dimension");
  PrimeField F(p_);
  std::uint64_t sum = 0;
  for (const auto& [e, c] : terms_) {
    Residue v = c;
    for (std::size_t i = 0; i < n_ && v; ++i)
      if (e[i]) v = F.mul(v, F.pow(x[i], e[i]));
    sum += v;
  }
  return static_cast<Residue>(sum % p_);
}

PolynomialFn PolynomialFn::homogeneous_part(unsigned d) const {
  PolynomialFn out(p_, n_);
  for (const auto& [e, c] : terms_)
    if (total(e) == d) out.terms_.emplace(e, c);
  return out;
}

PolynomialFn PolynomialFn::part_below(unsigned d) const {
  PolynomialFn out(p_, n_);
  for (const auto& [e, c] : terms_)
    if (total(e) < d) out.terms_.emplace(e, c);
  return out;
}

std::string PolynomialFn::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << c;
    for (std::size_t i = 0; i < n_; ++i)
      if (e[i]) out << "*x" << i << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
  }
  return out.str();
}

PolynomialFn operator+(const PolynomialFn& f, const PolynomialFn& g) {
  require_compatible(f, g);
  PolynomialFn out = f;
  for (const auto& [e, c] : g.terms()) out.add_term(e, c);
  return out;
}

PolynomialFn operator-(const PolynomialFn& f, const PolynomialFn& g) {
  require_compatible(f, g);
  PolynomialFn out = f;
  for (const auto& [e, c] : g.terms()) out.add_term(e, (f.p() - c) % f.p());
  return out;
}

PolynomialFn operator*(const PolynomialFn& f, const PolynomialFn& g) {
  require_compatible(f, g);
  PolynomialFn out(f.p(), f.n());
  PrimeField F(f.p());
  for (const auto& [e1, c1] : f.terms())
    for (const auto& [e2, c2] : g.terms()) {
      Exponents e(f.n());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      out.add_term(std::move(e), F.mul(c1, c2));
    }
  return out;
}

PolynomialFn scale(const PolynomialFn& f, Residue c) {
  PolynomialFn out(f.p(), f.n());
  PrimeField F(f.p());
  for (const auto& [e, v] : f.terms()) out.add_term(e, F.mul(v, c % f.p()));
  return out;
}

std::vector<Exponents> monomials_of_degree(std::uint32_t p, std::size_t n, unsigned d) {
  std::vector<Exponents> out;
  Exponents e(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == n) {
      if (left == 0) out.push_back(e);
      return;
    }
    for (unsigned v = 0; v <= left && v < p; ++v) {
      e[i] = v;
      rec(i + 1, left - v);
    }
    e[i] = 0;
  };
  rec(0, d);
  return out;
}

}  // namespace hoff
