#include "hoff/ffpoly.hpp"

#include <sstream>

#include "hoff/budget.hpp"

namespace hoff::ffpoly {
namespace {

void require_same_modulus(const PolyFp& f, const PolyFp& g) {
  if (f.p() != g.p())
    throw InvalidArgument("modulus mismatch: " + std::to_string(f.p()) + " vs " + std::to_string(g.p()));
}

}  // namespace

PolyFp::PolyFp(std::uint32_t p) : p_(PrimeField(p).p()) {}

PolyFp::PolyFp(std::uint32_t p, std::vector<Residue> coeffs) : p_(PrimeField(p).p()), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= p_;
  trim();
}

PolyFp PolyFp::monomial(std::uint32_t p, std::size_t degree, Residue c) {
  std::vector<Residue> coeffs(degree + 1, 0);
  coeffs[degree] = c;
  return PolyFp(p, std::move(coeffs));
}

void PolyFp::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Point PolyFp::coordinates(std::size_t n) const {
  if (coeffs_.size() > n)
    throw InvalidArgument("polynomial of degree " + std::to_string(degree()) + " is not in G_" + std::to_string(n));
  Point x(n, 0);
  std::copy(coeffs_.begin(), coeffs_.end(), x.begin());
  return x;
}

PolyFp PolyFp::monic() const {
  if (is_zero()) return *this;
  return scale(*this, PrimeField(p_).inv(leading()));
}

std::string PolyFp::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    Residue c = coeffs_[i];
    if (c == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (i == 0 || c != 1) out << c;
    if (i >= 1) out << "t";
    if (i >= 2) out << "^" << i;
  }
  return out.str();
}

PolyFp operator+(const PolyFp& f, const PolyFp& g) {
  require_same_modulus(f, g);
  PrimeField F(f.p());
  std::vector<Residue> c(std::max(f.coeffs().size(), g.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(f.coeff(i), g.coeff(i));
  return PolyFp(f.p(), std::move(c));
}

PolyFp operator-(const PolyFp& f, const PolyFp& g) {
  require_same_modulus(f, g);
  PrimeField F(f.p());
  std::vector<Residue> c(std::max(f.coeffs().size(), g.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.sub(f.coeff(i), g.coeff(i));
  return PolyFp(f.p(), std::move(c));
}

PolyFp operator*(const PolyFp& f, const PolyFp& g) {
  require_same_modulus(f, g);
  if (f.is_zero() || g.is_zero()) return PolyFp(f.p());
  const std::uint64_t p = f.p();
  std::vector<std::uint64_t> acc(f.coeffs().size() + g.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (f.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < g.coeffs().size(); ++j)
      acc[i + j] = (acc[i + j] + std::uint64_t{f.coeffs()[i]} * g.coeffs()[j]) % p;
  }
  return PolyFp(f.p(), std::vector<Residue>(acc.begin(), acc.end()));
}

PolyFp scale(const PolyFp& f, Residue c) {
  PrimeField F(f.p());
  std::vector<Residue> out(f.coeffs());
  for (auto& v : out) v = F.mul(v, c % f.p());
  return PolyFp(f.p(), std::move(out));
}

PolyFp shift(const PolyFp& f, std::size_t s) {
  if (f.is_zero()) return f;
  std::vector<Residue> c(s, 0);
  c.insert(c.end(), f.coeffs().begin(), f.coeffs().end());
  return PolyFp(f.p(), std::move(c));
}

DivRem divrem(const PolyFp& f, const PolyFp& g) {
  require_same_modulus(f, g);
  if (g.is_zero()) throw InvalidArgument("division by the zero polynomial");
  PrimeField F(f.p());
  std::vector<Residue> r = f.coeffs();
  const std::size_t dg = g.coeffs().size() - 1;
  if (r.size() <= dg) return {PolyFp(f.p()), f};
  std::vector<Residue> q(r.size() - dg, 0);
  const Residue lead_inv = F.inv(g.leading());
  for (std::size_t i = r.size(); i-- > dg;) {
    Residue c = F.mul(r[i], lead_inv);
    if (c == 0) continue;
    q[i - dg] = c;
    for (std::size_t j = 0; j <= dg; ++j) r[i - dg + j] = F.sub(r[i - dg + j], F.mul(c, g.coeffs()[j]));
  }
  return {PolyFp(f.p(), std::move(q)), PolyFp(f.p(), std::move(r))};
}

PolyFp mod(const PolyFp& f, const PolyFp& g) { return divrem(f, g).remainder; }

PolyFp gcd(const PolyFp& f, const PolyFp& g) {
  require_same_modulus(f, g);
  PolyFp a = f, b = g;
  while (!b.is_zero()) {
    PolyFp r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

PolyFp derivative(const PolyFp& f) {
  if (f.coeffs().size() <= 1) return PolyFp(f.p());
  PrimeField F(f.p());
  std::vector<Residue> c(f.coeffs().size() - 1);
  for (std::size_t i = 1; i < f.coeffs().size(); ++i) c[i - 1] = F.mul(f.coeffs()[i], F.reduce(static_cast<std::int64_t>(i)));
  return PolyFp(f.p(), std::move(c));
}

PolyFp powmod(const PolyFp& base, std::uint64_t e, const PolyFp& modulus) {
  PolyFp result = mod(PolyFp::constant(base.p(), 1), modulus);
  PolyFp b = mod(base, modulus);
  while (e) {
    if (e & 1) result = mod(result * b, modulus);
    e >>= 1;
    if (e) b = mod(b * b, modulus);
  }
  return result;
}

bool is_squarefree(const PolyFp& f) {
  if (f.is_constant()) throw InvalidArgument("is_squarefree needs a polynomial of degree at least 1");
  PolyFp df = derivative(f);
  // f' = 0 means f is a p-th power.
  if (df.is_zero()) return false;
  return gcd(f, df).degree() == 0;
}

unsigned count_irreducible_factors(const PolyFp& input) {
  if (input.is_constant()) throw InvalidArgument("factor count needs a polynomial of degree at least 1");
  if (!is_squarefree(input)) throw InvalidArgument("factor count needs a squarefree polynomial");
  const std::uint32_t p = input.p();
  PolyFp f = input.monic();
  const PolyFp t = PolyFp::monomial(p, 1);
  PolyFp h = mod(t, f);  // t^{p^d} mod f, advanced one Frobenius step per round
  unsigned count = 0;
  for (std::size_t d = 1; f.degree() >= 2 * static_cast<int>(d); ++d) {
    h = powmod(h, p, f);
    PolyFp g = gcd(f, h - t);
    if (g.degree() > 0) {
      count += static_cast<unsigned>(g.degree()) / static_cast<unsigned>(d);
      f = divrem(f, g).quotient;
      h = mod(h, f);
    }
  }
  if (f.degree() > 0) ++count;
  return count;
}

int mobius(const PolyFp& f) {
  if (f.is_zero()) return 0;
  if (f.is_constant()) return 1;
  if (!is_squarefree(f)) return 0;
  return count_irreducible_factors(f) % 2 == 0 ? 1 : -1;
}

std::uint64_t space_size(const SpaceIndex& s) { return power_u64(s.p, s.n); }

PolyFp space_element(const SpaceIndex& s, std::uint64_t index) {
  std::vector<Residue> c(s.n + (s.kind == SpaceKind::A ? 1 : 0), 0);
  for (std::size_t i = 0; i < s.n; ++i) {
    c[i] = static_cast<Residue>(index % s.p);
    index /= s.p;
  }
  if (s.kind == SpaceKind::A) c[s.n] = 1;
  return PolyFp(s.p, std::move(c));
}

void for_each_in_space(const SpaceIndex& s, const std::function<void(const PolyFp&)>& visit) {
  require_within_budget(power_ld(s.p, s.n), "enumerate_space");
  const std::uint64_t size = space_size(s);
  for (std::uint64_t i = 0; i < size; ++i) visit(space_element(s, i));
}

std::vector<PolyFp> enumerate_space(const SpaceIndex& s) {
  std::vector<PolyFp> out;
  for_each_in_space(s, [&](const PolyFp& f) { out.push_back(f); });
  return out;
}

PolyFp BaseWDecomposition::main_part() const {
  PolyFp acc(w.p());
  for (std::size_t j = 0; j < chunks.size(); ++j) acc = acc + shift(chunks[j], j * d);
  return w * acc;
}

PolyFp BaseWDecomposition::reconstruct() const { return res + main_part() + over; }

BaseWDecomposition base_w_decompose(const PolyFp& x, const PolyFp& w, std::size_t d, std::size_t s) {
  require_same_modulus(x, w);
  if (w.is_zero()) throw InvalidArgument("base_w_decompose: w must be nonzero");
  if (d == 0 || s == 0) throw InvalidArgument("base_w_decompose: d and s must be positive");
  if (w.degree() > static_cast<int>(d)) throw InvalidArgument("base_w_decompose: deg w exceeds d");
  const std::uint32_t p = x.p();
  auto [q, r] = divrem(x, w);
  BaseWDecomposition out{w, d, s, std::move(r), {}, PolyFp(p)};
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<Residue> chunk(d, 0);
    for (std::size_t i = 0; i < d; ++i) chunk[i] = q.coeff(j * d + i);
    out.chunks.emplace_back(p, std::move(chunk));
  }
  if (q.coeffs().size() > s * d) {
    std::vector<Residue> high(q.coeffs().begin() + static_cast<std::ptrdiff_t>(s * d), q.coeffs().end());
    out.over = w * shift(PolyFp(p, std::move(high)), s * d);
  }
  return out;
}

std::string to_csv_cell(const PolyFp& f) {
  std::string out;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i) out += ':';
    out += std::to_string(f.coeffs()[i]);
  }
  return out;
}

PolyFp from_csv_cell(std::uint32_t p, const std::string& cell) {
  std::vector<Residue> c;
  std::size_t pos = 0;
  while (pos < cell.size()) {
    std::size_t next = cell.find(':', pos);
    if (next == std::string::npos) next = cell.size();
    const std::string token = cell.substr(pos, next - pos);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty() || v >= p)
      throw InvalidArgument("bad coefficient '" + token + "' at offset " + std::to_string(pos) + " of polynomial cell");
    c.push_back(static_cast<Residue>(v));
    pos = next + 1;
  }
  return PolyFp(p, std::move(c));
}

}  // namespace hoff::ffpoly
