#include "hoff/formcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "hoff/budget.hpp"

namespace hoff {
namespace {

void require_same_shape(const MultilinearForm& a, const MultilinearForm& b) {
  if (a.p() != b.p() || a.dims() != b.dims()) throw InvalidArgument("form shape mismatch");
}

/// Mode product: replaces slot `slot` (dimension d) by rows.size()
/// coordinates, out[.., r, ..] = sum_j rows[r][j] T[.., j, ..].
MultilinearForm mode_product(const MultilinearForm& T, std::size_t slot, const Matrix& rows) {
  const auto& dims = T.dims();
  const std::size_t d = dims[slot];
  for (const auto& row : rows)
    if (row.size() != d) throw InvalidArgument("map row length does not match slot " + std::to_string(slot));
  std::size_t outer = 1, inner = 1;
  for (std::size_t s = 0; s < slot; ++s) outer *= dims[s];
  for (std::size_t s = slot + 1; s < dims.size(); ++s) inner *= dims[s];
  const std::size_t r_count = rows.size();
  std::vector<std::uint64_t> acc(outer * r_count * inner, 0);
  const auto& t = T.tensor();
  const std::uint32_t p = T.p();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t r = 0; r < r_count; ++r) {
      std::uint64_t* dst = &acc[(o * r_count + r) * inner];
      for (std::size_t j = 0; j < d; ++j) {
        const std::uint64_t m = rows[r][j];
        if (!m) continue;
        const Residue* src = &t[(o * d + j) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] = (dst[i] + m * src[i]) % p;
      }
    }
  std::vector<std::size_t> new_dims = dims;
  new_dims[slot] = r_count;
  return MultilinearForm(p, std::move(new_dims), std::vector<Residue>(acc.begin(), acc.end()));
}

std::uint64_t factorial(std::size_t k) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

std::complex<double> character(Residue a, std::uint32_t p) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(a % p) / static_cast<double>(p));
}

std::vector<std::complex<double>> character_table(std::uint32_t p) {
  std::vector<std::complex<double>> out(p);
  for (std::uint32_t a = 0; a < p; ++a) out[a] = character(a, p);
  return out;
}

Residue eval_multilinear(const MultilinearForm& alpha, const PointTuple& x) { return alpha.eval(x); }

ExactFraction bias(const MultilinearForm& alpha) {
  const std::size_t k = alpha.k();
  const std::uint32_t p = alpha.p();
  if (k == 0) throw InvalidArgument("bias needs a form with at least one slot");
  if (k == 1) return ExactFraction(alpha.is_zero() ? 1 : 0, p, 0);
  const auto& dims = alpha.dims();
  std::size_t exponent = 0;
  for (std::size_t s = 0; s + 1 < k; ++s) exponent += dims[s];
  const std::size_t row_dim = dims[k - 2];
  std::vector<std::uint64_t> rank_histogram(row_dim + 1, 0);
  ProductSpace head(p, std::vector<std::size_t>(dims.begin(), dims.end() - 2));
  head.for_each(
      [&](std::uint64_t, const PointTuple& x) {
        std::vector<const Point*> fixed(k, nullptr);
        for (std::size_t s = 0; s + 2 < k; ++s) fixed[s] = &x[s];
        const MultilinearForm M = alpha.contract_many(fixed);
        Matrix rows(row_dim, std::vector<Residue>(dims[k - 1]));
        for (std::size_t i = 0; i < row_dim; ++i)
          std::copy_n(M.tensor().begin() + static_cast<std::ptrdiff_t>(i * dims[k - 1]), dims[k - 1], rows[i].begin());
        ++rank_histogram[rank_mod_p(std::move(rows), p)];
      },
      "bias");
  BigInt count = 0;
  for (std::size_t r = 0; r <= row_dim; ++r)
    if (rank_histogram[r]) count += BigInt(rank_histogram[r]) * boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(row_dim - r));
  return ExactFraction(count, p, static_cast<std::uint32_t>(exponent));
}

std::uint64_t kernel_count_enumerated(const MultilinearForm& alpha) {
  const std::size_t k = alpha.k();
  if (k == 0) throw InvalidArgument("kernel count needs a form with at least one slot");
  ProductSpace head(alpha.p(), std::vector<std::size_t>(alpha.dims().begin(), alpha.dims().end() - 1));
  std::uint64_t count = 0;
  head.for_each(
      [&](std::uint64_t, const PointTuple& x) {
        const Point a = alpha.last_slot_map(x);
        if (std::all_of(a.begin(), a.end(), [](Residue c) { return c == 0; })) ++count;
      },
      "kernel count");
  return count;
}

std::complex<double> bias_direct_oracle(const MultilinearForm& alpha) {
  const std::uint32_t p = alpha.p();
  ProductSpace space(p, alpha.dims());
  std::vector<std::uint64_t> histogram(p, 0);
  space.for_each([&](std::uint64_t, const PointTuple& x) { ++histogram[alpha.eval(x)]; }, "character-sum bias");
  const auto chi = character_table(p);
  std::complex<double> sum = 0;
  for (std::uint32_t v = 0; v < p; ++v) sum += static_cast<double>(histogram[v]) * chi[v];
  return sum / static_cast<double>(space.size());
}

MultilinearForm derived_symmetric_form(const PolynomialFn& Q, unsigned k, bool require_degree_k) {
  const std::uint32_t p = Q.p();
  if (k >= p) throw InvalidArgument("L_Q needs k < p so that k! is invertible (k=" + std::to_string(k) + ", p=" + std::to_string(p) + ")");
  if (require_degree_k && Q.degree() != static_cast<int>(k))
    throw InvalidArgument("L_Q: polynomial has degree " + std::to_string(Q.degree()) + ", expected " + std::to_string(k));
  if (Q.degree() > static_cast<int>(k)) throw InvalidArgument("L_Q: polynomial degree exceeds k");
  PrimeField F(p);
  const Residue inv_fact = F.inv(static_cast<Residue>(factorial(k) % p));
  const std::size_t n = Q.n();
  MultilinearForm L(p, std::vector<std::size_t>(k, n));
  // L is symmetric: compute sorted indices once and copy to every permutation.
  const auto perms = all_permutations(k);
  for_each_index(L.dims(), [&](const Index& idx) {
    if (!std::is_sorted(idx.begin(), idx.end())) return;
    std::int64_t sum = 0;
    for (SlotMask S = 0; S <= full_mask(k); ++S) {
      Point x(n, 0);
      for (auto j : mask_slots(S)) x[idx[j]] = (x[idx[j]] + 1) % p;
      const std::int64_t v = Q.eval(x);
      sum += ((k - std::popcount(S)) % 2 == 0) ? v : -v;
      if (S == full_mask(k)) break;
    }
    const Residue value = F.mul(F.reduce(sum), inv_fact);
    for (const auto& sigma : perms) {
      Index permuted(k);
      for (std::size_t j = 0; j < k; ++j) permuted[j] = idx[sigma[j]];
      L.set(permuted, value);
    }
  });
  return L;
}

PolynomialFn diagonal_polynomial(const MultilinearForm& L) {
  if (L.k() == 0) throw InvalidArgument("diagonal of a 0-slot form needs the ambient dimension");
  const std::size_t n = L.dims()[0];
  for (auto d : L.dims())
    if (d != n) throw InvalidArgument("diagonal needs equal slot dimensions");
  PolynomialFn out(L.p(), n);
  for (const auto& [idx, c] : L.entries()) {
    Exponents e(n, 0);
    for (auto i : idx) ++e[i];
    out.add_term(std::move(e), c);
  }
  return out;
}

PolynomialFn affine_diagonal_expansion(const MultilinearForm& alpha, const PointTuple& t,
                                       const std::vector<SlotMask>& subsets) {
  const std::size_t k = alpha.k();
  if (t.size() != k) throw InvalidArgument("affine_diagonal_expansion: arity mismatch");
  if (k == 0) throw InvalidArgument("affine_diagonal_expansion: form has no slots");
  const std::size_t n = alpha.dims()[0];
  std::vector<SlotMask> masks = subsets;
  if (masks.empty())
    for (SlotMask S = 0; S <= full_mask(k); ++S) {
      masks.push_back(S);
      if (S == full_mask(k)) break;
    }
  PolynomialFn out(alpha.p(), n);
  for (SlotMask S : masks) {
    std::vector<const Point*> fixed(k, nullptr);
    for (std::size_t s = 0; s < k; ++s)
      if (!(S >> s & 1)) fixed[s] = &t[s];
    const MultilinearForm part = alpha.contract_many(fixed);
    if (S == 0) out = out + PolynomialFn::constant(alpha.p(), n, part.tensor()[0]);
    else out = out + diagonal_polynomial(part);
  }
  return out;
}

PolynomialFn multiaffine_diagonal(const MultiaffineForm& lambda, const PointTuple& t) {
  if (lambda.k() == 0) throw InvalidArgument("multiaffine_diagonal: form has no slots");
  const std::size_t n = lambda.dims()[0];
  PolynomialFn out(lambda.p(), n);
  for (const auto& [mask, form] : lambda.components()) {
    if (mask == 0) {
      out = out + PolynomialFn::constant(lambda.p(), n, form.tensor()[0]);
      continue;
    }
    PointTuple sub;
    for (auto s : mask_slots(mask)) sub.push_back(t[s]);
    out = out + affine_diagonal_expansion(form, sub);
  }
  return out;
}

MultilinearForm pullback(const MultilinearForm& alpha, const std::vector<Matrix>& maps) {
  if (maps.size() != alpha.k()) throw InvalidArgument("pullback: one map per slot required");
  MultilinearForm out = alpha;
  for (std::size_t s = 0; s < maps.size(); ++s) out = mode_product(out, s, maps[s]);
  return out;
}

MultilinearForm restrict_form(const MultilinearForm& alpha, const std::vector<Matrix>& bases) {
  if (bases.size() != alpha.k()) throw InvalidArgument("restrict: one basis per slot required");
  for (std::size_t s = 0; s < bases.size(); ++s) {
    for (const auto& v : bases[s])
      if (v.size() != alpha.dims()[s]) throw InvalidArgument("restrict: basis vector has the wrong length in slot " + std::to_string(s));
    if (rank_mod_p(bases[s], alpha.p()) != bases[s].size())
      throw InvalidArgument("restrict: dependent basis vectors in slot " + std::to_string(s));
  }
  return pullback(alpha, bases);
}

MultilinearForm add(const MultilinearForm& a, const MultilinearForm& b) {
  require_same_shape(a, b);
  std::vector<Residue> t(a.tensor());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (t[i] + b.tensor()[i]) % a.p();
  return MultilinearForm(a.p(), a.dims(), std::move(t));
}

MultilinearForm scale(const MultilinearForm& a, Residue c) {
  std::vector<Residue> t(a.tensor());
  for (auto& v : t) v = static_cast<Residue>((std::uint64_t{v} * (c % a.p())) % a.p());
  return MultilinearForm(a.p(), a.dims(), std::move(t));
}

MultilinearForm negate(const MultilinearForm& a) { return scale(a, a.p() - 1); }

MultilinearForm permute_slots(const MultilinearForm& T, const std::vector<std::size_t>& sigma) {
  const std::size_t k = T.k();
  if (sigma.size() != k) throw InvalidArgument("permutation length does not match arity");
  std::vector<std::size_t> inverse(k, k);
  for (std::size_t q = 0; q < k; ++q) {
    if (sigma[q] >= k || inverse[sigma[q]] != k) throw InvalidArgument("not a permutation");
    inverse[sigma[q]] = q;
  }
  std::vector<std::size_t> dims(k);
  for (std::size_t j = 0; j < k; ++j) dims[j] = T.dims()[inverse[j]];
  MultilinearForm out(T.p(), dims);
  for_each_index(dims, [&](const Index& idx) {
    Index old(k);
    for (std::size_t q = 0; q < k; ++q) old[q] = idx[sigma[q]];
    out.set(idx, T.at(old));
  });
  return out;
}

Matrix multiplication_map(const ffpoly::PolyFp& a, std::size_t n_in, std::size_t n_out) {
  if (!a.is_zero() && n_in > 0 && static_cast<std::size_t>(a.degree()) + n_in > n_out)
    throw InvalidArgument("degree overflow: deg a + " + std::to_string(n_in) + " - 1 exceeds " + std::to_string(n_out) + " - 1");
  Matrix rows(n_in, std::vector<Residue>(n_out, 0));
  for (std::size_t r = 0; r < n_in; ++r)
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) rows[r][r + i] = a.coeffs()[i];
  return rows;
}

MultilinearForm composed_multiplication_form(const MultilinearForm& L, const std::vector<ffpoly::PolyFp>& a,
                                             std::size_t m, std::size_t n) {
  const std::size_t k = L.k();
  if (m >= n) throw InvalidArgument("composed form needs m < n");
  if (a.size() != k) throw InvalidArgument("composed form needs one multiplier per slot");
  for (auto d : L.dims())
    if (d != n) throw InvalidArgument("composed form needs L on G_n^k");
  std::vector<Matrix> maps;
  for (const auto& ai : a) {
    if (ai.degree() >= static_cast<int>(m)) throw InvalidArgument("degree overflow: multiplier not in G_m");
    maps.push_back(multiplication_map(ai, n - m, n));
  }
  const MultilinearForm phi = pullback(L, maps);
  MultilinearForm psi(L.p(), std::vector<std::size_t>(k, n - m));
  for (const auto& sigma : all_permutations(k)) psi = add(psi, permute_slots(phi, sigma));
  return psi;
}

MultilinearForm big_composed_form(const MultilinearForm& L, std::size_t m, std::size_t n) {
  const std::size_t k = L.k();
  if (m >= n) throw InvalidArgument("composed form needs m < n");
  for (auto d : L.dims())
    if (d != n) throw InvalidArgument("composed form needs L on G_n^k");
  std::vector<std::size_t> dims(k, m);
  dims.insert(dims.end(), k, n - m);
  MultilinearForm out(L.p(), dims);
  const auto perms = all_permutations(k);
  for_each_index(dims, [&](const Index& idx) {
    std::uint64_t sum = 0;
    Index target(k);
    for (const auto& pi : perms) {
      for (std::size_t i = 0; i < k; ++i) target[i] = idx[i] + idx[k + pi[i]];
      sum += L.at(target);
    }
    out.set(idx, static_cast<Residue>(sum % L.p()));
  });
  return out;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t k) {
  std::vector<std::size_t> sigma(k);
  for (std::size_t i = 0; i < k; ++i) sigma[i] = i;
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(sigma);
  while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

bool rearrangement_dominates(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y,
                             const std::vector<std::size_t>& sigma) {
  const std::size_t k = x.size();
  if (y.size() != k || sigma.size() != k)
    throw RearrangementPrecondition(RearrangementViolation::LengthMismatch, "sequences and permutation differ in length");
  std::vector<bool> seen(k, false);
  for (auto s : sigma) {
    if (s >= k || seen[s]) throw RearrangementPrecondition(RearrangementViolation::LengthMismatch, "sigma is not a permutation");
    seen[s] = true;
  }
  if (!std::is_sorted(x.begin(), x.end()) || !std::is_sorted(y.begin(), y.end()))
    throw RearrangementPrecondition(RearrangementViolation::Unsorted, "x and y must be nondecreasing");
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = j + 1; l < k; ++l)
      if (y[j] == y[l] && x[j] != x[l])
        throw RearrangementPrecondition(RearrangementViolation::PairingViolated,
                                        "y_" + std::to_string(j) + " = y_" + std::to_string(l) + " but x differs");
  bool moves = false;
  for (std::size_t j = 0; j < k; ++j) moves = moves || x[sigma[j]] != x[j];
  if (!moves) throw RearrangementPrecondition(RearrangementViolation::FixesAllValues, "sigma fixes every x-value");
  std::int64_t lhs = 0, rhs = 0;
  for (std::size_t j = 0; j < k; ++j) {
    lhs += (x[j] + y[j]) * (x[j] + y[j]);
    rhs += (x[j] + y[sigma[j]]) * (x[j] + y[sigma[j]]);
  }
  return lhs > rhs;
}

}  // namespace hoff
