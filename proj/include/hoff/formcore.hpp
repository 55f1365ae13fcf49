#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hoff/exact_fraction.hpp"
#include "hoff/ffpoly.hpp"
#include "hoff/multiaffine_form.hpp"
#include "hoff/multilinear_form.hpp"
#include "hoff/polynomial_fn.hpp"
#include "hoff/space.hpp"

namespace hoff {

/// chi(a) = exp(2 pi i a / p).
std::complex<double> character(Residue a, std::uint32_t p);
/// Table of chi(0..p-1).
std::vector<std::complex<double>> character_table(std::uint32_t p);

Residue eval_multilinear(const MultilinearForm& alpha, const PointTuple& x);

/// Exact bias: the fraction of x_[k-1] whose last-slot map vanishes. Only
/// the first k-2 slots are enumerated; the kernel in slot k-1 is counted
/// from the rank of the remaining matrix.
ExactFraction bias(const MultilinearForm& alpha);
/// Number of x_[k-1] in U_[k-1] with A(x_[k-1]) = 0, by direct enumeration.
std::uint64_t kernel_count_enumerated(const MultilinearForm& alpha);
/// Average of chi o alpha over the full product, in floating point.
std::complex<double> bias_direct_oracle(const MultilinearForm& alpha);

/// L_Q: (k!)^{-1} times the k-fold finite difference of Q at 0. With
/// require_degree_k unset, Q of degree below k is accepted (giving 0).
MultilinearForm derived_symmetric_form(const PolynomialFn& Q, unsigned k, bool require_degree_k = true);
/// L(x, ..., x) as a polynomial function.
PolynomialFn diagonal_polynomial(const MultilinearForm& L);
/// alpha(t_1 + x, ..., t_k + x) expanded symbolically, restricted to slot
/// subsets S (slot i in S receives x, the others t_i). `subsets` empty means
/// every subset.
PolynomialFn affine_diagonal_expansion(const MultilinearForm& alpha, const PointTuple& t,
                                       const std::vector<SlotMask>& subsets = {});
/// lambda(t_1 + x, ..., t_k + x) as a polynomial in x.
PolynomialFn multiaffine_diagonal(const MultiaffineForm& lambda, const PointTuple& t);

/// Re-coordinatizes alpha on the subspaces spanned by bases[i] (rows).
/// Throws when some basis is dependent.
MultilinearForm restrict_form(const MultilinearForm& alpha, const std::vector<Matrix>& bases);
/// alpha(M_1 y_1, ..., M_k y_k) where maps[i] lists the images of the
/// coordinate vectors of the new slot i (rows); no independence check.
MultilinearForm pullback(const MultilinearForm& alpha, const std::vector<Matrix>& maps);

MultilinearForm add(const MultilinearForm& a, const MultilinearForm& b);
MultilinearForm scale(const MultilinearForm& a, Residue c);
MultilinearForm negate(const MultilinearForm& a);
/// T^sigma(x_1..x_k) = T(x_{sigma(1)}, ..., x_{sigma(k)}), sigma 0-based.
MultilinearForm permute_slots(const MultilinearForm& T, const std::vector<std::size_t>& sigma);

/// Multiplication by a: G_{n_in} -> G_{n_out}, as the images of t^0..t^{n_in-1}.
Matrix multiplication_map(const ffpoly::PolyFp& a, std::size_t n_in, std::size_t n_out);
/// psi_a(x_[k]) = sum over pi of L(a_1 x_{pi(1)}, ..., a_k x_{pi(k)}) on G_{n-m}^k.
MultilinearForm composed_multiplication_form(const MultilinearForm& L, const std::vector<ffpoly::PolyFp>& a,
                                             std::size_t m, std::size_t n);
/// alpha(a_[k], x_[k]) = sum over pi of L(a_1 x_{pi(1)}, ...) on G_m^k x G_{n-m}^k.
MultilinearForm big_composed_form(const MultilinearForm& L, std::size_t m, std::size_t n);

/// Every permutation of 0..k-1 in lexicographic order.
std::vector<std::vector<std::size_t>> all_permutations(std::size_t k);

enum class RearrangementViolation { Unsorted, LengthMismatch, PairingViolated, FixesAllValues };

class RearrangementPrecondition : public InvalidArgument {
 public:
  RearrangementPrecondition(RearrangementViolation kind, const std::string& what)
      : InvalidArgument(what), kind_(kind) {}
  RearrangementViolation kind() const noexcept { return kind_; }

 private:
  RearrangementViolation kind_;
};

/// Sum (x_j + y_j)^2 > sum (x_j + y_{sigma(j)})^2 under the pairing hypotheses.
bool rearrangement_dominates(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y,
                             const std::vector<std::size_t>& sigma);

}  // namespace hoff
