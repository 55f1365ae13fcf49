#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "hoff/exact_fraction.hpp"
#include "hoff/multiaffine_form.hpp"
#include "hoff/multilinear_form.hpp"
#include "hoff/polynomial_fn.hpp"
#include "hoff/variety.hpp"

namespace hoff {

// Complex values on the product F_p^{dims[0]} x ..., indexed as in
// ProductSpace. Polynomial phases on F_p^n use dims = {n}.
struct FunctionTable {
  std::uint32_t p = 2;
  std::vector<std::size_t> dims;
  std::vector<std::complex<double>> values;
};

FunctionTable phase_table(const MultilinearForm& alpha);
FunctionTable phase_table(const MultiaffineForm& lambda);
FunctionTable phase_table(const PolynomialFn& Q);

struct PhaseTerm {
  std::complex<double> coefficient;
  std::variant<MultiaffineForm, PolynomialFn> source;
  friend bool operator==(const PhaseTerm&, const PhaseTerm&) = default;
};

struct PhaseCombination {
  std::vector<PhaseTerm> terms;
  std::size_t m = 0;        // term count
  double l1 = 0;            // sum of |c_i|
  double l2_error = 0;      // measured against the target phase
  friend bool operator==(const PhaseCombination&, const PhaseCombination&) = default;
};

/// Recomputes m and l1 from the terms.
void refresh_metadata(PhaseCombination& c);
FunctionTable evaluate(const PhaseCombination& c, std::uint32_t p, const std::vector<std::size_t>& dims);
/// Uniform-measure L2 distance between f and the combination on f's domain.
double l2_distance(const FunctionTable& f, const PhaseCombination& c);
double l2_distance(const FunctionTable& f, const FunctionTable& g);

/// Z = {x_[k-1] : A(x_[k-1]) = 0} as a strictly multilinear variety on U_[k-1].
MultilinearVariety kernel_variety(const MultilinearForm& alpha);

/// L_t(x_[k-1]) . x_k = sum over I strictly inside [k-1] of
/// (-1)^{k-|I|} alpha(x_I, t_rest, x_k), as a k-slot multiaffine form.
MultiaffineForm translate_map_L(const MultilinearForm& alpha, const PointTuple& t);

struct MlApproxOptions {
  std::size_t start_m = 8;
  std::size_t max_draws_per_level = 4096;
  /// Materialize every term (m p^s multiaffine forms).
  bool materialize_terms = true;
  /// Cross-check the grouped error against literal term evaluation when
  /// terms x points stays below this many evaluations.
  std::uint64_t literal_check_limit = std::uint64_t{1} << 24;
};

// Everything the three-stage construction produced.
struct MlConstruction {
  MultilinearForm alpha;
  std::vector<PointTuple> translates{};  // t^(i) in U_[k-1]
  std::optional<ExternalApproximation> outer{};  // V; absent when k = 1
  std::uint64_t z_size = 0, u_size = 0;       // |Z|, |U_[k-1]|
  std::size_t m = 0, s = 0;
  std::size_t levels_tried = 0, draws = 0;
  std::uint64_t stage1_bad_points = 0;
  std::size_t proven_m_cap = 0;         // 2^7 eps^-4 c^-4
  double proven_s_cap = 0;              // 2 log_p(4 m / (eps c))
  Rational coefficient{};              // |U| / (p^s m |Z|), every term
  Rational l1_exact{};                 // |U| / |Z|
  double term_bound_log2 = 0;          // log2(2^25 eps^-14 c^-14)
  double grouped_l2_error = 0;
  std::optional<double> literal_l2_error{};
};

struct MlApproxResult {
  PhaseCombination combination;
  MlConstruction construction;
};

/// Approximates chi o alpha in L2 within eps by an equal-weight combination
/// of phases of multiaffine forms with vanishing multilinear part.
MlApproxResult approximate_multilinear_phase(const MultilinearForm& alpha, double eps, std::uint64_t seed,
                                             const MlApproxOptions& options = {});

/// g on U_[k] computed from the grouped description (indicator of t + V
/// times chi(L_t(x) . x_k)); equals the term sum exactly.
FunctionTable grouped_table(const MlConstruction& c);

struct PolyApproxResult {
  PhaseCombination combination{};  // polynomial terms, identical ones merged
  MlConstruction construction;
  PointTuple diagonal_translate{};  // t_1, ..., t_k
  double diagonal_error = 0;      // error of the multilinear approximation on that diagonal
  std::size_t translates_searched = 0;
  bool exhaustive_search = false;
  std::size_t raw_terms = 0;
  Rational l1_exact{};
  PolynomialFn q_prime;           // L_Q(t + x, ...) - Q_k(x), symbolic
};

/// Approximates chi o Q by a combination of phases of polynomials of degree
/// at most k - 1, k = deg Q < p.
PolyApproxResult approximate_polynomial_phase(const PolynomialFn& Q, double eps, std::uint64_t seed,
                                              const MlApproxOptions& options = {});

/// ||f||_{U^k} by full enumeration; f must be on a single slot F_p^n.
double gowers_norm(const FunctionTable& f, unsigned k);
/// ||chi o Q||_{U^k}^{2^k} as an exact rational when the derivative
/// histogram makes it one (all nonzero values equally frequent).
std::optional<Rational> gowers_power_exact(const PolynomialFn& Q, unsigned k);

/// E_x chi(Q(x) - P(x)).
std::complex<double> phase_correlation(const PolynomialFn& Q, const PolynomialFn& P);

struct GowersInverseResult {
  PolynomialFn P;
  double correlation = 0;  // |E chi(Q) conj chi(P)|
  double gowers_norm = 0;
  std::size_t m = 0;
  double l1 = 0;
  double approximation_error = 0;
  bool meets_half_over_m = false;   // correlation >= 1/(2m)
  bool meets_half_over_l1 = false;  // correlation >= 1/(2 l1)
};

GowersInverseResult gowers_inverse_polynomial(const PolynomialFn& Q, unsigned k, std::uint64_t seed,
                                              const MlApproxOptions& options = {});

}  // namespace hoff
