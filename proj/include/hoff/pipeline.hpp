#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hoff/exact_fraction.hpp"
#include "hoff/ffpoly.hpp"
#include "hoff/multilinear_form.hpp"
#include "hoff/phaseapprox.hpp"
#include "hoff/polynomial_fn.hpp"
#include "hoff/variety.hpp"

namespace hoff {

/// mu(f) for every f in G_n, indexed by enumeration position (t^0 fastest).
const std::vector<int>& mobius_table(std::uint32_t p, std::size_t n);

/// Exact sum of mu over A_n (monic) or G_n.
std::int64_t mobius_sum(std::uint32_t p, std::size_t n, bool monic_only);

struct CorrelationReport {
  std::uint32_t p = 0;
  std::size_t n = 0;
  int k = 0;  // degree of Q
  std::string q_description;
  std::complex<double> S;           // (1/p^n) sum_{G_n} mu(f) chi(Q(f))
  double abs_S = 0;
  std::complex<double> constants;   // the part of S coming from nonzero constants f
  double permuted_deviation = 0;    // |S - S computed in a shuffled order|
  std::optional<double> seconds;
};

/// Q is read on coefficient coordinates: Q(f) = Q(f_0, ..., f_{n-1}).
CorrelationReport mobius_correlation(const PolynomialFn& Q, bool timing = false, std::uint64_t shuffle_seed = 1);

/// Exact cyclotomic average (1/total) sum_v counts[v] chi(v).
struct PhaseAverage {
  std::vector<std::uint64_t> counts;  // histogram of the phase argument
  std::uint64_t total = 0;
  std::complex<double> value() const;
};

enum class MultiplierSet { Monic, All };  // A_m or G_m
std::string to_string(MultiplierSet s);

struct DichotomyFirstCase {
  std::size_t m = 0;
  MultiplierSet set = MultiplierSet::Monic;
  PhaseAverage square_average;  // E_a |E_x Phi(ax)|^2 = E_{a,x,x'} chi(Q(ax) - Q(ax'))
  PhaseAverage fourfold;        // E_{x,x'} E_{a,a'} chi(Q(ax) - Q(a'x) - Q(ax') + Q(a'x'))
  bool first_range = false;     // m <= n/9
  bool second_range = false;    // n/18 <= m <= 17n/18
  bool first_holds = false;     // square_average >= c^2 / (16 n^5)
  bool second_holds = false;    // fourfold >= c^4 / (256 n^10)
};

struct ComposedBiasRow {
  std::size_t m = 0;
  bool in_range = false;  // m0 <= m <= 17n/18
  std::uint64_t tuples = 0;
  std::map<ExactFraction, std::uint64_t> bias_histogram;  // bias(psi_a) over a in G_m^k
  Rational mean_bias;
};

struct DichotomyReport {
  std::uint32_t p = 0;
  std::size_t n = 0, k = 0, m0 = 0;
  double c = 0;           // requested lower bound on the correlation
  double measured = 0;    // |S|
  double first_threshold = 0, second_threshold = 0;
  std::vector<DichotomyFirstCase> vaughan_rows;
  ExactFraction bias_LQ;  // first disjunct of the multilinear reduction
  std::vector<ComposedBiasRow> composed_rows;
  std::string constant_slot = "C_1";  // thresholds (c/2n)^{C_1}, p^{-k m0}(c/2n)^{C_1}
  bool first_disjunct_positive = false;
  bool second_disjunct_positive = false;
};

DichotomyReport vaughan_dichotomy_check(const PolynomialFn& Q, double c, std::size_t m0);

struct ChevalleyWarningReport {
  std::size_t d = 0, g = 0, k = 0;
  std::size_t equations = 0;
  std::size_t degree_sum = 0;     // sum of equation degrees
  bool degree_condition = false;  // d > degree_sum: the count is divisible by p
  bool dimension_condition = false;  // d > k * equations
  std::uint64_t solutions = 0;    // including w = 0
  bool divisible = false;
  std::optional<ffpoly::PolyFp> w;  // first nonzero solution in enumeration order
};

/// Searches w in G_d with (w t^{i_1 d}, ..., w t^{i_k d}) in W for all
/// i in [0, g-1]^k; W lives on G_m^k.
ChevalleyWarningReport chevalley_warning_search(const MultilinearVariety& W, std::size_t d, std::size_t g);

struct SequencePlan {
  std::vector<std::size_t> j, l, a;
  std::size_t g = 0, s = 0, d = 0;
  std::uint64_t multiplicity = 0;     // product of multiplicities! of j
  std::uint64_t stabilizer_of_l = 0;  // permutations fixing l
};

/// The l / a split of a nondecreasing index tuple; every structural property
/// is checked and a violation throws Error. p > 0 additionally requires the
/// multiplicities to be nonzero mod p.
SequencePlan sequence_plan(const std::vector<std::size_t>& j, std::size_t g, std::size_t s, std::size_t d,
                           std::uint32_t p = 0);

/// Sum-of-squares order: true when the sum of squares of x is smaller.
bool precedes(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y);

struct CascadeRow {
  std::vector<std::size_t> v;
  ExactFraction bias;
  ExactFraction lower_bound;  // chained product bound
  bool sorted = true;
  // sorted rows past the first s
  std::optional<SequencePlan> plan;
  ExactFraction h_bias;
  bool h_bias_at_least_c = false;
  bool identity_holds = false;         // |Stab(l)| L_v = H - sum_{S'} T_sigma
  bool identity_with_multiplicity = false;  // the same with prod(multiplicities of v)!
  std::vector<std::size_t> earlier;    // row numbers of the T_sigma sources
  // unsorted rows: equal to a slot permutation of an earlier row
  std::optional<std::size_t> permutation_of;
};

struct CascadeReport {
  std::uint32_t p = 0;
  std::size_t n = 0, m = 0, d = 0, k = 0, g = 0, s = 0;
  ffpoly::PolyFp w{2};
  ChevalleyWarningReport search;
  ExactFraction c;  // min over i in [0, g-1]^k of bias psi_{w t^{i d}}
  std::vector<CascadeRow> rows;
  bool first_rows_at_least_c = false;
  bool all_identities_hold = false;
  bool bounds_consistent = false;  // every measured bias >= its chained bound
  bool block_dimension_condition = false;  // d > k r (n/d)^k
  bool reconstruction_exact = false;
  bool hom_identity_exact = false;
  ExactFraction bias_main;  // bias L_Q o (pi_main, ..., pi_main)
  ExactFraction main_lower_bound;
  ExactFraction bias_LQ;
  bool removal_inequality = false;  // bias L_Q >= p^{-2 3^k d} bias_main
  std::size_t rank_res = 0, rank_over = 0;
  bool removal_inequality_ranks = false;  // the same with p^{-r (3^k - 1)}, r the larger rank
};

/// W on G_m^k defaults to the whole space; w defaults to the search result.
CascadeReport bias_cascade_report(const PolynomialFn& Q, std::size_t d, std::size_t m,
                                  const std::optional<MultilinearVariety>& W = std::nullopt,
                                  const std::optional<ffpoly::PolyFp>& w = std::nullopt);

struct DegreeLoweringReport {
  PolynomialFn Q_tilde{2, 0};
  double correlation = 0;    // |(1/p^n) sum mu chi(Q_tilde)|
  double recomputed = 0;     // the same, through mobius_correlation
  double measured_c = 0;     // |S| for Q
  ExactFraction bias_LQ;
  double eps = 0;
  std::size_t terms = 0;
  double l1 = 0;
  double averaging_bound = 0;  // (c - eps) / l1
  bool meets_averaging_bound = false;
  std::string constant_slot = "C_4";
};

DegreeLoweringReport degree_lowering(const PolynomialFn& Q, unsigned k, double c, std::uint64_t seed,
                                     const MlApproxOptions& options = {});

struct DecayRow {
  std::size_t n = 0;
  double max_abs_S = 0, mean_abs_S = 0;
  std::size_t evaluated = 0;
};

struct DecayTable {
  std::uint32_t p = 0;
  unsigned k = 0;
  std::vector<DecayRow> rows;
  std::optional<double> slope;  // -(least-squares slope of log_p max|S| against n)
  bool monotone = false;        // max|S| nonincreasing in n
  std::string to_csv() const;
};

/// Random degree-k polynomials (`samples` per n) plus the structured
/// monomials of degree k.
DecayTable decay_experiment(std::uint32_t p, unsigned k, const std::vector<std::size_t>& n_values,
                            std::size_t samples, std::uint64_t seed);

/// Uniform degree-k part plus uniform lower-order part.
PolynomialFn random_degree_k_polynomial(std::uint32_t p, std::size_t n, unsigned k, Rng& rng);

}  // namespace hoff
