#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hoff/exact_fraction.hpp"
#include "hoff/multiaffine_form.hpp"
#include "hoff/multilinear_form.hpp"
#include "hoff/space.hpp"

namespace hoff {

struct VarietyConstraint {
  SlotMask subset;
  MultilinearForm form;  // on the slots of `subset`, in increasing order
  friend bool operator==(const VarietyConstraint&, const VarietyConstraint&) = default;
};

// The common zero set in U_1 x ... x U_k of multilinear forms, each on a
// nonempty subset of the slots.
class MultilinearVariety {
 public:
  MultilinearVariety(std::uint32_t p, std::vector<std::size_t> ambient);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t k() const noexcept { return ambient_.size(); }
  const std::vector<std::size_t>& ambient() const noexcept { return ambient_; }
  const std::vector<VarietyConstraint>& constraints() const noexcept { return constraints_; }
  ProductSpace space() const { return ProductSpace(p_, ambient_); }

  void add_constraint(SlotMask subset, const MultilinearForm& form);
  std::size_t codimension_bound() const noexcept { return constraints_.size(); }
  bool is_strictly_multilinear() const;
  bool contains(const PointTuple& x) const;
  /// Membership of every ambient tuple, indexed as in ProductSpace.
  std::vector<bool> membership_table() const;
  std::uint64_t count() const;

  friend bool operator==(const MultilinearVariety&, const MultilinearVariety&) = default;

 private:
  std::uint32_t p_;
  std::vector<std::size_t> ambient_;
  std::vector<VarietyConstraint> constraints_;
};

ExactFraction variety_density(const MultilinearVariety& W);
/// Constraints of both; the zero set is the intersection.
MultilinearVariety intersect(const MultilinearVariety& V, const MultilinearVariety& W);

struct ConvolutionReport {
  bool positive = false;             // iterated convolution > 0 at every point of W
  bool size_precondition_ok = false; // |B| <= 2^{-2k} p^{-kr} |U|
  long double min_value = 0;         // smallest value over W
  std::uint64_t points_checked = 0;
};

/// Evaluates conv_k ... conv_1 1_{W \ B} on W. B is given by ambient indices
/// and must lie inside W. Positivity is decided exactly from supports.
ConvolutionReport directional_convolution_positive(const MultilinearVariety& W, const std::vector<std::uint64_t>& B);

struct ExternalApproximation {
  MultilinearVariety variety;  // V, on U_[k-1]
  std::vector<Point> taus;     // V = {x : tau_j . A(x) = 0 for all j}
  std::size_t s = 0;
  std::uint64_t zero_set_size = 0;  // |Z|
  std::uint64_t excess = 0;         // |V \ Z|
  std::uint64_t ambient_size = 0;
  std::uint64_t draws = 0;
};

/// Externally approximates Z = {x_[k-1] : A(x_[k-1]) = 0}, A the last-slot
/// map of alpha, by strictly multilinear V containing Z with |V \ Z| at most
/// target_excess |U_[k-1]|. Tries s = 0, 1, ... up to min(s_cap, dims[k-1]).
ExternalApproximation external_approximation(const MultilinearForm& alpha, const Rational& target_excess,
                                             std::uint64_t seed, std::optional<std::size_t> s_cap = std::nullopt,
                                             std::size_t draws_per_s = 32);

enum class FinderStatus { Found, NotFound, BudgetExhausted };
std::string to_string(FinderStatus s);

struct FinderOptions {
  bool include_defining_forms = true;  // add W's own constraints to the dictionary
  std::uint64_t combination_budget = std::uint64_t{1} << 24;
};

struct FinderResult {
  FinderStatus status = FinderStatus::NotFound;
  std::optional<MultilinearVariety> variety;
  std::size_t dictionary_size = 0;
  std::uint64_t combinations_tried = 0;
};

/// Brute-force search for V inside W cut out by at most max_codim forms from
/// a fixed dictionary: forms with {0,1} entries and at most two nonzero
/// entries on every nonempty slot subset, all nonzero linear forms on single
/// slots, and optionally W's own constraints.
FinderResult subvariety_finder(const MultilinearVariety& W, std::size_t max_codim, const FinderOptions& options = {});

struct FiberPoint {
  std::uint64_t index;     // ambient index in U_[k]
  ExactFraction slice_bias;
};

struct FiberReport {
  std::size_t k = 0, l = 0;
  ExactFraction c;
  std::uint64_t seed = 0;
  std::size_t draws = 0;
  std::size_t max_codim = 0;
  Rational eps;       // 2^{-2k} p^{-2kK} c^{2kK}, K = max_codim
  Rational c_prime;   // c^2 eps / 2
  std::uint64_t s_c_size = 0;  // |S_c|
  std::uint64_t a_size = 0, b_size = 0;
  ExactFraction a_density;
  std::vector<Point> y;  // chosen translates y_[l-1]
  FinderStatus finder_status = FinderStatus::NotFound;
  std::optional<MultilinearVariety> variety;
  std::size_t codimension = 0;
  ConvolutionReport convolution;
  std::optional<ExactFraction> measured_c_tilde;  // min slice bias over W
  double guaranteed_c_tilde_log_p = 0;                  // log_p of the guaranteed bound
  bool meets_guaranteed_bound = false;
  std::vector<FiberPoint> table;
};

struct FiberOptions {
  std::size_t max_codim = 3;
  std::size_t draws = 64;
  FinderOptions finder;
};

/// Runs the dependent-random-choice construction for alpha on
/// U_[k] x V_[l]: finds W with every point's slice form of bias >= c_tilde.
FiberReport biased_fiber_variety(const MultilinearForm& alpha, std::size_t k, const ExactFraction& c, std::uint64_t seed,
                                 const FiberOptions& options = {});

/// Slice alpha_{x_[k]}, the form on the last l slots with the first k fixed.
MultilinearForm slice_form(const MultilinearForm& alpha, const PointTuple& head);

}  // namespace hoff
