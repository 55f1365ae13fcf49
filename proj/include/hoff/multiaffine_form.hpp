#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hoff/multilinear_form.hpp"

namespace hoff {

using SlotMask = std::uint32_t;

/// Slots of a mask in increasing order.
std::vector<std::size_t> mask_slots(SlotMask mask);
inline SlotMask full_mask(std::size_t k) { return k >= 32 ? ~SlotMask{0} : (SlotMask{1} << k) - 1; }

// lambda(x_[k]) = sum over I of beta_I(x_I). Component I is a multilinear
// form on the slots of I in increasing order; the empty set carries a
// constant.
class MultiaffineForm {
 public:
  MultiaffineForm(std::uint32_t p, std::vector<std::size_t> dims);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t k() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::map<SlotMask, MultilinearForm>& components() const noexcept { return components_; }

  /// Adds `form` to component I; its shape must match dims restricted to I.
  void add_component(SlotMask subset, const MultilinearForm& form);
  /// Component I, or the zero form when absent.
  MultilinearForm component(SlotMask subset) const;

  Residue eval(const PointTuple& x) const;
  bool has_vanishing_multilinear_part() const;
  /// Drops components that are identically zero.
  void prune();

  friend bool operator==(const MultiaffineForm&, const MultiaffineForm&) = default;

 private:
  std::uint32_t p_;
  std::vector<std::size_t> dims_;
  std::map<SlotMask, MultilinearForm> components_;
};

/// beta(d_[k]) = sum_I (-1)^{k-|I|} lambda((x_i + d_i)_{i in I}, (x_i)_{i not in I}):
/// evaluates the multilinear part at direction d from base point x.
Residue multilinear_part_at(const MultiaffineForm& lambda, const PointTuple& x, const PointTuple& d);
/// The multilinear part as a tensor, by the alternating sum at base point 0.
MultilinearForm extract_multilinear_part(const MultiaffineForm& lambda);

/// alpha((x_i - t_i)_i) expanded into components: sum over I of
/// (-1)^{k-|I|} alpha(x_I, t_{I^c}).
MultiaffineForm translate_form(const MultilinearForm& alpha, const PointTuple& t);

}  // namespace hoff
