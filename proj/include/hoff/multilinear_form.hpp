#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hoff/linalg.hpp"
#include "hoff/modp.hpp"
#include "hoff/rng.hpp"

namespace hoff {

using Index = std::vector<std::size_t>;

// A k-linear form on F_p^{dims[0]} x ... x F_p^{dims[k-1]} stored as a dense
// row-major coefficient tensor (last slot contiguous). k = 0 is a constant.
class MultilinearForm {
 public:
  MultilinearForm(std::uint32_t p, std::vector<std::size_t> dims);
  MultilinearForm(std::uint32_t p, std::vector<std::size_t> dims, std::vector<Residue> tensor);

  static MultilinearForm random(std::uint32_t p, std::vector<std::size_t> dims, Rng& rng);
  /// sum_i x_1[i] y_1[i] ... : the k-fold dot product on F_p^dim.
  static MultilinearForm dot_product(std::uint32_t p, std::size_t k, std::size_t dim);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t k() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t slot) const { return dims_.at(slot); }
  const std::vector<Residue>& tensor() const noexcept { return tensor_; }
  std::size_t entry_count() const noexcept { return tensor_.size(); }

  std::size_t offset(const Index& idx) const;
  Index unflatten(std::size_t offset) const;
  Residue at(const Index& idx) const { return tensor_[offset(idx)]; }
  void set(const Index& idx, Residue c) { tensor_[offset(idx)] = c % p_; }
  void add_to(const Index& idx, Residue c);

  bool is_zero() const;
  /// Nonzero entries with their indices, in storage order.
  std::vector<std::pair<Index, Residue>> entries() const;

  Residue eval(const PointTuple& x) const;
  /// Fixes slot `slot` to v: the (k-1)-linear form x -> alpha(..., v, ...).
  MultilinearForm contract(std::size_t slot, const Point& v) const;
  /// Contracts every slot i with fixed[i] set; the rest keep their order.
  MultilinearForm contract_many(const std::vector<const Point*>& fixed) const;
  /// The vector A(x_1..x_{k-1}) in F_p^{dims[k-1]} with alpha(x) = A(x_{[k-1]}) . x_k.
  Point last_slot_map(const PointTuple& head) const;

  friend bool operator==(const MultilinearForm&, const MultilinearForm&) = default;

 private:
  std::uint32_t p_;
  std::vector<std::size_t> dims_;
  std::vector<Residue> tensor_;
};

/// Visits every index of a tensor with the given dims, last slot fastest.
void for_each_index(const std::vector<std::size_t>& dims, const std::function<void(const Index&)>& visit);

}  // namespace hoff
