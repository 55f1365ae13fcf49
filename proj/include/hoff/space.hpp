#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "hoff/budget.hpp"
#include "hoff/modp.hpp"

namespace hoff {

// The product F_p^{dims[0]} x ... x F_p^{dims[k-1]}. Tuples are indexed
// mixed-radix over the concatenated coordinates, first coordinate of the
// first slot varying fastest.
class ProductSpace {
 public:
  ProductSpace(std::uint32_t p, std::vector<std::size_t> dims)
      : p_(p), dims_(std::move(dims)), total_dim_(std::accumulate(dims_.begin(), dims_.end(), std::size_t{0})) {}

  std::uint32_t p() const noexcept { return p_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t total_dim() const noexcept { return total_dim_; }
  long double size_ld() const { return power_ld(p_, total_dim_); }
  /// Number of tuples; throws BudgetExceeded when it is not enumerable.
  std::uint64_t size(std::string_view what = "product space") const {
    require_within_budget(size_ld(), what);
    return power_u64(p_, total_dim_);
  }

  std::uint64_t encode(const PointTuple& x) const {
    std::uint64_t index = 0, radix = 1;
    for (std::size_t s = 0; s < dims_.size(); ++s)
      for (std::size_t i = 0; i < dims_[s]; ++i) {
        index += radix * x[s][i];
        radix *= p_;
      }
    return index;
  }

  PointTuple decode(std::uint64_t index) const {
    PointTuple x(dims_.size());
    for (std::size_t s = 0; s < dims_.size(); ++s) {
      x[s].resize(dims_[s]);
      for (auto& c : x[s]) {
        c = static_cast<Residue>(index % p_);
        index /= p_;
      }
    }
    return x;
  }

  /// Visits every tuple in index order. The callback receives the index too.
  void for_each(const std::function<void(std::uint64_t, const PointTuple&)>& visit,
                std::string_view what = "product space") const {
    const std::uint64_t n = size(what);
    PointTuple x(dims_.size());
    for (std::size_t s = 0; s < dims_.size(); ++s) x[s].assign(dims_[s], 0);
    for (std::uint64_t index = 0; index < n; ++index) {
      visit(index, x);
      // odometer step
      for (std::size_t s = 0; s < dims_.size(); ++s) {
        bool carry = true;
        for (std::size_t i = 0; i < dims_[s] && carry; ++i) {
          if (++x[s][i] == p_) x[s][i] = 0;
          else carry = false;
        }
        if (!carry) break;
      }
    }
  }

 private:
  std::uint32_t p_;
  std::vector<std::size_t> dims_;
  std::size_t total_dim_;
};

inline Point add_points(const Point& a, const Point& b, std::uint32_t p) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % p;
  return out;
}

inline Point sub_points(const Point& a, const Point& b, std::uint32_t p) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + p - b[i]) % p;
  return out;
}

inline Residue dot(const Point& a, const Point& b, std::uint32_t p) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::uint64_t{a[i]} * b[i];
  return static_cast<Residue>(s % p);
}

inline Point unit_vector(std::size_t dim, std::size_t i) {
  Point e(dim, 0);
  e[i] = 1;
  return e;
}

}  // namespace hoff
