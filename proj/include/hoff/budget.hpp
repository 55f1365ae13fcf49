#pragma once

#include <cstdint>
#include <string_view>

namespace hoff {

/// Maximum number of points any single enumeration may visit. Initialised
/// from the HOFF_BUDGET environment variable when set, otherwise 2^26.
std::uint64_t enumeration_budget();
void set_enumeration_budget(std::uint64_t points);

/// Throws BudgetExceeded when `points` exceeds the current budget.
void require_within_budget(long double points, std::string_view what);

/// p^e as a long double, used for budget arithmetic that may overflow.
long double power_ld(std::uint64_t p, std::uint64_t e);

/// p^e as an exact integer; throws BudgetExceeded when it overflows 64 bits.
std::uint64_t power_u64(std::uint64_t p, std::uint64_t e);

// RAII override of the enumeration budget, restored on scope exit.
class ScopedBudget {
 public:
  explicit ScopedBudget(std::uint64_t points);
  ~ScopedBudget();
  ScopedBudget(const ScopedBudget&) = delete;
  ScopedBudget& operator=(const ScopedBudget&) = delete;

 private:
  std::uint64_t saved_;
};

}  // namespace hoff
