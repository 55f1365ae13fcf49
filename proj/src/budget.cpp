#include "hoff/budget.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "hoff/errors.hpp"

namespace hoff {
namespace {

constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 26;

std::uint64_t initial_budget() {
  if (const char* env = std::getenv("HOFF_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

std::atomic<std::uint64_t>& budget_slot() {
  static std::atomic<std::uint64_t> slot{initial_budget()};
  return slot;
}

}  // namespace

std::uint64_t enumeration_budget() { return budget_slot().load(); }

void set_enumeration_budget(std::uint64_t points) {
  if (points == 0) throw InvalidArgument("enumeration budget must be positive");
  budget_slot().store(points);
}

void require_within_budget(long double points, std::string_view what) {
  const auto budget = enumeration_budget();
  if (points > static_cast<long double>(budget)) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(static_cast<double>(points)) +
                         " points exceed the enumeration budget of " + std::to_string(budget));
  }
}

long double power_ld(std::uint64_t p, std::uint64_t e) {
  return std::pow(static_cast<long double>(p), static_cast<long double>(e));
}

std::uint64_t power_u64(std::uint64_t p, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > UINT64_MAX / p) throw BudgetExceeded("p^e overflows 64 bits");
    r *= p;
  }
  return r;
}

ScopedBudget::ScopedBudget(std::uint64_t points) : saved_(enumeration_budget()) {
  set_enumeration_budget(points);
}

ScopedBudget::~ScopedBudget() { budget_slot().store(saved_); }

}  // namespace hoff
