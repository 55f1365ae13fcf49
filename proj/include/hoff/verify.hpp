#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hoff {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  std::uint64_t seed = 20241014;
};

inline constexpr int kCriterionCount = 10;

/// Runs one acceptance criterion (1..10). Exceptions are caught and reported
/// as failures.
CriterionResult run_criterion(int id, const VerifyOptions& options = {});

/// Runs every criterion in order, reporting each as it finishes.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  form-inequality-suite  (1.2 s)  detail"
std::string format_line(const CriterionResult& r);

}  // namespace hoff
