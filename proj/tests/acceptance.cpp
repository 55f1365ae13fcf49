// One line per acceptance criterion; the exit status is the number of
// failing criteria.
#include <cstdlib>
#include <iostream>

#include "hoff/verify.hpp"

int main(int argc, char** argv) {
  hoff::VerifyOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  hoff::run_acceptance(opts, [&](const hoff::CriterionResult& r) {
    std::cout << hoff::format_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  });
  std::cout << (hoff::kCriterionCount - failed) << "/" << hoff::kCriterionCount << " criteria passed" << std::endl;
  return failed;
}
