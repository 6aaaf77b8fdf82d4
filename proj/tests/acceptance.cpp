#include <chrono>
#include <cstdlib>
#include <iostream>

#include "tubehs/verify.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = tubehs::kDefaultSeed;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (int id = 1; id <= tubehs::kCriterionCount; ++id) {
    const tubehs::CriterionResult r = tubehs::run_criterion(id, seed);
    std::cout << tubehs::format_result(r) << std::endl;
    ok = ok && r.passed;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = total <= tubehs::kTotalTimeLimit;
  std::cout << (in_time ? "PASS" : "FAIL") << " total runtime " << total << "s (limit " << tubehs::kTotalTimeLimit
            << "s)" << std::endl;
  return ok && in_time ? 0 : 1;
}
