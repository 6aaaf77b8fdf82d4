#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace tubehs {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;   ///< worst defect observed
  double threshold = 0.0;  ///< pass iff measured <= threshold
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr int kCriterionCount = 9;
inline constexpr double kTotalTimeLimit = 180.0;

/// Runs one acceptance criterion (1..9). Never throws: numerical errors are
/// reported as a failed criterion with the error text in `detail`.
CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed);
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kDefaultSeed);

std::string format_result(const CriterionResult& r);
/// Timings are reduced to limit flags so that reports are reproducible.
nlohmann::json results_to_json(const std::vector<CriterionResult>& results, double total_seconds);

}  // namespace tubehs
