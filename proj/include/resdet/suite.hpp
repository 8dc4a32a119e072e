#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resdet/report.hpp"

namespace resdet {

struct SuiteOptions {
  std::uint64_t seed = 42;
  int threads = 0;  // 0: RESDET_THREADS, else hardware concurrency
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<CheckRecord> records;
};

inline constexpr int kSuiteCriteria = 9;
inline constexpr double kSuiteTimeBudget = 300;  // seconds, criterion 10

// RESDET_THREADS if set and positive, else hardware concurrency (at least 1).
int default_threads();

// Runs one of criteria 1..9. Library exceptions become failed records.
CriterionResult run_criterion(int id, const SuiteOptions& opt);

// Criteria in `ids` (default 1..9) on a worker pool; results keep the order
// of `ids` regardless of scheduling.
std::vector<CriterionResult> run_suite(const SuiteOptions& opt, std::vector<int> ids = {});

// JSON lines of every record, each tagged with its criterion id.
std::string serialize(const std::vector<CriterionResult>& results);

// Criterion 10 from two serialized runs and the wall time of both.
CriterionResult determinism_criterion(const std::string& first, const std::string& second,
                                      double seconds);

}  // namespace resdet
