#include <chrono>
#include <cstdio>

#include "resdet/suite.hpp"

using namespace resdet;

// One PASS/FAIL line per criterion; exit status 1 if any criterion fails.
int main(int argc, char** argv) {
  SuiteOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  auto t0 = std::chrono::steady_clock::now();
  auto first = run_suite(opt);
  auto second = run_suite(opt);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  first.push_back(determinism_criterion(serialize(first), serialize(second), secs));

  bool all = true;
  for (const auto& c : first) {
    int failed = 0;
    double worst = 0;
    for (const auto& r : c.records) {
      if (!r.pass) ++failed;
      if (r.tolerance > 0) worst = std::max(worst, r.residual / r.tolerance);
    }
    std::printf("criterion %2d %-24s %s  (%zu checks, %d failed, max residual/tol %.3g)\n", c.id,
                c.name.c_str(), c.pass ? "PASS" : "FAIL", c.records.size(), failed, worst);
    for (const auto& r : c.records)
      if (!r.pass) std::printf("    failed: %s\n", to_json(r).dump().c_str());
    all = all && c.pass;
  }
  std::printf("two suite runs: %.2f s\n", secs);
  return all ? 0 : 1;
}
