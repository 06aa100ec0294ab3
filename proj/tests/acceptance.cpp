// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The same checks back `jetgeo verify`.

#include <chrono>
#include <cstdio>

#include "jetgeo/io.hpp"
#include "jetgeo/verify.hpp"

int main() {
  using namespace jetgeo;
  const auto start = std::chrono::steady_clock::now();
  const auto results = run_suite({});
  for (const auto& r : results) {
    std::printf("[%s] %-26s err=%-12.5g tol=%-12.5g %6.2fs\n",
                r.status == CheckResult::Status::pass ? "PASS" : "FAIL",
                r.id.c_str(), r.measured_error, r.tolerance, r.runtime_seconds);
    if (!r.detail.empty()) std::printf("       %s\n", r.detail.c_str());
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu checks, wall time %.1fs\n", results.size(), wall);
  return all_passed(results) ? 0 : 1;
}
