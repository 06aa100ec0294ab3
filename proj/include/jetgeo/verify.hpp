#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jetgeo {

struct CheckResult {
  std::string id;
  std::string module;
  enum class Status { pass, fail, skipped };
  Status status = Status::skipped;
  double measured_error = 0.0;  // pass iff measured_error <= tolerance
  double tolerance = 0.0;
  double runtime_seconds = 0.0;
  std::string detail;
};

const char* status_name(CheckResult::Status s);

struct SuiteConfig {
  /// Restrict to checks belonging to these modules; empty = all.
  std::vector<std::string> modules;
  /// Replace every check's tolerance (failures become results, not errors).
  std::optional<double> tolerance_override;
  /// Quadrature tolerance used inside the checks.
  double quad_tol = 1e-10;
};

/// Runs the full invariant suite (checks execute concurrently; the report is
/// ordered by check id and deterministic for a fixed config, runtimes aside).
std::vector<CheckResult> run_suite(const SuiteConfig& config = {});

bool all_passed(const std::vector<CheckResult>& results);

/// JSON report: {"schema":"jetgeo/1","checks":[...],"all_pass":...}.
void write_report_json(std::ostream& os, const std::vector<CheckResult>& results);

/// Names of the modules known to the suite (for config validation).
std::vector<std::string> known_modules();

}  // namespace jetgeo
