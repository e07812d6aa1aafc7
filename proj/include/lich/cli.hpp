#pragma once

// Batch front-end: a run configuration drives one of the curvature,
// quadratic-form, spectrum, check or verify-identities pipelines and produces
// a JSON report plus a CSV summary table.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lich/operators.hpp"
#include "lich/tensor.hpp"

namespace lich::cli {

enum class Task { curvature, quadratic_form, spectrum, check, verify_identities };

std::string_view to_string(Task task) noexcept;
Task parse_task(std::string_view name);  // unknown → config error

// Exit statuses of `lich`.
enum Status : int {
  kOk = 0,
  kIdentityFailure = 1,
  kConfigError = 2,
  kCapabilityError = 3,
  kSolverError = 4,
};

struct RunConfig {
  std::string space;
  Task task = Task::curvature;
  int p = 1;
  std::optional<SymmetryClass> cls;  // default depends on the operator kind
  double c = 1.0;
  OperatorKind kind = OperatorKind::lichnerowicz;
  std::vector<int> resolution;  // empty → per-space default
  int k = 6;
  std::optional<double> kernel_tol;
  std::uint64_t seed = 0;
  std::string out = "lich_report.json";
};

// "32", "32x64", "32,64" → {32}, {32, 64}; malformed → config error.
std::vector<int> parse_resolution(std::string_view text);

// Task-specific requirements and positivity of tolerances; violation → config error.
void validate(const RunConfig& config);

struct ParseOutcome {
  std::optional<RunConfig> config;  // empty when the run should stop
  int status = kOk;                 // exit status when config is empty
};

// Parses flags (and an optional --config file with identical keys). Unknown
// flags and keys are errors. Messages go to stderr; --help text to stdout.
ParseOutcome parse_command_line(int argc, const char* const* argv);

struct RunResult {
  int status = kOk;
  nlohmann::json report;
};

// Executes the pipeline without touching the filesystem. Library errors are
// caught and mapped onto the exit status; the report then carries an "error"
// section next to whatever was computed before the failure.
RunResult execute(const RunConfig& config);

// execute() followed by writing the report and the CSV summary.
int run(const RunConfig& config);

// Entry point of the `lich` executable.
int main(int argc, const char* const* argv);

// ---- report files ----

// UTC time in ISO 8601; the only nondeterministic field of a report.
std::string utc_timestamp();

// Sibling path of the report with the extension replaced by ".csv".
std::string csv_path(const std::string& report_path);

// One row per numeric claim: section,name,value,tolerance,status,reference.
std::string summary_csv(const nlohmann::json& report);

// Human-readable digest printed to stdout.
std::string summary_text(const nlohmann::json& report);

void write_report(const nlohmann::json& report, const std::string& path);

}  // namespace lich::cli
