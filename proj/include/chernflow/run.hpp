#pragma once

// One flow run from a configuration: scenario -> flow -> checks -> summary.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "chernflow/analysis.hpp"
#include "chernflow/config.hpp"

namespace chernflow {

// Tolerances of the post-run checks.
inline constexpr double kBoundTolerance = 1e-8;
inline constexpr double kEnergyIncreaseTolerance = 1e-10;
inline constexpr double kComparisonTolerance = 1e-8;
inline constexpr double kStationaryTolerance = 1e-6;

struct RunOptions {
  // Leaves out wall-clock time and the kernel ISA so that identical configs
  // give byte-identical summaries.
  bool canonical = false;
  // Certificate failures (e.g. λ > λ_max) count as check failures.
  bool strict = false;
};

struct RunOutcome {
  Scenario scenario;
  FlowTrajectory trajectory;
  BoundReport bounds;
  // Largest u - u* over all recorded states; set when a certificate exists.
  std::optional<double> comparison_excess;
  nlohmann::ordered_json summary;
  bool converged = false;
  bool checks_passed = false;
  bool certificate_failed = false;
  std::string step_failure;  // non-empty when the flow aborted

  // 0 converged and all checks pass, 2 a check failed, 3 not converged.
  int exit_code() const noexcept { return !checks_passed ? 2 : (!converged ? 3 : 0); }
};

// Config and scenario errors propagate as Error.
RunOutcome execute_run(const Config& config, const RunOptions& options = {});

// trajectory.csv, u_final.txt, u_star.txt (with a certificate) and summary.json.
void write_run_outputs(const std::filesystem::path& dir, const RunOutcome& outcome);

nlohmann::ordered_json certificate_json(const SuperSolutionCertificate& cert);

// Serialises with a trailing newline.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace chernflow
