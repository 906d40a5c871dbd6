#include "chernflow/run.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "chernflow/error.hpp"
#include "chernflow/kernels.hpp"
#include "chernflow/snapshot.hpp"

namespace chernflow {

using nlohmann::ordered_json;

namespace {

// JSON has no infinities; they only appear for empty reductions.
ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

template <class T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? finite_or_null(*v) : ordered_json(nullptr);
}

}  // namespace

ordered_json certificate_json(const SuperSolutionCertificate& cert) {
  ordered_json j;
  j["case"] = std::string(to_string(cert.case_tag));
  j["a"] = cert.a;
  j["b"] = cert.b;
  j["lambda"] = optional_json(cert.lambda);
  j["lambda_max"] = optional_json(cert.lambda_max);
  j["slack_min"] = cert.slack_min;
  j["valid"] = cert.valid();
  j["c0_minus"] = cert.c0_minus;
  j["c0_plus"] = cert.c0_plus;
  j["c1_minus"] = optional_json(cert.c1_minus);
  j["c2_minus"] = optional_json(cert.c2_minus);
  j["c2_plus"] = optional_json(cert.c2_plus);
  return j;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

RunOutcome execute_run(const Config& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Scenario sc = make_scenario(config.scenario);
  const Background& bg = sc.background;
  const StepperOptions& opts = config.scenario.stepper;

  std::optional<double> excess;
  RecordObserver observer;
  if (sc.certificate) {
    observer = [&](const FlowState& s, const FlowRecord&) {
      const double e = (s.u() - sc.certificate->u_star).max();
      excess = excess ? std::max(*excess, e) : e;
    };
  }

  std::string step_failure;
  std::optional<FlowTrajectory> traj;
  try {
    traj.emplace(run_flow(sc.u0, bg, opts, observer));
  } catch (const StepFailureError& e) {
    step_failure = e.what();
    traj.emplace(e.partial());
  }
  const FlowState& fin = traj->final_state;
  BoundReport bounds = check_bounds(*traj, bg, sc.u0);

  const bool converged = traj->termination == Termination::Converged;
  const double residual_sup = residual(fin.u(), bg).sup_norm();
  const double stationary = stationary_identity_check(fin.u(), bg);
  const double energy_increase = worst_energy_increase(*traj);
  double energy_min = std::numeric_limits<double>::infinity();
  for (const auto& r : traj->records) energy_min = std::min(energy_min, r.energy);
  std::optional<double> mismatch;
  if (traj->records.size() >= 3) mismatch = dissipation_identity_check(*traj);

  // The comparison principle applies from initial data below the super-solution.
  const bool certificate_ok = sc.certificate && sc.certificate->valid();
  const bool comparison_applies =
      certificate_ok && (sc.u0 - sc.certificate->u_star).max() <= kComparisonTolerance;

  ordered_json checks;
  checks["bounds"] = bounds.holds(kBoundTolerance);
  checks["energy_monotone"] = energy_increase <= kEnergyIncreaseTolerance;
  checks["stationary_identity"] = converged ? ordered_json(stationary <= kStationaryTolerance) : ordered_json(nullptr);
  checks["comparison"] = comparison_applies ? ordered_json(*excess <= kComparisonTolerance) : ordered_json(nullptr);
  checks["certificate"] = sc.certificate ? ordered_json(certificate_ok) : ordered_json(false);

  bool passed = true;
  for (const char* k : {"bounds", "energy_monotone", "stationary_identity", "comparison"}) {
    if (checks[k].is_boolean() && !checks[k].get<bool>()) passed = false;
  }
  const bool certificate_failed = !certificate_ok;
  if (options.strict && certificate_failed) passed = false;

  ordered_json s;
  s["scenario"] = sc.name;
  s["seed"] = config.scenario.seed;
  s["grid"] = bg.grid().describe();
  s["method"] = std::string(to_string(opts.method));
  s["degree"] = bg.degree();
  s["f_mean"] = bg.f_mean();
  s["f_sup_norm"] = bg.f_sup_norm();
  s["lambda_max"] = optional_json(sc.lambda_max);
  s["termination"] = std::string(to_string(traj->termination));
  s["step_failure"] = step_failure.empty() ? ordered_json(nullptr) : ordered_json(step_failure);
  s["steps"] = traj->steps;
  s["records"] = traj->records.size();
  s["final_time"] = fin.t();
  s["final_residual_sup"] = residual_sup;
  s["final_dudt_sup"] = fin.dudt_sup();
  s["final_energy"] = traj->records.back().energy;
  s["energy_min"] = energy_min;
  s["worst_energy_increase"] = energy_increase;
  s["dissipation_mismatch"] = optional_json(mismatch);
  s["bounds"] = {{"lower_bound", bounds.lower_bound},
                 {"growth_constant", bounds.growth},
                 {"worst_lower_slack", finite_or_null(bounds.worst_lower_slack)},
                 {"worst_upper_slack", finite_or_null(bounds.worst_upper_slack)}};
  s["stationary_identity"] = stationary;
  s["comparison_excess"] = optional_json(excess);
  s["certificate"] = sc.certificate ? certificate_json(*sc.certificate) : ordered_json(nullptr);
  s["certificate_error"] = sc.certificate_error.empty() ? ordered_json(nullptr) : ordered_json(sc.certificate_error);
  s["checks"] = checks;
  s["passed"] = passed;
  if (!options.canonical) {
    s["kernel_isa"] = std::string(kernels::isa_name(kernels::active_isa()));
    s["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  return RunOutcome{std::move(sc), std::move(*traj), std::move(bounds), excess,       std::move(s),
                    converged,     passed,            certificate_failed, step_failure};
}

void write_run_outputs(const std::filesystem::path& dir, const RunOutcome& outcome) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "trajectory.csv");
    write_trajectory_csv(csv, outcome.trajectory);
    if (!csv) throw std::runtime_error("cannot write " + (dir / "trajectory.csv").string());
  }
  save_snapshot(dir / "u_final.txt", outcome.trajectory.final_state.u());
  if (outcome.scenario.certificate) save_snapshot(dir / "u_star.txt", outcome.scenario.certificate->u_star);
  std::ofstream js(dir / "summary.json");
  js << dump_json(outcome.summary);
  if (!js) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
}

}  // namespace chernflow
