#include "chernflow/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "chernflow/acceptance.hpp"
#include "chernflow/error.hpp"
#include "chernflow/run.hpp"
#include "chernflow/snapshot.hpp"

namespace chernflow {

namespace {

std::filesystem::path output_dir(const CommandOptions& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  std::filesystem::path p = opts.config;
  return p.replace_filename(p.stem().string() + ".out");
}

bool is_config_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::BadConfig:
    case ErrorCode::BadRecipe:
    case ErrorCode::BadResolution:
    case ErrorCode::VolumeNotOne:
    case ErrorCode::NonNegativeDegree:
    case ErrorCode::WrongDimension:
      return true;
    default:
      return false;
  }
}

}  // namespace

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Config cfg = load_config(opts.config);
    const RunOutcome r = execute_run(cfg, RunOptions{.canonical = opts.canonical, .strict = opts.strict});
    const auto dir = output_dir(opts);
    write_run_outputs(dir, r);
    const auto& s = r.summary;
    out << "scenario " << s["scenario"].get<std::string>() << ": " << s["termination"].get<std::string>()
        << " after " << r.trajectory.steps << " steps, t = " << r.trajectory.final_state.t()
        << ", residual " << s["final_residual_sup"].get<double>() << "\n";
    out << "outputs in " << dir.string() << "\n";
    if (!r.step_failure.empty()) err << "step failure: " << r.step_failure << "\n";
    if (r.certificate_failed && !r.scenario.certificate_error.empty()) {
      err << "certificate: " << r.scenario.certificate_error << "\n";
    }
    if (!r.checks_passed) err << "checks failed: " << s["checks"].dump() << "\n";
    else if (!r.converged) err << "flow did not converge before t_max\n";
    return r.exit_code();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_config_error(e) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(std::string_view level, std::ostream& out, std::ostream& err) {
  const auto lv = parse_verify_level(level);
  if (!lv) {
    err << "error: unknown verify level '" << level << "' (expected quick or full)\n";
    return 1;
  }
  bool all = true;
  run_acceptance(criteria_for(*lv), [&](const CriterionResult& r) {
    print_result_line(out, r);
    out.flush();
    all = all && r.passed;
  });
  out << (all ? "all criteria passed\n" : "some criteria FAILED\n");
  return all ? 0 : 2;
}

int cmd_supersolution(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Config cfg = load_config(opts.config);
    std::string which = cfg.supersolution.case_name;
    if (which.empty()) which = cfg.scenario.preset == "case2" ? "case2" : "case1";
    const Scenario sc = make_scenario(cfg.scenario);
    const auto dir = output_dir(opts);
    std::filesystem::create_directories(dir);

    nlohmann::ordered_json j;
    j["scenario"] = sc.name;
    j["grid"] = sc.background.grid().describe();
    if (which == "case3") {
      const Case3Result r = case3_predicate(sc.background, cfg.supersolution.euler_char, cfg.supersolution.c_m);
      j["case"] = "case3";
      j["euler_char"] = cfg.supersolution.euler_char;
      j["C_M"] = cfg.supersolution.c_m;
      j["theta"] = r.theta;
      j["lhs"] = r.lhs;
      j["rhs"] = r.rhs;
      j["holds"] = r.holds;
      std::ofstream(dir / "certificate.json") << dump_json(j);
      out << "theta " << r.theta << " lhs " << r.lhs << " rhs " << r.rhs << " holds " << std::boolalpha << r.holds
          << "\n";
      return 0;
    }
    const SuperSolutionCertificate cert =
        which == "case1" ? construct_case1(sc.background) : construct_case2(sc.background, cfg.scenario.a_search_points);
    const nlohmann::ordered_json cj = certificate_json(cert);
    for (auto& [k, v] : cj.items()) j[k] = v;
    std::ofstream(dir / "certificate.json") << dump_json(j);
    save_snapshot(dir / "u_star.txt", cert.u_star);
    save_snapshot(dir / "slack.txt", cert.slack);
    out << "a " << cert.a << " b " << cert.b;
    if (cert.lambda_max) out << " lambda " << *cert.lambda << " lambda_max " << *cert.lambda_max;
    out << " slack_min " << cert.slack_min << "\n";
    if (!cert.valid()) {
      err << "certificate invalid: slack_min " << cert.slack_min << "\n";
      return 2;
    }
    return 0;
  } catch (const LambdaTooLargeError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_config_error(e) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

namespace {

struct SweepRow {
  double value = 0.0;
  int exit_code = 1;
  std::string termination;
  double residual = 0.0;
  bool asserted = true;  // false above λ_max, where nothing is claimed
  std::string note;
};

}  // namespace

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  Config base;
  std::optional<double> lambda_max;
  try {
    base = load_config(opts.config);
    if (!base.sweep) {
      err << "error: Code: BadConfig: [sweep] section with param and values is required\n";
      return 1;
    }
    if (base.scenario.preset == "case2") lambda_max = make_scenario(base.scenario).lambda_max;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_config_error(e) ? 1 : 2;
  }

  const SweepConfig sweep = *base.sweep;
  const auto dir = output_dir(opts);
  std::filesystem::create_directories(dir);
  std::vector<SweepRow> rows(sweep.values.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = sweep.values[i];
      try {
        const Config cfg = apply_sweep_value(base, sweep.param, row.value, lambda_max);
        const RunOutcome r = execute_run(cfg, RunOptions{.canonical = opts.canonical, .strict = opts.strict});
        write_run_outputs(dir / ("run_" + std::to_string(i)), r);
        row.exit_code = r.exit_code();
        row.termination = r.summary["termination"].get<std::string>();
        row.residual = r.summary["final_residual_sup"].get<double>();
        const auto& sc = r.scenario;
        if (sc.lambda_max && sc.certificate_error.find("LambdaTooLarge") != std::string::npos) {
          row.asserted = false;
          row.note = "lambda above lambda_max";
        }
      } catch (const std::exception& e) {
        row.exit_code = 1;
        row.note = e.what();
        std::lock_guard lock(log_mutex);
        err << "run " << i << ": " << e.what() << "\n";
      }
    }
  };
  unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(rows.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ofstream index(dir / "index.csv");
  index << "index,param,value,exit_code,termination,final_residual_sup,asserted,note,summary\n";
  bool failed = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    std::ostringstream line;
    line.precision(17);
    line << i << ',' << sweep.param << ',' << r.value << ',' << r.exit_code << ',' << r.termination << ','
         << r.residual << ',' << (r.asserted ? "yes" : "no") << ',' << note << ','
         << ("run_" + std::to_string(i) + "/summary.json") << '\n';
    index << line.str();
    if (r.asserted && r.exit_code != 0) failed = true;
    out << line.str();
  }
  out << "index written to " << (dir / "index.csv").string() << "\n";
  return failed ? 2 : 0;
}

}  // namespace chernflow
