#pragma once

// Run configuration: a flat key = value file with sections.
//
//   [grid]           n, points, periods
//   [background]     preset, s0_expr, f_expr, u0_expr, seed
//   [flow]           method, dt_init, dt_safety, residual_tol, t_max, record_every
//   [supersolution]  case, lambda, a_search_points, C_M, euler_char
//   [sweep]          param, values
//
// Values are numbers, "double-quoted strings" or [number, ...] arrays; '#'
// starts a comment. Unknown sections or keys, duplicates and type mismatches
// are rejected with Error(BadConfig) naming the key.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chernflow/scenario.hpp"

namespace chernflow {

struct SupersolutionConfig {
  std::string case_name;  // "case1", "case2", "case3" (alias "case3-predicate"); empty if unset
  double c_m = 1.0;
  int euler_char = 0;
};

struct SweepConfig {
  // grid.points, background.seed, supersolution.lambda, lambda_fraction
  // (λ = value · λ_max), flow.dt_init, flow.residual_tol or flow.t_max.
  std::string param;
  std::vector<double> values;
};

struct Config {
  ScenarioSpec scenario;
  SupersolutionConfig supersolution;
  std::optional<SweepConfig> sweep;
};

Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

// Copy of base with the sweep parameter set to value. lambda_fraction needs
// lambda_max (computed by the caller from the unswept case2 scenario).
// Throws Error(BadConfig) for an unknown parameter or a non-integral value
// where an integer is required.
Config apply_sweep_value(const Config& base, const std::string& param, double value,
                         std::optional<double> lambda_max = std::nullopt);

bool is_known_sweep_param(std::string_view param) noexcept;

}  // namespace chernflow
