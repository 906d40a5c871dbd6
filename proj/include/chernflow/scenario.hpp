#pragma once

// Scenario presets: problem data plus initial condition, deterministic in the seed.
//
//   constant     S0 ≡ -1, f ≡ -1, u0 ≡ 0.5
//   case1        S0 = -1 + R1/2, f = R2 - max R2 (so f <= 0, max f = 0), u0 = 0
//   rough-start  case1 data with u0 = 2 R3
//   case2        S0 as case1, f = f0 + λ with f0 built like the case1 f;
//                λ defaults to half the searched λ_max and u0 = u* - 1
//
// R_k are random band-limited fields scaled to unit sup-norm, drawn from
// independent streams of the seed. Expressions in x1..x2n override S0, f (f0
// for case2) and u0 individually.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chernflow/flow.hpp"
#include "chernflow/problem.hpp"
#include "chernflow/supersolution.hpp"

namespace chernflow {

struct ScenarioSpec {
  std::string preset = "constant";
  int complex_dim = 2;
  std::vector<int> points;       // empty: 8 per axis; one entry: same on every axis
  std::vector<double> periods;   // empty: unit periods
  std::string s0_expr;
  std::string f_expr;
  std::string u0_expr;
  std::uint64_t seed = 7;
  std::optional<double> lambda;  // case2 only
  int a_search_points = 64;
  StepperOptions stepper;
};

struct Scenario {
  std::string name;
  Background background;
  ScalarField u0;
  // Super-solution for the preset's case; absent when its construction failed.
  std::optional<SuperSolutionCertificate> certificate;
  std::string certificate_error;
  std::optional<double> lambda_max;  // case2
};

// Throws Error(BadRecipe) for unknown presets, unparsable or non-band-limited
// expressions; grid and background errors propagate.
Scenario make_scenario(const ScenarioSpec& spec);

TorusGrid make_scenario_grid(const ScenarioSpec& spec);

// Seed for stream k of a base seed (splitmix64 of the pair).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace chernflow
