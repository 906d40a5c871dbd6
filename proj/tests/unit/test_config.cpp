#include <doctest.h>

#include "chernflow/config.hpp"
#include "chernflow/error.hpp"

using namespace chernflow;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadConfig);
    return e.what();
  }
  FAIL("config accepted: " << text);
  return {};
}

}  // namespace

TEST_CASE("full config") {
  const Config c = parse_config(R"(
# comment line
[grid]
n = 1
points = [16, 32]
periods = [0.5, 2.0]

[background]
preset = "case2"      # trailing comment
seed = 11
f_expr = "cos(2*pi*x1) - 1  # not a comment"

[flow]
method = "imex-lagged"
dt_init = 0.01
dt_safety = 0.5
residual_tol = 1e-9
t_max = 50
record_every = 5

[supersolution]
case = "case3-predicate"
lambda = 0.1
a_search_points = 16
C_M = 2.5
euler_char = 0

[sweep]
param = "lambda_fraction"
values = [0.25, 0.5, 1.0,]
)");
  const ScenarioSpec& s = c.scenario;
  CHECK(s.complex_dim == 1);
  CHECK(s.points == std::vector<int>{16, 32});
  CHECK(s.periods == std::vector<double>{0.5, 2.0});
  CHECK(s.preset == "case2");
  CHECK(s.seed == 11);
  CHECK(s.f_expr == "cos(2*pi*x1) - 1  # not a comment");
  CHECK(s.stepper.method == StepMethod::ImexLagged);
  CHECK(s.stepper.dt_init == 0.01);
  CHECK(s.stepper.dt_safety == 0.5);
  CHECK(s.stepper.residual_tol == 1e-9);
  CHECK(s.stepper.t_max == 50);
  CHECK(s.stepper.record_every == 5);
  CHECK(c.supersolution.case_name == "case3");
  CHECK(*s.lambda == 0.1);
  CHECK(s.a_search_points == 16);
  CHECK(c.supersolution.c_m == 2.5);
  REQUIRE(c.sweep.has_value());
  CHECK(c.sweep->param == "lambda_fraction");
  CHECK(c.sweep->values == std::vector<double>{0.25, 0.5, 1.0});
}

TEST_CASE("defaults") {
  const Config c = parse_config("");
  CHECK(c.scenario.preset == "constant");
  CHECK(c.scenario.complex_dim == 2);
  CHECK(c.scenario.stepper.dt_safety == 0.8);
  CHECK(c.scenario.stepper.residual_tol == 1e-8);
  CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("malformed configs name the offending key") {
  CHECK(error_of("[flow]\ndt = 0.1\n").find("flow.dt") != std::string::npos);
  CHECK(error_of("[flow]\nresidual_tol = \"small\"\n").find("flow.residual_tol") != std::string::npos);
  CHECK(error_of("[flow]\nresidual_tol = 2\n").find("flow.residual_tol") != std::string::npos);
  CHECK(error_of("[flow]\nrecord_every = 1.5\n").find("flow.record_every") != std::string::npos);
  CHECK(error_of("[flow]\nmethod = \"euler\"\n").find("flow.method") != std::string::npos);
  CHECK(error_of("[grid]\nn = 1\nn = 2\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[mesh]\n").find("mesh") != std::string::npos);
  CHECK(error_of("n = 1\n").find("outside") != std::string::npos);
  CHECK(error_of("[grid]\npoints = [8, x]\n").find("grid.points") != std::string::npos);
  CHECK(error_of("[background]\npreset = \"case1\n").find("background.preset") != std::string::npos);
  CHECK(error_of("[sweep]\nparam = \"grid.points\"\nvalues = []\n").find("empty") != std::string::npos);
  CHECK(error_of("[sweep]\nparam = \"flow.method\"\nvalues = [1]\n").find("sweep.param") != std::string::npos);
  CHECK(error_of("[supersolution]\ncase = \"case4\"\n").find("supersolution.case") != std::string::npos);
}

TEST_CASE("sweep values") {
  const Config base = parse_config("[sweep]\nparam = \"grid.points\"\nvalues = [16, 32]\n");
  const Config c = apply_sweep_value(base, "grid.points", 32);
  CHECK(c.scenario.points == std::vector<int>{32});
  CHECK_FALSE(c.sweep.has_value());
  CHECK_THROWS_AS(apply_sweep_value(base, "grid.points", 32.5), Error);
  CHECK(*apply_sweep_value(base, "lambda_fraction", 0.5, 0.8).scenario.lambda == 0.4);
  CHECK_THROWS_AS(apply_sweep_value(base, "lambda_fraction", 0.5), Error);
  CHECK(apply_sweep_value(base, "background.seed", 9).scenario.seed == 9);
}
