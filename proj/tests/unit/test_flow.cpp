#include <doctest.h>

#include <sstream>

#include "chernflow/analysis.hpp"
#include "chernflow/error.hpp"
#include "chernflow/scenario.hpp"
#include "helpers.hpp"

using namespace chernflow;
using testing::sup_diff;

namespace {

Scenario preset(const char* name) {
  ScenarioSpec s;
  s.preset = name;
  return make_scenario(s);
}

// u' = e^{-u} - 1 from u(0) = u0: the constant scenario at n = 2.
double constant_exact(double u0, double t) { return std::log1p((std::exp(u0) - 1.0) * std::exp(-t)); }

}  // namespace

TEST_CASE("right-hand side") {
  const Scenario c = preset("constant");
  const FlowState st(c.u0, 0.0, c.background);
  const double expect = std::exp(-0.5) * (1 - std::exp(0.5));
  CHECK(st.dudt().max() == doctest::Approx(expect).epsilon(1e-15));
  CHECK(st.dudt().min() == doctest::Approx(expect).epsilon(1e-15));
  CHECK(sup_diff(st.w(), c.u0.map([](double x) { return std::exp(x); })) <= 1e-14);

  const Scenario r = preset("rough-start");
  const FlowState rs(r.u0, 0.0, r.background);
  CHECK(sup_diff(rhs_u(rs, r.background), rhs_u_curvature_form(r.u0, r.background)) <= 1e-12 * (1 + rs.dudt_sup()));
  CHECK(sup_diff(rs.rhs(), -1.0 * residual(r.u0, r.background)) <= 1e-12 * (1 + rs.rhs().sup_norm()));

  const Background& bg = c.background;
  const FlowState stat(ScalarField::constant(bg.grid(), 0.0), 0.0, bg);
  CHECK(stat.dudt_sup() == 0.0);
}

TEST_CASE("stationary states are preserved by both steppers") {
  const Scenario c = preset("constant");
  const FlowState stat(ScalarField::constant(c.background.grid(), 0.0), 0.0, c.background);
  for (double dt : {1e-3, 0.1, 1.0}) {
    CHECK(sup_diff(step_explicit(stat, c.background, dt).u(), stat.u()) <= 1e-13);
    CHECK(sup_diff(step_imex(stat, c.background, dt).u(), stat.u()) <= 1e-12);
  }
}

TEST_CASE("explicit step on the constant scenario matches the scalar ODE") {
  const Scenario c = preset("constant");
  FlowState st(c.u0, 0.0, c.background);
  // Local error of one RK4 step is O(dt⁵).
  for (double dt : {0.01, 0.02}) {
    const FlowState next = step_explicit(st, c.background, dt);
    const double err = (next.u() - constant_exact(0.5, dt)).sup_norm();
    CHECK(err <= 1e-3 * std::pow(dt, 5));
  }
  double t = 0;
  for (int i = 0; i < 100; ++i) {
    st = step_explicit(st, c.background, 0.01);
    t += 0.01;
  }
  CHECK((st.u() - constant_exact(0.5, t)).sup_norm() <= 1e-9);
}

TEST_CASE("explicit step far above the stability limit fails") {
  const Scenario r = preset("rough-start");
  FlowState st(r.u0, 0.0, r.background);
  const double dt = 20 * explicit_stable_dt(st, r.background, 1.0);
  bool threw = false;
  try {
    for (int i = 0; i < 500; ++i) st = step_explicit(st, r.background, dt);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::StepUnstable;
  }
  CHECK(threw);
}

TEST_CASE("imex is stable at ten times the explicit limit") {
  const Scenario r = preset("rough-start");
  FlowState st(r.u0, 0.0, r.background);
  const double dt = 10 * explicit_stable_dt(st, r.background, 0.8);
  const double start = st.dudt_sup();
  for (int i = 0; i < 2000; ++i) st = step_imex(st, r.background, dt);
  CHECK(st.dudt_sup() < 1e-3 * start);
}

TEST_CASE("run_flow on the constant preset converges to the analytic fixed point") {
  const Scenario c = preset("constant");
  StepperOptions o;
  o.method = StepMethod::ImexLagged;
  o.dt_init = 0.05;
  o.residual_tol = 1e-9;
  const FlowTrajectory tr = run_flow(c.u0, c.background, o);
  CHECK(tr.termination == Termination::Converged);
  CHECK(tr.final_state.u().sup_norm() <= 1e-8);
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    CHECK(tr.records[k].t > tr.records[k - 1].t);
    // Monotone trap: above the fixed point u decreases at every node.
    CHECK(tr.records[k].u_max <= tr.records[k - 1].u_max);
  }
}

TEST_CASE("below the fixed point the constant flow increases") {
  const Scenario c = preset("constant");
  StepperOptions o;
  o.t_max = 2.0;
  o.record_every = 20;
  const FlowTrajectory tr = run_flow(ScalarField::constant(c.background.grid(), -0.5), c.background, o);
  for (std::size_t k = 1; k < tr.records.size(); ++k) CHECK(tr.records[k].u_min >= tr.records[k - 1].u_min);
  CHECK(tr.final_state.u().max() <= 0.0);
  CHECK((tr.final_state.u() - constant_exact(-0.5, 2.0)).sup_norm() <= 1e-10);
}

TEST_CASE("zero horizon") {
  const Scenario c = preset("constant");
  StepperOptions o;
  o.t_max = 0.0;
  const FlowTrajectory tr = run_flow(c.u0, c.background, o);
  CHECK(tr.records.size() == 1);
  CHECK(tr.termination == Termination::TMaxReached);
  CHECK(tr.steps == 0);
}

TEST_CASE("records, clipping and CSV output") {
  const Scenario c = preset("case1");
  StepperOptions o;
  o.dt_init = 5e-4;
  o.t_max = 0.00525;
  o.record_every = 4;
  const FlowTrajectory tr = run_flow(c.u0, c.background, o);
  CHECK(tr.final_state.t() == 0.00525);
  CHECK(tr.records.back().t == 0.00525);
  CHECK(tr.steps == 11);
  CHECK(tr.records.size() == 4);  // t = 0, 4, 8 steps and the final state
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,E,u_min,u_max,dudt_sup,residual_sup,dissipation_mismatch,dt\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("volume growth identity") {
  // d/dt ∫e^{2u/n} = ∫(Δu - S0 + f e^{2u/n}) = -Γ + ∫f e^{2u/n}.
  const Scenario r = preset("rough-start");
  const Background& bg = r.background;
  const FlowState st(r.u0, 0.0, bg);
  const double lhs = bg.conformal_rate() * integrate(st.w() * st.dudt());
  const double rhs = -bg.degree() + integrate(bg.f() * st.w());
  CHECK(std::fabs(lhs - rhs) <= 1e-8 * std::fabs(rhs));

  // The same identity seen through small explicit steps.
  const double h = 1e-5;
  const FlowState a = step_explicit(st, bg, h);
  const FlowState b = step_explicit(a, bg, h);
  const double fd = (-3 * integrate(st.w()) + 4 * integrate(a.w()) - integrate(b.w())) / (2 * h);
  CHECK(std::fabs(fd - rhs) <= 1e-4 * std::fabs(rhs));
}

TEST_CASE("step failure carries the partial trajectory") {
  ScenarioSpec s;
  s.u0_expr = "-20";
  const Scenario c = make_scenario(s);
  StepperOptions o;
  o.method = StepMethod::ImexLagged;
  o.dt_init = 10.0;
  try {
    run_flow(c.u0, c.background, o);
    FAIL("expected a step failure");
  } catch (const StepFailureError& e) {
    CHECK(e.code() == ErrorCode::StepFailure);
    CHECK(e.partial().termination == Termination::StepFailure);
    CHECK(e.partial().records.size() >= 1);
  }
}

TEST_CASE("stepper options validation") {
  StepperOptions o;
  CHECK_NOTHROW(o.validate());
  o.residual_tol = 1.0;
  CHECK_THROWS_AS(o.validate(), Error);
  o = {};
  o.dt_init = 0;
  CHECK_THROWS_AS(o.validate(), Error);
  o = {};
  o.record_every = 0;
  CHECK_THROWS_AS(o.validate(), Error);
  CHECK(parse_step_method("imex-lagged") == StepMethod::ImexLagged);
  CHECK_THROWS_AS(parse_step_method("euler"), Error);
}
