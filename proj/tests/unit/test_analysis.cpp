#include <doctest.h>

#include "chernflow/analysis.hpp"
#include "chernflow/error.hpp"
#include "chernflow/scenario.hpp"
#include "helpers.hpp"

using namespace chernflow;

namespace {

Scenario preset(const char* name) {
  ScenarioSpec s;
  s.preset = name;
  return make_scenario(s);
}

Background constant_bg(double s0, double f) {
  const TorusGrid g = make_grid(2, 8);
  return build_background(ScalarField::constant(g, s0), ScalarField::constant(g, f));
}

}  // namespace

TEST_CASE("energy of constant fields") {
  const Background bg = constant_bg(-1, -1);
  const TorusGrid& g = bg.grid();
  CHECK(energy(ScalarField::constant(g, 0.0), bg) == doctest::Approx(1.0).epsilon(1e-15));
  for (double c : {-1.0, 0.3, 2.0}) {
    CHECK(energy(ScalarField::constant(g, c), bg) ==
          doctest::Approx(c * bg.degree() - bg.half_dim() * std::exp(bg.conformal_rate() * c) * bg.f_mean())
              .epsilon(1e-13));
  }
}

TEST_CASE("first variation of the energy is the residual") {
  const Scenario sc = preset("case1");
  const Background& bg = sc.background;
  for (double scale : {0.0, 0.5}) {
    const ScalarField u = scale * random_band_limited(bg.grid(), 5);
    const ScalarField grad = residual(u, bg);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const ScalarField phi = random_band_limited(bg.grid(), 50 + k);
      const double eps = 1e-4 / phi.sup_norm();
      const double fd = (energy(u + eps * phi, bg) - energy(u - eps * phi, bg)) / (2 * eps);
      const double exact = integrate(grad * phi);
      CHECK(std::fabs(fd - exact) <= 1e-6 * std::fabs(exact));
    }
  }
}

TEST_CASE("dissipation identity") {
  const Background bg = constant_bg(-1, -1);
  // A stationary trajectory: three identical records.
  const FlowState st(ScalarField::constant(bg.grid(), 0.0), 0.0, bg);
  FlowRecord r;
  r.energy = energy(st.u(), bg);
  r.dissipation = dissipation_rate(st.u(), st.dudt(), bg);
  FlowTrajectory flat{{r, r, r}, st, Termination::Converged, 2};
  flat.records[1].t = 1;
  flat.records[2].t = 2;
  CHECK(dissipation_identity_check(flat) <= 1e-12);
  flat.records.pop_back();
  try {
    dissipation_identity_check(flat);
    FAIL("expected TooFewRecords");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewRecords);
  }

  const Scenario c = preset("constant");
  StepperOptions o;
  o.dt_init = 5e-4;
  o.record_every = 2;
  o.t_max = 1.0;
  const FlowTrajectory tr = run_flow(c.u0, c.background, o);
  CHECK(dissipation_identity_check(tr) <= 1e-4);
  for (const auto& rec : tr.records) CHECK(rec.dissipation <= 1e-12);
}

TEST_CASE("energy decreases along a rough start") {
  const Scenario sc = preset("rough-start");
  StepperOptions o;
  o.t_max = 0.5;
  const FlowTrajectory tr = run_flow(sc.u0, sc.background, o);
  CHECK(worst_energy_increase(tr) <= 1e-10);
  CHECK(tr.records.back().energy < tr.records.front().energy);
}

TEST_CASE("a-priori bound constants") {
  const Background bg = constant_bg(-1, -1);
  const TorusGrid& g = bg.grid();
  const ScalarField u0 = ScalarField::constant(g, 0.5);
  // min{0.5, log 1} + 0 = 0.
  CHECK(lower_bound_constant(bg, u0) == 0.0);
  CHECK(growth_constant(bg) == 2.0);
  CHECK(upper_bound_value(bg, u0, 1.0) == 2.5);
  CHECK(upper_bound_value(bg, u0, 0.0) == 0.5);
  CHECK(upper_bound_value(bg, ScalarField::constant(g, -3.0), 0.0) == 0.0);
  CHECK(lower_bound_constant(bg, ScalarField::constant(g, -7.0)) == -7.0);

  // With -Γ / ‖f‖∞ = 1/4 at n = 2 the second branch is log(1/4).
  const Background b4 = constant_bg(-1, -4);
  CHECK(lower_bound_constant(b4, u0) == doctest::Approx(std::log(0.25)).epsilon(1e-15));
  CHECK(growth_constant(b4) == 5.0);

  const Scenario sc = preset("case1");
  const ScalarField& v0 = sc.background.v0();
  CHECK(upper_bound_value(sc.background, sc.u0, 0.0) == std::max(0.0, sc.u0.max()) + v0.max() - v0.min());
  double prev = -1e300;
  for (double t : {0.0, 0.5, 1.0, 10.0}) {
    const double b = upper_bound_value(sc.background, sc.u0, t);
    CHECK(b >= prev);
    prev = b;
  }

  try {
    lower_bound_constant(constant_bg(-1, 0), u0);
    FAIL("expected ZeroF");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroF);
  }
}

TEST_CASE("bounds hold along trajectories and the checker notices violations") {
  const Scenario c = preset("constant");
  StepperOptions o;
  o.t_max = 3.0;
  o.record_every = 10;
  const FlowTrajectory tc = run_flow(c.u0, c.background, o);
  const BoundReport rc = check_bounds(tc, c.background, c.u0);
  CHECK(rc.worst_lower_slack >= -1e-10);
  CHECK(rc.worst_upper_slack >= -1e-10);
  CHECK(rc.lower_slack.size() == tc.records.size());

  const Scenario r = preset("rough-start");
  const FlowTrajectory tr = run_flow(r.u0, r.background, o);
  const BoundReport rr = check_bounds(tr, r.background, r.u0);
  CHECK(rr.holds(1e-8));

  FlowTrajectory fake = tr;
  fake.records[3].u_min = rr.lower_bound - 0.1;
  const BoundReport bad = check_bounds(fake, r.background, r.u0);
  CHECK(bad.worst_lower_slack == doctest::Approx(-0.1));
  CHECK_FALSE(bad.holds(1e-8));
}

TEST_CASE("stationary identity") {
  const Background bg = constant_bg(-1, -4);
  CHECK(stationary_identity_check(ScalarField::constant(bg.grid(), -std::log(4.0)), bg) <= 1e-12);

  const Scenario sc = preset("case1");
  StepperOptions o;
  o.method = StepMethod::ImexLagged;
  o.dt_init = 0.02;
  const FlowTrajectory tr = run_flow(sc.u0, sc.background, o);
  REQUIRE(tr.termination == Termination::Converged);
  CHECK(stationary_identity_check(tr.final_state.u(), sc.background) <= 1e-6);
  REQUIRE(sc.certificate.has_value());
  CHECK(stationary_identity_check(sc.certificate->u_star + 1.0, sc.background) > 1e-3);
}
