#pragma once

// Time integration of the prescribed-curvature flow
//
//   ∂t e^{2u/n} = Δu - S0 + f e^{2u/n},
//
// carried out in the u variable:
//
//   ∂t u = (n/2) e^{-2u/n} (Δu - S0 + f e^{2u/n}) = -(n/2) (S^Ch(e^{2u/n} η) - f).

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "chernflow/error.hpp"
#include "chernflow/problem.hpp"

namespace chernflow {

enum class StepMethod { ExplicitRk4, ImexLagged };

std::string_view to_string(StepMethod method) noexcept;
// "explicit-rk4" or "imex-lagged"; throws Error(BadConfig) otherwise.
StepMethod parse_step_method(std::string_view name);

struct StepperOptions {
  StepMethod method = StepMethod::ExplicitRk4;
  // Requested step. The explicit stepper never exceeds the stability limit,
  // so this acts as a cap; the IMEX stepper uses it as is.
  double dt_init = 1e-3;
  double dt_safety = 0.8;
  // Converged once ‖∂t u‖∞ drops below this.
  double residual_tol = 1e-8;
  double t_max = 100.0;
  int record_every = 1;

  // Throws Error(BadConfig) naming the offending field.
  void validate() const;
};

// u(t) together with w = e^{2u/n}, Δu - S0 + f w and ∂t u, all consistent with u.
class FlowState {
 public:
  FlowState(ScalarField u, double t, const Background& bg);

  const ScalarField& u() const noexcept { return u_; }
  double t() const noexcept { return t_; }
  const ScalarField& w() const noexcept { return w_; }
  // Δu - S0 + f e^{2u/n}, i.e. the negated residual.
  const ScalarField& rhs() const noexcept { return rhs_; }
  const ScalarField& dudt() const noexcept { return dudt_; }
  double dudt_sup() const noexcept { return dudt_.sup_norm(); }

 private:
  FlowState(ScalarField u, double t, ScalarField w, ScalarField rhs, ScalarField dudt);
  ScalarField u_;
  double t_;
  ScalarField w_;
  ScalarField rhs_;
  ScalarField dudt_;

  friend class FlowEvaluator;
};

// ∂t u in the e^{-2u/n}-weighted form (the cached value of the state).
ScalarField rhs_u(const FlowState& state, const Background& bg);
// ∂t u through the curvature form -(n/2)(S^Ch - f); agrees with rhs_u to rounding.
ScalarField rhs_u_curvature_form(const ScalarField& u, const Background& bg);

// Largest step for which classical RK4 stays stable on the frozen-coefficient
// linearisation: safety * 2.78 / (D ρ), where D = (n/2) e^{-2 min(u)/n} is the
// peak diffusivity and ρ the spectral radius of the discrete Laplacian.
double explicit_stable_dt(const FlowState& state, const Background& bg, double safety);

// Classical four-stage Runge-Kutta. No step-size check is made here (a
// spatially constant state has no stiff content); non-finite output raises
// Error(StepUnstable).
FlowState step_explicit(const FlowState& state, const Background& bg, double dt);

// Lagged-coefficient semi-implicit Euler:
//   (I - dt c Δ) u⁺ = u + dt (∂t u - c Δu),  c = (n/2) e^{-2 min(u)/n},
// solved diagonally in Fourier space.
FlowState step_imex(const FlowState& state, const Background& bg, double dt);

struct FlowRecord {
  double t = 0.0;
  double energy = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double dudt_sup = 0.0;
  double residual_sup = 0.0;
  // -(2/n) ∫ |∂t u|² e^{2u/n} dμ, from the state's ∂t u.
  double dissipation = 0.0;
  // |dE/dt - dissipation| / (1 + |dE/dt|) with dE/dt from three-point
  // differences of the recorded energies; 0 when fewer than 3 records exist.
  double dissipation_mismatch = 0.0;
  // Step that produced this record (0 for the initial record).
  double dt = 0.0;
};

enum class Termination { Converged, TMaxReached, StepFailure };
std::string_view to_string(Termination termination) noexcept;

struct FlowTrajectory {
  std::vector<FlowRecord> records;
  FlowState final_state;
  Termination termination;
  std::size_t steps = 0;
};

// Thrown by run_flow when a step fails; carries everything recorded so far.
class StepFailureError : public Error {
 public:
  StepFailureError(const std::string& detail, FlowTrajectory partial);
  const FlowTrajectory& partial() const noexcept { return partial_; }

 private:
  FlowTrajectory partial_;
};

using RecordObserver = std::function<void(const FlowState&, const FlowRecord&)>;

// Steps from u0 until ‖∂t u‖∞ < residual_tol (converged) or t reaches t_max.
// Records the initial state, every record_every-th step and the final state;
// the observer sees each recorded state.
FlowTrajectory run_flow(const ScalarField& u0, const Background& bg, const StepperOptions& opts,
                        const RecordObserver& observer = {});

// Fills dissipation_mismatch of every record from energies and dissipation values.
void fill_dissipation_mismatch(std::vector<FlowRecord>& records);

// Header `t,E,u_min,u_max,dudt_sup,residual_sup,dissipation_mismatch,dt`, one row per record.
void write_trajectory_csv(std::ostream& os, const FlowTrajectory& trajectory);

}  // namespace chernflow
