#pragma once

// Energy, dissipation and a-priori bound checks for flow trajectories.

#include <vector>

#include "chernflow/flow.hpp"
#include "chernflow/problem.hpp"

namespace chernflow {

// E(u) = ½∫|∇u|² dμ + ∫ S0 u dμ - (n/2) ∫ f e^{2u/n} dμ.
double energy(const ScalarField& u, const Background& bg);

// -(2/n) ∫ |∂t u|² e^{2u/n} dμ.
double dissipation_rate(const ScalarField& u, const ScalarField& dudt, const Background& bg);

// Largest |dE/dt - dissipation| / (1 + |dE/dt|) over interior records, with
// dE/dt the centred (three-point) difference of the recorded energies.
// Throws Error(TooFewRecords) below three records.
double dissipation_identity_check(const FlowTrajectory& trajectory);

// Largest (E_{k+1} - E_k) / (1 + |E_k|) over consecutive records; <= 0 for a
// non-increasing energy.
double worst_energy_increase(const FlowTrajectory& trajectory);

// Lower a-priori bound -C0:
//   min{ min(u0 - v0), (n/2) log(-Γ / (‖f‖∞ e^{(2/n) max v0})) } + min v0.
// Throws Error(ZeroF) when ‖f‖∞ = 0.
double lower_bound_constant(const Background& bg, const ScalarField& u0);

// C1 = (n/2)(‖f‖∞ - Γ).
double growth_constant(const Background& bg);

// Upper a-priori bound max{0, max u0} + C1 t + max v0 - min v0.
double upper_bound_value(const Background& bg, const ScalarField& u0, double t);

struct BoundReport {
  double lower_bound = 0.0;  // -C0
  double growth = 0.0;       // C1
  std::vector<double> lower_slack;  // u_min(t) - (-C0) per record
  std::vector<double> upper_slack;  // bound(t) - u_max(t) per record
  double worst_lower_slack = 0.0;
  double worst_upper_slack = 0.0;

  bool holds(double tolerance) const noexcept {
    return worst_lower_slack >= -tolerance && worst_upper_slack >= -tolerance;
  }
};

BoundReport check_bounds(const FlowTrajectory& trajectory, const Background& bg, const ScalarField& u0);

// |∫ f e^{2u/n} dμ - Γ|; vanishes for stationary solutions.
double stationary_identity_check(const ScalarField& u, const Background& bg);

}  // namespace chernflow
