#include "chernflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chernflow/error.hpp"
#include "chernflow/kernels.hpp"

namespace chernflow {

double energy(const ScalarField& u, const Background& bg) {
  require_same_grid(u, bg.s0());
  const double vol = u.grid().cell_volume();
  // ½∫|∇u|² through -½∫u Δu: the same spectral symbol the flow uses, so the
  // discrete energy and the discrete flow satisfy the dissipation law exactly.
  const ScalarField lap = laplacian(u);
  const double gradient = -0.5 * vol * kernels::dot(u.values(), lap.values());
  const double potential = vol * kernels::dot(bg.s0().values(), u.values());
  std::vector<double> w(u.size());
  kernels::exp_scaled(w, u.values(), bg.conformal_rate());
  const double reaction = bg.half_dim() * vol * kernels::dot(bg.f().values(), w);
  return (gradient + potential) - reaction;
}

double dissipation_rate(const ScalarField& u, const ScalarField& dudt, const Background& bg) {
  require_same_grid(u, bg.s0());
  require_same_grid(dudt, bg.s0());
  std::vector<double> w(u.size());
  kernels::exp_scaled(w, u.values(), bg.conformal_rate());
  std::vector<double> sq(u.size());
  kernels::mul(sq, dudt.values(), dudt.values());
  return -bg.conformal_rate() * u.grid().cell_volume() * kernels::dot(sq, w);
}

double dissipation_identity_check(const FlowTrajectory& trajectory) {
  const auto& r = trajectory.records;
  if (r.size() < 3) {
    throw Error(ErrorCode::TooFewRecords,
                "dissipation check needs at least 3 records, got " + std::to_string(r.size()));
  }
  std::vector<FlowRecord> copy = r;
  fill_dissipation_mismatch(copy);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < copy.size(); ++k) worst = std::max(worst, copy[k].dissipation_mismatch);
  return worst;
}

double worst_energy_increase(const FlowTrajectory& trajectory) {
  const auto& r = trajectory.records;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    worst = std::max(worst, (r[k + 1].energy - r[k].energy) / (1.0 + std::fabs(r[k].energy)));
  }
  return r.size() < 2 ? 0.0 : worst;
}

double lower_bound_constant(const Background& bg, const ScalarField& u0) {
  require_same_grid(u0, bg.s0());
  const double fs = bg.f_sup_norm();
  if (!(fs > 0.0)) throw Error(ErrorCode::ZeroF, "lower bound needs ‖f‖∞ > 0");
  const ScalarField& v0 = bg.v0();
  const double first = (u0 - v0).min();
  const double second = bg.half_dim() * std::log(-bg.degree() / (fs * std::exp(bg.conformal_rate() * v0.max())));
  return std::min(first, second) + v0.min();
}

double growth_constant(const Background& bg) { return bg.half_dim() * (bg.f_sup_norm() - bg.degree()); }

double upper_bound_value(const Background& bg, const ScalarField& u0, double t) {
  require_same_grid(u0, bg.s0());
  const ScalarField& v0 = bg.v0();
  return std::max(0.0, u0.max()) + growth_constant(bg) * t + v0.max() - v0.min();
}

BoundReport check_bounds(const FlowTrajectory& trajectory, const Background& bg, const ScalarField& u0) {
  BoundReport rep;
  rep.lower_bound = lower_bound_constant(bg, u0);
  rep.growth = growth_constant(bg);
  rep.worst_lower_slack = std::numeric_limits<double>::infinity();
  rep.worst_upper_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : trajectory.records) {
    const double lo = r.u_min - rep.lower_bound;
    const double hi = upper_bound_value(bg, u0, r.t) - r.u_max;
    rep.lower_slack.push_back(lo);
    rep.upper_slack.push_back(hi);
    rep.worst_lower_slack = std::min(rep.worst_lower_slack, lo);
    rep.worst_upper_slack = std::min(rep.worst_upper_slack, hi);
  }
  return rep;
}

double stationary_identity_check(const ScalarField& u, const Background& bg) {
  require_same_grid(u, bg.s0());
  std::vector<double> w(u.size());
  kernels::exp_scaled(w, u.values(), bg.conformal_rate());
  return std::fabs(u.grid().cell_volume() * kernels::dot(bg.f().values(), w) - bg.degree());
}

}  // namespace chernflow
