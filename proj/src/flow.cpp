#include "chernflow/flow.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "chernflow/analysis.hpp"
#include "chernflow/kernels.hpp"
#include "spectral.hpp"

namespace chernflow {

std::string_view to_string(StepMethod method) noexcept {
  return method == StepMethod::ExplicitRk4 ? "explicit-rk4" : "imex-lagged";
}

StepMethod parse_step_method(std::string_view name) {
  if (name == "explicit-rk4") return StepMethod::ExplicitRk4;
  if (name == "imex-lagged") return StepMethod::ImexLagged;
  throw Error(ErrorCode::BadConfig, "flow.method must be explicit-rk4 or imex-lagged, got '" +
                                        std::string(name) + "'");
}

std::string_view to_string(Termination termination) noexcept {
  switch (termination) {
    case Termination::Converged: return "converged";
    case Termination::TMaxReached: return "t_max reached";
    case Termination::StepFailure: return "step failure";
  }
  return "unknown";
}

void StepperOptions::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::BadConfig, std::string(name) + " must be positive and finite");
    }
  };
  positive(dt_init, "flow.dt_init");
  positive(dt_safety, "flow.dt_safety");
  positive(residual_tol, "flow.residual_tol");
  if (!(residual_tol < 1.0)) throw Error(ErrorCode::BadConfig, "flow.residual_tol must be < 1");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::BadConfig, "flow.t_max must be non-negative and finite");
  }
  if (record_every < 1) throw Error(ErrorCode::BadConfig, "flow.record_every must be >= 1");
}

// Evaluates ∂t u and its by-products with reusable workspace.
class FlowEvaluator {
 public:
  explicit FlowEvaluator(const Background& bg)
      : bg_(bg), n_(bg.grid().size()), lap_(n_), w_(n_), rhs_(n_) {}

  // dudt = (n/2) (Δu - S0 + f w) / w; leaves Δu, w and the bracket in the workspace.
  void evaluate(std::span<const double> u, std::span<double> dudt) {
    const auto& sp = bg_.grid().spectral();
    sp.apply_laplacian(u, lap_, scratch_);
    const auto& k = kernels::active();
    k.exp_scaled(w_.data(), u.data(), bg_.conformal_rate(), n_);
    k.flow_rhs(dudt.data(), lap_.data(), bg_.s0().values().data(), bg_.f().values().data(), w_.data(),
               bg_.half_dim(), n_);
  }

  // Builds a fully cached state from u; throws Error(StepUnstable) on non-finite data.
  FlowState make_state(std::vector<double> u, double t) {
    for (double v : u) {
      if (!std::isfinite(v)) throw Error(ErrorCode::StepUnstable, "non-finite u at t = " + std::to_string(t));
    }
    std::vector<double> dudt(n_);
    evaluate(u, dudt);
    std::vector<double> rhs(n_);
    // Bracket Δu - S0 + f w, computed with the same operation order as flow_rhs.
    for (std::size_t i = 0; i < n_; ++i) rhs[i] = (lap_[i] - bg_.s0()[i]) + bg_.f()[i] * w_[i];
    for (std::size_t i = 0; i < n_; ++i) {
      if (!std::isfinite(dudt[i]) || !std::isfinite(w_[i])) {
        throw Error(ErrorCode::StepUnstable, "non-finite right-hand side at t = " + std::to_string(t));
      }
    }
    const TorusGrid& g = bg_.grid();
    return FlowState(ScalarField(g, std::move(u)), t, ScalarField(g, w_), ScalarField(g, std::move(rhs)),
                     ScalarField(g, std::move(dudt)));
  }

  std::span<const double> laplacian() const noexcept { return lap_; }
  detail::ComplexBuffer& scratch() noexcept { return scratch_; }

 private:
  const Background& bg_;
  std::size_t n_;
  detail::RealBuffer lap_;
  std::vector<double> w_;
  std::vector<double> rhs_;
  detail::ComplexBuffer scratch_;
};

FlowState::FlowState(ScalarField u, double t, const Background& bg)
    : FlowState([&] {
        require_same_grid(u, bg.s0());
        FlowEvaluator ev(bg);
        return ev.make_state(std::vector<double>(u.values().begin(), u.values().end()), t);
      }()) {}

FlowState::FlowState(ScalarField u, double t, ScalarField w, ScalarField rhs, ScalarField dudt)
    : u_(std::move(u)), t_(t), w_(std::move(w)), rhs_(std::move(rhs)), dudt_(std::move(dudt)) {}

ScalarField rhs_u(const FlowState& state, const Background& bg) {
  require_same_grid(state.u(), bg.s0());
  return state.dudt();
}

ScalarField rhs_u_curvature_form(const ScalarField& u, const Background& bg) {
  const ScalarField curvature = chern_scalar_curvature(u, bg);
  const double half_n = bg.half_dim();
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -half_n * (curvature[i] - bg.f()[i]);
  return ScalarField(u.grid(), std::move(out));
}

namespace {

// Real-axis extent of the classical RK4 stability region.
constexpr double kRk4StabilityExtent = 2.78;

double peak_diffusivity(const ScalarField& u, const Background& bg) {
  return bg.half_dim() * std::exp(-bg.conformal_rate() * u.min());
}

}  // namespace

double explicit_stable_dt(const FlowState& state, const Background& bg, double safety) {
  const double rho = bg.grid().spectral().spectral_radius();
  return safety * kRk4StabilityExtent / (peak_diffusivity(state.u(), bg) * rho);
}

FlowState step_explicit(const FlowState& state, const Background& bg, double dt) {
  require_same_grid(state.u(), bg.s0());
  const std::size_t n = state.u().size();
  const auto& k = kernels::active();
  FlowEvaluator ev(bg);
  const double* u = state.u().values().data();
  const double* k1 = state.dudt().values().data();
  detail::RealBuffer stage(n);
  std::vector<double> k2(n), k3(n), k4(n);

  k.axpy(stage.data(), u, 0.5 * dt, k1, n);
  ev.evaluate(stage, k2);
  k.axpy(stage.data(), u, 0.5 * dt, k2.data(), n);
  ev.evaluate(stage, k3);
  k.axpy(stage.data(), u, dt, k3.data(), n);
  ev.evaluate(stage, k4);

  std::vector<double> next(n);
  k.rk4_combine(next.data(), u, k1, k2.data(), k3.data(), k4.data(), dt, n);
  return ev.make_state(std::move(next), state.t() + dt);
}

FlowState step_imex(const FlowState& state, const Background& bg, double dt) {
  require_same_grid(state.u(), bg.s0());
  const std::size_t n = state.u().size();
  const auto& sp = bg.grid().spectral();
  const double c = peak_diffusivity(state.u(), bg);
  FlowEvaluator ev(bg);

  detail::RealBuffer lap(n);
  sp.apply_laplacian(state.u().values(), lap, ev.scratch());
  // Explicit part: u + dt (∂t u - c Δu).
  detail::RealBuffer explicit_part(n);
  const auto u = state.u().values();
  const auto dudt = state.dudt().values();
  for (std::size_t i = 0; i < n; ++i) explicit_part[i] = u[i] + dt * (dudt[i] - c * lap[i]);

  auto& spec = ev.scratch();
  sp.forward(explicit_part, spec);
  const auto lam = sp.laplacian_symbol();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> multiplier(spec.size());
  for (std::size_t j = 0; j < spec.size(); ++j) multiplier[j] = inv_n / (1.0 - dt * c * lam[j]);
  kernels::active().scale_complex(reinterpret_cast<double*>(spec.data()), multiplier.data(), spec.size());
  std::vector<double> next(n);
  sp.inverse(spec, next);
  return ev.make_state(std::move(next), state.t() + dt);
}

StepFailureError::StepFailureError(const std::string& detail, FlowTrajectory partial)
    : Error(ErrorCode::StepFailure, detail), partial_(std::move(partial)) {}

namespace {

FlowRecord make_record(const FlowState& state, const Background& bg, double dt) {
  FlowRecord r;
  r.t = state.t();
  r.energy = energy(state.u(), bg);
  r.u_min = state.u().min();
  r.u_max = state.u().max();
  r.dudt_sup = state.dudt_sup();
  r.residual_sup = state.rhs().sup_norm();
  r.dissipation = dissipation_rate(state.u(), state.dudt(), bg);
  r.dt = dt;
  return r;
}

}  // namespace

FlowTrajectory run_flow(const ScalarField& u0, const Background& bg, const StepperOptions& opts,
                        const RecordObserver& observer) {
  opts.validate();
  FlowState state(u0, 0.0, bg);
  std::vector<FlowRecord> records;
  auto record = [&](double dt) {
    records.push_back(make_record(state, bg, dt));
    if (observer) observer(state, records.back());
  };
  record(0.0);

  std::size_t steps = 0;
  double last_dt = 0.0;
  bool last_recorded = true;
  Termination termination = Termination::TMaxReached;
  for (;;) {
    if (state.dudt_sup() < opts.residual_tol) {
      termination = Termination::Converged;
      break;
    }
    const double remaining = opts.t_max - state.t();
    if (remaining <= 0.0) {
      termination = Termination::TMaxReached;
      break;
    }
    double dt = opts.dt_init;
    if (opts.method == StepMethod::ExplicitRk4) dt = std::min(dt, explicit_stable_dt(state, bg, opts.dt_safety));
    // Absorb a rounding sliver left before t_max into this step.
    const bool final_step = dt >= remaining * (1.0 - 1e-9);
    if (final_step) dt = remaining;
    try {
      FlowState next = opts.method == StepMethod::ExplicitRk4 ? step_explicit(state, bg, dt)
                                                              : step_imex(state, bg, dt);
      state = final_step ? FlowState(next.u(), opts.t_max, bg) : std::move(next);
    } catch (const Error& e) {
      if (!last_recorded) record(last_dt);
      fill_dissipation_mismatch(records);
      throw StepFailureError(e.what(), FlowTrajectory{std::move(records), state, Termination::StepFailure, steps});
    }
    ++steps;
    last_dt = dt;
    last_recorded = steps % static_cast<std::size_t>(opts.record_every) == 0;
    if (last_recorded) record(dt);
  }
  if (!last_recorded) record(last_dt);
  fill_dissipation_mismatch(records);
  return FlowTrajectory{std::move(records), std::move(state), termination, steps};
}

void fill_dissipation_mismatch(std::vector<FlowRecord>& records) {
  const std::size_t m = records.size();
  if (m < 3) {
    for (auto& r : records) r.dissipation_mismatch = 0.0;
    return;
  }
  for (std::size_t k = 0; k < m; ++k) {
    // Three-point, second-order derivative on possibly uneven spacing; one-sided at the ends.
    const std::size_t c = std::clamp<std::size_t>(k, 1, m - 2);
    const double t0 = records[c - 1].t, t1 = records[c].t, t2 = records[c + 1].t;
    const double e0 = records[c - 1].energy, e1 = records[c].energy, e2 = records[c + 1].energy;
    const double h1 = t1 - t0, h2 = t2 - t1;
    double slope = 0.0;
    if (k == c) {
      slope = -h2 / (h1 * (h1 + h2)) * e0 + (h2 - h1) / (h1 * h2) * e1 + h1 / (h2 * (h1 + h2)) * e2;
    } else if (k == 0) {
      slope = -(2 * h1 + h2) / (h1 * (h1 + h2)) * e0 + (h1 + h2) / (h1 * h2) * e1 - h1 / (h2 * (h1 + h2)) * e2;
    } else {
      slope = h2 / (h1 * (h1 + h2)) * e0 - (h1 + h2) / (h1 * h2) * e1 + (2 * h2 + h1) / (h2 * (h1 + h2)) * e2;
    }
    records[k].dissipation_mismatch = std::fabs(slope - records[k].dissipation) / (1.0 + std::fabs(slope));
  }
}

void write_trajectory_csv(std::ostream& os, const FlowTrajectory& trajectory) {
  os << "t,E,u_min,u_max,dudt_sup,residual_sup,dissipation_mismatch,dt\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    *res.ptr = sep;
    os.write(buf, res.ptr - buf + 1);
  };
  for (const auto& r : trajectory.records) {
    put(r.t, ',');
    put(r.energy, ',');
    put(r.u_min, ',');
    put(r.u_max, ',');
    put(r.dudt_sup, ',');
    put(r.residual_sup, ',');
    put(r.dissipation_mismatch, ',');
    put(r.dt, '\n');
  }
}

}  // namespace chernflow
