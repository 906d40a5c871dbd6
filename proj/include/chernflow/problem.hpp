#pragma once

// Problem data for the prescribed Chern scalar curvature equation on the flat
// torus background η:
//
//   -Δu + S0 = f e^{2u/n}
//
// S0 is the Chern scalar curvature of η and f the curvature to prescribe.

#include <cstdint>

#include "chernflow/torus.hpp"

namespace chernflow {

class Background {
 public:
  const TorusGrid& grid() const noexcept { return s0_.grid(); }
  int complex_dim() const noexcept { return grid().complex_dim(); }
  // n / 2 and 2 / n, used everywhere in the conformal factor.
  double half_dim() const noexcept { return 0.5 * complex_dim(); }
  double conformal_rate() const noexcept { return 2.0 / complex_dim(); }

  const ScalarField& s0() const noexcept { return s0_; }
  const ScalarField& f() const noexcept { return f_; }
  // Gauduchon degree Γ = ∫ S0 dμ (the mean of S0 on the unit-volume torus).
  double degree() const noexcept { return degree_; }
  double f_mean() const noexcept { return f_mean_; }
  double f_sup_norm() const noexcept { return f_sup_norm_; }
  // Mean-zero solution of Δv0 = S0 - Γ.
  const ScalarField& v0() const noexcept { return v0_; }

 private:
  Background(ScalarField s0, ScalarField f, double degree, ScalarField v0);
  ScalarField s0_;
  ScalarField f_;
  double degree_;
  double f_mean_;
  double f_sup_norm_;
  ScalarField v0_;

  friend Background build_background(ScalarField s0, ScalarField f);
};

// Throws Error(GridMismatch) for fields on different grids and
// Error(NonNegativeDegree) unless ∫ S0 dμ < 0.
Background build_background(ScalarField s0, ScalarField f);

// Chern scalar curvature of e^{2u/n} η: e^{-2u/n} (-Δu + S0).
ScalarField chern_scalar_curvature(const ScalarField& u, const Background& bg);

// -Δu + S0 - f e^{2u/n}; zero exactly when u solves the prescribed curvature equation.
ScalarField residual(const ScalarField& u, const Background& bg);

// min f < 0, necessary for any solution when Γ < 0.
bool necessary_condition(const ScalarField& f);

// Mean-zero truncated Fourier series with modes |k_a| <= band_limit(grid, a)
// and coefficients uniform in [-1, 1] scaled by (1 + |k|²)^-2. Deterministic
// in (grid, seed).
ScalarField random_band_limited(const TorusGrid& grid, std::uint64_t seed);

}  // namespace chernflow
