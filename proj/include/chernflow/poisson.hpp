#pragma once

#include "chernflow/torus.hpp"

namespace chernflow {

// |∫g| allowed by the mean-zero solvers, relative to 1 + ‖g‖∞.
inline constexpr double kPoissonMeanTolerance = 1e-10;

// Unique mean-zero v with Δv = g, by spectral division (zero mode set to 0).
// Throws Error(NonZeroMean) if g is not mean-zero to kPoissonMeanTolerance.
ScalarField solve_mean_zero(const ScalarField& g);

// solve_mean_zero(g) shifted so that its minimum over nodes is exactly 1.
ScalarField solve_positive(const ScalarField& g);

// Largest grid accepted by solve_dense_oracle.
inline constexpr std::size_t kDenseOracleMaxNodes = 4096;

// Independent check of solve_mean_zero: assembles the second-order
// finite-difference Laplacian as a dense matrix bordered by the mean-zero
// constraint and solves it by LU. Throws Error(TooLarge) above
// kDenseOracleMaxNodes nodes and Error(NonZeroMean) like solve_mean_zero.
ScalarField solve_dense_oracle(const ScalarField& g);

}  // namespace chernflow
