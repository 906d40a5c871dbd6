#include "chernflow/poisson.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "chernflow/error.hpp"
#include "spectral.hpp"

namespace chernflow {
namespace {

void require_mean_zero(const ScalarField& g) {
  const double mean = integrate(g);
  if (std::fabs(mean) > kPoissonMeanTolerance * (1.0 + g.sup_norm())) {
    std::ostringstream os;
    os.precision(17);
    os << "right-hand side has mean " << mean;
    throw Error(ErrorCode::NonZeroMean, os.str());
  }
}

}  // namespace

ScalarField solve_mean_zero(const ScalarField& g) {
  require_mean_zero(g);
  const auto& sp = g.grid().spectral();
  detail::ComplexBuffer spec;
  sp.forward(g.values(), spec);
  const auto lam = sp.laplacian_symbol();
  const double inv_n = 1.0 / static_cast<double>(sp.real_size());
  spec[0] = 0.0;
  for (std::size_t c = 1; c < spec.size(); ++c) spec[c] *= inv_n / lam[c];
  std::vector<double> v(g.size());
  sp.inverse(spec, v);
  return ScalarField(g.grid(), std::move(v));
}

ScalarField solve_positive(const ScalarField& g) {
  const ScalarField v = solve_mean_zero(g);
  const double lowest = v.min();
  // (v - min) is exactly 0 at the minimiser and >= 0 elsewhere, so adding 1
  // gives a minimum of exactly 1.
  return v.map([lowest](double x) { return (x - lowest) + 1.0; });
}

ScalarField solve_dense_oracle(const ScalarField& g) {
  const TorusGrid& grid = g.grid();
  const std::size_t n = grid.size();
  if (n > kDenseOracleMaxNodes) {
    throw Error(ErrorCode::TooLarge, "dense oracle limited to " + std::to_string(kDenseOracleMaxNodes) +
                                         " nodes, grid has " + std::to_string(n));
  }
  require_mean_zero(g);

  // [A 1; 1ᵀ 0] [v; μ] = [g; 0]; the border pins the mean of v to zero.
  const auto dim = static_cast<Eigen::Index>(n + 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < grid.axes(); ++a) {
    const std::size_t stride = grid.stride(a);
    const auto pts = static_cast<std::size_t>(grid.points()[static_cast<std::size_t>(a)]);
    const double inv_h2 = 1.0 / (grid.spacing(a) * grid.spacing(a));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pos = (i / stride) % pts;
      const std::size_t base = i - pos * stride;
      const auto row = static_cast<Eigen::Index>(i);
      m(row, static_cast<Eigen::Index>(base + ((pos + 1) % pts) * stride)) += inv_h2;
      m(row, static_cast<Eigen::Index>(base + ((pos + pts - 1) % pts) * stride)) += inv_h2;
      m(row, row) -= 2.0 * inv_h2;
    }
  }
  const auto last = static_cast<Eigen::Index>(n);
  for (Eigen::Index i = 0; i < last; ++i) {
    m(i, last) = 1.0;
    m(last, i) = 1.0;
  }
  Eigen::VectorXd rhs(dim);
  for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = g[i];
  rhs(last) = 0.0;

  const Eigen::VectorXd sol = m.partialPivLu().solve(rhs);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = sol(static_cast<Eigen::Index>(i));
  return ScalarField(grid, std::move(v));
}

}  // namespace chernflow
