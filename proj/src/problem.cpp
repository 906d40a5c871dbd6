#include "chernflow/problem.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "chernflow/error.hpp"
#include "chernflow/kernels.hpp"
#include "chernflow/poisson.hpp"

namespace chernflow {

Background::Background(ScalarField s0, ScalarField f, double degree, ScalarField v0)
    : s0_(std::move(s0)),
      f_(std::move(f)),
      degree_(degree),
      f_mean_(integrate(f_)),
      f_sup_norm_(f_.sup_norm()),
      v0_(std::move(v0)) {}

Background build_background(ScalarField s0, ScalarField f) {
  require_same_grid(s0, f);
  const double degree = integrate(s0);
  if (!(degree < 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "Gauduchon degree " << degree << " is not negative";
    throw Error(ErrorCode::NonNegativeDegree, os.str());
  }
  ScalarField v0 = solve_mean_zero(s0 - degree);
  return Background(std::move(s0), std::move(f), degree, std::move(v0));
}

ScalarField chern_scalar_curvature(const ScalarField& u, const Background& bg) {
  require_same_grid(u, bg.s0());
  const ScalarField lap = laplacian(u);
  std::vector<double> w(u.size());
  kernels::exp_scaled(w, u.values(), -bg.conformal_rate());
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = w[i] * (bg.s0()[i] - lap[i]);
  return ScalarField(u.grid(), std::move(out));
}

ScalarField residual(const ScalarField& u, const Background& bg) {
  require_same_grid(u, bg.s0());
  const ScalarField lap = laplacian(u);
  std::vector<double> w(u.size());
  kernels::exp_scaled(w, u.values(), bg.conformal_rate());
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (bg.s0()[i] - lap[i]) - bg.f()[i] * w[i];
  return ScalarField(u.grid(), std::move(out));
}

bool necessary_condition(const ScalarField& f) { return f.min() < 0.0; }

namespace {

// Uniform double in [-1, 1) from 53 random bits.
double symmetric_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

ScalarField random_band_limited(const TorusGrid& grid, std::uint64_t seed) {
  const int axes = grid.axes();
  std::vector<int> kmax(static_cast<std::size_t>(axes));
  for (int a = 0; a < axes; ++a) kmax[static_cast<std::size_t>(a)] = band_limit(grid, a);

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x9e3779b9u};
  std::mt19937_64 rng(seq);

  std::vector<double> values(grid.size(), 0.0);
  std::vector<int> k(static_cast<std::size_t>(axes));
  for (int a = 0; a < axes; ++a) k[static_cast<std::size_t>(a)] = -kmax[static_cast<std::size_t>(a)];
  const auto points = grid.points();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> phase_step(static_cast<std::size_t>(axes));

  for (;;) {
    // One representative per ± pair: the first non-zero component is positive.
    int first = 0;
    for (int a = 0; a < axes && first == 0; ++a) first = k[static_cast<std::size_t>(a)];
    if (first > 0) {
      int norm2 = 0;
      for (int kv : k) norm2 += kv * kv;
      const double decay = 1.0 / ((1.0 + norm2) * (1.0 + norm2));
      const double c = symmetric_unit(rng) * decay;
      const double s = symmetric_unit(rng) * decay;
      for (std::size_t node = 0; node < values.size(); ++node) {
        // Integer phase modulo each axis keeps the argument reduction exact.
        double theta = 0.0;
        for (int a = 0; a < axes; ++a) {
          const auto ua = static_cast<std::size_t>(a);
          const long n = points[ua];
          const long idx = static_cast<long>((node / grid.stride(a)) % static_cast<std::size_t>(n));
          const long m = ((static_cast<long>(k[ua]) * idx) % n + n) % n;
          theta += static_cast<double>(m) / static_cast<double>(n);
        }
        theta *= two_pi;
        values[node] += c * std::cos(theta) + s * std::sin(theta);
      }
    }
    int a = axes - 1;
    for (; a >= 0; --a) {
      const auto ua = static_cast<std::size_t>(a);
      if (++k[ua] <= kmax[ua]) break;
      k[ua] = -kmax[ua];
    }
    if (a < 0) break;
  }
  return ScalarField(grid, std::move(values));
}

}  // namespace chernflow
