#include <doctest.h>

#include <sstream>

#include "chernflow/error.hpp"
#include "chernflow/problem.hpp"
#include "chernflow/snapshot.hpp"
#include "helpers.hpp"

using namespace chernflow;
using testing::kPi;
using testing::rel_err;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::BadConfig;
}

}  // namespace

TEST_CASE("grid construction") {
  const TorusGrid g1 = make_grid(1, {16, 16}, {1, 1});
  CHECK(g1.size() == 256);
  CHECK(integrate(ScalarField::constant(g1, 1.0)) == 1.0);
  const TorusGrid g2 = make_grid(2, {8, 8, 8, 8}, {1, 1, 1, 1});
  CHECK(g2.size() == 4096);
  CHECK(integrate(ScalarField::constant(g2, 1.0)) == 1.0);
  CHECK(g2.describe() == "n=2 axes=8,8,8,8 periods=1,1,1,1");

  CHECK(code_of([] { make_grid(1, {16, 16}, {2, 1}); }) == ErrorCode::VolumeNotOne);
  CHECK(code_of([] { make_grid(1, {15, 16}, {1, 1}); }) == ErrorCode::BadResolution);
  CHECK(code_of([] { make_grid(1, {6, 6}, {1, 1}); }) == ErrorCode::BadResolution);
  CHECK(code_of([] { make_grid(2, {8, 8}, {1, 1}); }) == ErrorCode::BadResolution);
  CHECK(code_of([] { make_grid(1, {8, 8}, {1}); }) == ErrorCode::BadResolution);
  CHECK_NOTHROW(make_grid(1, {16, 8}, {2.0, 0.5}));
}

TEST_CASE("fields reject non-finite values and foreign grids") {
  const TorusGrid g = make_grid(1, 8);
  std::vector<double> v(g.size(), 0.0);
  v[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { ScalarField(g, v); }) == ErrorCode::NonFinite);
  CHECK(code_of([&] { ScalarField(g, std::vector<double>(5)); }) == ErrorCode::BadResolution);
  const ScalarField a = ScalarField::constant(g, 1.0);
  const ScalarField b = ScalarField::constant(make_grid(1, 16), 1.0);
  CHECK(code_of([&] { return a + b; }) == ErrorCode::GridMismatch);
  // Same geometry built twice is the same grid.
  CHECK_NOTHROW(a + ScalarField::constant(make_grid(1, 8), 2.0));
}

TEST_CASE("integration") {
  const TorusGrid g = make_grid(1, 16);
  const auto c = ScalarField::from_function(g, [](auto x) { return std::cos(2 * kPi * x[0]); });
  CHECK(std::fabs(integrate(c)) <= 1e-14);
  // ∫cos² over a period is 1/2.
  CHECK(std::fabs(integrate(c * c) - 0.5) <= 1e-14);
}

TEST_CASE("spectral laplacian on single modes") {
  const TorusGrid g = make_grid(1, 16);
  const auto c = ScalarField::from_function(g, [](auto x) { return std::cos(2 * kPi * x[0]); });
  CHECK(rel_err(laplacian(c), (-4 * kPi * kPi) * c) <= 1e-12);
  CHECK(laplacian(ScalarField::constant(g, 3.0)).sup_norm() == 0.0);
  const auto cc = ScalarField::from_function(g, [](auto x) { return std::cos(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]); });
  CHECK(rel_err(laplacian(cc), (-8 * kPi * kPi) * cc) <= 1e-12);

  // Non-unit periods: exp(2πi x1/2) has eigenvalue -(2π/2)².
  const TorusGrid h = make_grid(1, {16, 8}, {2.0, 0.5});
  const auto s = ScalarField::from_function(h, [](auto x) { return std::sin(kPi * x[0]) + std::cos(4 * kPi * x[1]); });
  const auto expect = ScalarField::from_function(
      h, [](auto x) { return -kPi * kPi * std::sin(kPi * x[0]) - 16 * kPi * kPi * std::cos(4 * kPi * x[1]); });
  CHECK(rel_err(laplacian(s), expect) <= 1e-12);
}

TEST_CASE("finite-difference laplacian") {
  const TorusGrid g = make_grid(1, 64);
  const auto c = ScalarField::from_function(g, [](auto x) { return std::cos(2 * kPi * x[0]); });
  const double h = 2 * kPi / 64;
  CHECK(rel_err(laplacian_fd(c), (-4 * kPi * kPi) * c) <= 2 * h * h);
  CHECK(laplacian_fd(ScalarField::constant(g, -2.0)).sup_norm() == 0.0);

  // A sawtooth is far from smooth: the two operators disagree badly (documented, not a bug).
  const auto saw = ScalarField::from_function(g, [](auto x) { return x[0]; });
  MESSAGE("sawtooth spectral-vs-FD discrepancy: " << testing::sup_diff(laplacian(saw), laplacian_fd(saw)));
}

TEST_CASE("spectral and finite-difference laplacians converge at second order") {
  std::vector<double> err;
  for (int pts : {16, 32, 64, 128}) {
    const TorusGrid g = make_grid(1, pts);
    const auto u = ScalarField::from_function(g, [](auto x) {
      return std::sin(2 * kPi * x[0]) * std::cos(4 * kPi * x[1]) + 0.3 * std::cos(2 * kPi * (x[0] + x[1]));
    });
    err.push_back(testing::sup_diff(laplacian(u), laplacian_fd(u)));
  }
  for (std::size_t i = 1; i < err.size(); ++i) CHECK(std::log2(err[i - 1] / err[i]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gradient energy") {
  const TorusGrid g = make_grid(1, 16);
  const auto c = ScalarField::from_function(g, [](auto x) { return std::cos(2 * kPi * x[0]); });
  const auto expect = ScalarField::from_function(g, [](auto x) {
    const double s = std::sin(2 * kPi * x[0]);
    return 4 * kPi * kPi * s * s;
  });
  CHECK(rel_err(grad_norm_sq(c), expect) <= 1e-12);
  CHECK(grad_norm_sq(ScalarField::constant(g, 1.0)).sup_norm() == 0.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (const TorusGrid& grid : {make_grid(1, 32), make_grid(2, 8)}) {
      const ScalarField u = random_band_limited(grid, seed);
      const double lhs = integrate(grad_norm_sq(u));
      CHECK(std::fabs(lhs + integrate(u * laplacian(u))) <= 1e-10 * lhs);
    }
  }
  const auto d = partial_derivative(c, 0);
  CHECK(rel_err(d, ScalarField::from_function(g, [](auto x) { return -2 * kPi * std::sin(2 * kPi * x[0]); })) <= 1e-12);
}

TEST_CASE("discrete calculus identities on random fields") {
  for (const TorusGrid& g : {make_grid(1, 32), make_grid(2, 8), make_grid(1, {16, 32}, {0.5, 2.0})}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ScalarField u = random_band_limited(g, seed);
      const ScalarField v = random_band_limited(g, seed + 100);
      const ScalarField lu = laplacian(u);
      CHECK(std::fabs(integrate(lu)) <= 1e-12 * (1 + u.sup_norm()));
      CHECK(std::fabs(integrate(u * laplacian(v)) - integrate(v * lu)) <= 1e-10 * u.sup_norm() * v.sup_norm());
      CHECK(integrate(u * lu) <= 1e-12);
    }
  }
}

TEST_CASE("random band-limited fields") {
  const TorusGrid g = make_grid(1, 32);
  const ScalarField a = random_band_limited(g, 42);
  const ScalarField b = random_band_limited(g, 42);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK(testing::sup_diff(a, random_band_limited(g, 43)) > 0.0);
  CHECK(std::fabs(integrate(a)) <= 1e-15);
  CHECK(amplitude_beyond_band_limit(a) <= 1e-15);
  const auto high = ScalarField::from_function(g, [](auto x) { return std::cos(2 * kPi * 9 * x[0]); });
  CHECK(amplitude_beyond_band_limit(high) == doctest::Approx(0.5));
}

TEST_CASE("snapshots round-trip bit-exactly") {
  const TorusGrid g = make_grid(1, {16, 8}, {2.0, 0.5});
  const ScalarField u = random_band_limited(g, 9) + 1.0 / 3.0;
  std::stringstream ss;
  write_snapshot(ss, u);
  const ScalarField back = read_snapshot(ss);
  CHECK(back.grid() == g);
  CHECK(std::equal(u.values().begin(), u.values().end(), back.values().begin()));

  std::istringstream bad("torus n=1 axes=8,8 periods=1,1\n1.0\nnot-a-number\n");
  CHECK(code_of([&] { read_snapshot(bad); }) == ErrorCode::BadSnapshot);
  std::istringstream short_file("torus n=1 axes=8,8 periods=1,1\n1.0\n");
  CHECK(code_of([&] { read_snapshot(short_file); }) == ErrorCode::BadSnapshot);
}
