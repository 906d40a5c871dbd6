// Scalar reference kernels. These define the results every SIMD variant must
// reproduce bit for bit.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "chernflow/kernels.hpp"
#include "exp_constants.hpp"

namespace chernflow::kernels {
namespace {

double combine_lanes(const double (&l)[4]) { return (l[0] + l[1]) + (l[2] + l[3]); }

double sum_scalar(const double* x, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (int j = 0; j < 4; ++j) l[j] = l[j] + x[i + j];
  }
  double s = combine_lanes(l);
  for (std::size_t i = body; i < n; ++i) s = s + x[i];
  return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (int j = 0; j < 4; ++j) l[j] = l[j] + x[i + j] * y[i + j];
  }
  double s = combine_lanes(l);
  for (std::size_t i = body; i < n; ++i) s = s + x[i] * y[i];
  return s;
}

// Same selection rule as _mm256_min_pd(a, b): a < b ? a : b.
inline double pick_min(double a, double b) { return a < b ? a : b; }
inline double pick_max(double a, double b) { return a > b ? a : b; }

template <class Pick, class Map>
double reduce_extreme(const double* x, std::size_t n, double init, Pick pick, Map map) {
  double l[4] = {init, init, init, init};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (int j = 0; j < 4; ++j) l[j] = pick(l[j], map(x[i + j]));
  }
  double s = pick(pick(l[0], l[1]), pick(l[2], l[3]));
  for (std::size_t i = body; i < n; ++i) s = pick(s, map(x[i]));
  return s;
}

double min_scalar(const double* x, std::size_t n) {
  return reduce_extreme(x, n, std::numeric_limits<double>::infinity(), pick_min,
                        [](double v) { return v; });
}

double max_scalar(const double* x, std::size_t n) {
  return reduce_extreme(x, n, -std::numeric_limits<double>::infinity(), pick_max,
                        [](double v) { return v; });
}

double max_abs_scalar(const double* x, std::size_t n) {
  return reduce_extreme(x, n, 0.0, pick_max, [](double v) { return std::fabs(v); });
}

double pow2i(std::int64_t k) { return std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52); }

double exp_one(double x) {
  using namespace detail;
  if (std::isnan(x)) return x;
  if (x > kExpHi) return std::numeric_limits<double>::infinity();
  if (x < kExpLo) return 0.0;
  const double kd = std::nearbyint(x * kInvLn2);
  const double r = (x - kd * kLn2Hi) - kd * kLn2Lo;
  double p = kExpPoly[0];
  for (int j = 1; j < 14; ++j) p = p * r + kExpPoly[j];
  const auto k = static_cast<std::int64_t>(kd);
  const std::int64_t k1 = k >> 1;
  const std::int64_t k2 = k - k1;
  return (p * pow2i(k1)) * pow2i(k2);
}

void exp_scaled_scalar(double* out, const double* x, double scale, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_one(scale * x[i]);
}

void axpy_scalar(double* out, const double* x, double a, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
}

void mul_scalar(double* out, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_complex_scalar(double* z, const double* m, std::size_t n_complex) {
  for (std::size_t k = 0; k < n_complex; ++k) {
    z[2 * k] = z[2 * k] * m[k];
    z[2 * k + 1] = z[2 * k + 1] * m[k];
  }
}

void flow_rhs_scalar(double* out, const double* lap, const double* s0, const double* f,
                     const double* w, double half_n, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double t = lap[i] - s0[i];
    t = t + f[i] * w[i];
    t = t / w[i];
    out[i] = half_n * t;
  }
}

void rk4_combine_scalar(double* out, const double* u, const double* k1, const double* k2,
                        const double* k3, const double* k4, double dt, std::size_t n) {
  const double c = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = k1[i] + 2.0 * k2[i];
    s = s + 2.0 * k3[i];
    s = s + k4[i];
    out[i] = u[i] + c * s;
  }
}

}  // namespace

const Table& scalar_table() {
  static const Table t{sum_scalar,         dot_scalar,        min_scalar,
                       max_scalar,         max_abs_scalar,    exp_scaled_scalar,
                       axpy_scalar,        mul_scalar,        scale_complex_scalar,
                       flow_rhs_scalar,    rk4_combine_scalar};
  return t;
}

}  // namespace chernflow::kernels
