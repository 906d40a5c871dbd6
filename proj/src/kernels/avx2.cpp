// AVX2 kernels. Compiled with -mavx2 only (no FMA) so every lane performs the
// exact operation sequence of the scalar reference.

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "chernflow/kernels.hpp"
#include "exp_constants.hpp"

namespace chernflow::kernels {
namespace {

double lanes_sum(__m256d acc) {
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = lanes_sum(acc);
  for (std::size_t i = body; i < n; ++i) s = s + x[i];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double s = lanes_sum(acc);
  for (std::size_t i = body; i < n; ++i) s = s + x[i] * y[i];
  return s;
}

inline double pick_min(double a, double b) { return a < b ? a : b; }
inline double pick_max(double a, double b) { return a > b ? a : b; }

double min_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  double s = pick_min(pick_min(l[0], l[1]), pick_min(l[2], l[3]));
  for (std::size_t i = body; i < n; ++i) s = pick_min(s, x[i]);
  return s;
}

double max_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  double s = pick_max(pick_max(l[0], l[1]), pick_max(l[2], l[3]));
  for (std::size_t i = body; i < n; ++i) s = pick_max(s, x[i]);
  return s;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  }
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  double s = pick_max(pick_max(l[0], l[1]), pick_max(l[2], l[3]));
  for (std::size_t i = body; i < n; ++i) s = pick_max(s, std::fabs(x[i]));
  return s;
}

__m256d pow2i(__m128i k) {
  const __m256i biased = _mm256_add_epi64(_mm256_cvtepi32_epi64(k), _mm256_set1_epi64x(1023));
  return _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
}

__m256d exp4(__m256d x) {
  using namespace detail;
  const __m256d hi = _mm256_set1_pd(kExpHi);
  const __m256d lo = _mm256_set1_pd(kExpLo);
  const __m256d is_nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  const __m256d too_big = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  const __m256d too_small = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  // Clamp so the integer conversion below stays in range; masked lanes are
  // overwritten at the end.
  __m256d xc = _mm256_min_pd(x, hi);
  xc = _mm256_max_pd(xc, lo);
  xc = _mm256_blendv_pd(xc, _mm256_setzero_pd(), is_nan);

  const __m256d kd = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kInvLn2)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_sub_pd(_mm256_sub_pd(xc, _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Hi))),
                                  _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Lo)));
  __m256d p = _mm256_set1_pd(kExpPoly[0]);
  for (int j = 1; j < 14; ++j) {
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kExpPoly[j]));
  }
  const __m128i k = _mm256_cvtpd_epi32(kd);
  const __m128i k1 = _mm_srai_epi32(k, 1);
  const __m128i k2 = _mm_sub_epi32(k, k1);
  __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, pow2i(k1)), pow2i(k2));

  res = _mm256_blendv_pd(res, _mm256_set1_pd(std::numeric_limits<double>::infinity()), too_big);
  res = _mm256_blendv_pd(res, _mm256_setzero_pd(), too_small);
  res = _mm256_blendv_pd(res, x, is_nan);
  return res;
}

const Table& scalar_fallback();

void exp_scaled_avx2(double* out, const double* x, double scale, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    _mm256_storeu_pd(out + i, exp4(_mm256_mul_pd(s, _mm256_loadu_pd(x + i))));
  }
  if (body < n) scalar_fallback().exp_scaled(out + body, x + body, scale, n - body);
}

void axpy_avx2(double* out, const double* x, double a, const double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i),
                                            _mm256_mul_pd(av, _mm256_loadu_pd(y + i))));
  }
  for (std::size_t i = body; i < n; ++i) out[i] = x[i] + a * y[i];
}

void mul_avx2(double* out, const double* x, const double* y, std::size_t n) {
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (std::size_t i = body; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_complex_avx2(double* z, const double* m, std::size_t n_complex) {
  const std::size_t body = n_complex - n_complex % 2;
  for (std::size_t k = 0; k < body; k += 2) {
    const __m256d mm = _mm256_set_pd(m[k + 1], m[k + 1], m[k], m[k]);
    _mm256_storeu_pd(z + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(z + 2 * k), mm));
  }
  for (std::size_t k = body; k < n_complex; ++k) {
    z[2 * k] = z[2 * k] * m[k];
    z[2 * k + 1] = z[2 * k + 1] * m[k];
  }
}

void flow_rhs_avx2(double* out, const double* lap, const double* s0, const double* f,
                   const double* w, double half_n, std::size_t n) {
  const __m256d h = _mm256_set1_pd(half_n);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w + i);
    __m256d t = _mm256_sub_pd(_mm256_loadu_pd(lap + i), _mm256_loadu_pd(s0 + i));
    t = _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(f + i), wv));
    t = _mm256_div_pd(t, wv);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(h, t));
  }
  for (std::size_t i = body; i < n; ++i) {
    double t = lap[i] - s0[i];
    t = t + f[i] * w[i];
    t = t / w[i];
    out[i] = half_n * t;
  }
}

void rk4_combine_avx2(double* out, const double* u, const double* k1, const double* k2,
                      const double* k3, const double* k4, double dt, std::size_t n) {
  const double c = dt / 6.0;
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d two = _mm256_set1_pd(2.0);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
    s = _mm256_add_pd(s, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)));
    s = _mm256_add_pd(s, _mm256_loadu_pd(k4 + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(u + i), _mm256_mul_pd(cv, s)));
  }
  for (std::size_t i = body; i < n; ++i) {
    double s = k1[i] + 2.0 * k2[i];
    s = s + 2.0 * k3[i];
    s = s + k4[i];
    out[i] = u[i] + c * s;
  }
}

}  // namespace

const Table& scalar_table();

namespace {
const Table& scalar_fallback() { return scalar_table(); }
}  // namespace

const Table& avx2_table() {
  static const Table t{sum_avx2,          dot_avx2,         min_avx2,
                       max_avx2,          max_abs_avx2,     exp_scaled_avx2,
                       axpy_avx2,         mul_avx2,         scale_complex_avx2,
                       flow_rhs_avx2,     rk4_combine_avx2};
  return t;
}

}  // namespace chernflow::kernels
