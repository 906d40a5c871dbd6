#pragma once

// Node-wise arithmetic kernels used by the calculus and time-stepping hot
// paths. Each instruction set provides the same table of functions; the
// active table is chosen once at startup from the CPU features (override with
// CHERNFLOW_ISA=scalar|avx2) and can be switched explicitly for testing.
//
// All variants are bit-identical. Reductions accumulate in four interleaved
// lanes (lane j sees indices i with i % 4 == j over the largest multiple of
// four), combine them as (l0 + l1) + (l2 + l3), then add the tail in index
// order. No fused multiply-add is used anywhere.

#include <cstddef>
#include <span>
#include <string_view>

namespace chernflow::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*min)(const double* x, std::size_t n);
  double (*max)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // out[i] = exp(scale * x[i]); at most a few ulp from the correctly rounded value.
  void (*exp_scaled)(double* out, const double* x, double scale, std::size_t n);
  // out[i] = x[i] + a * y[i]
  void (*axpy)(double* out, const double* x, double a, const double* y, std::size_t n);
  // out[i] = x[i] * y[i]
  void (*mul)(double* out, const double* x, const double* y, std::size_t n);
  // z holds n_complex interleaved (re, im) pairs; both parts of pair k are scaled by m[k].
  void (*scale_complex)(double* z, const double* m, std::size_t n_complex);
  // out[i] = half_n * ((lap[i] - s0[i]) + f[i] * w[i]) / w[i]
  void (*flow_rhs)(double* out, const double* lap, const double* s0, const double* f,
                   const double* w, double half_n, std::size_t n);
  // out[i] = u[i] + (dt / 6) * (((k1[i] + 2 k2[i]) + 2 k3[i]) + k4[i])
  void (*rk4_combine)(double* out, const double* u, const double* k1, const double* k2,
                      const double* k3, const double* k4, double dt, std::size_t n);
};

const Table& table(Isa isa);
bool isa_available(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

Isa active_isa() noexcept;
const Table& active() noexcept;
// Throws std::invalid_argument if the CPU lacks the requested set.
void select_isa(Isa isa);

// Span conveniences over the active table.
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double min(std::span<const double> x);
double max(std::span<const double> x);
double max_abs(std::span<const double> x);
void exp_scaled(std::span<double> out, std::span<const double> x, double scale);
void axpy(std::span<double> out, std::span<const double> x, double a, std::span<const double> y);
void mul(std::span<double> out, std::span<const double> x, std::span<const double> y);

}  // namespace chernflow::kernels
