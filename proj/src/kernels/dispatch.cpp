#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "chernflow/kernels.hpp"

namespace chernflow::kernels {

const Table& scalar_table();
#if defined(CHERNFLOW_HAVE_AVX2)
const Table& avx2_table();
#endif

namespace {

Isa detect_best() noexcept {
#if defined(CHERNFLOW_HAVE_AVX2)
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("CHERNFLOW_ISA")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return detect_best();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(CHERNFLOW_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

const Table& table(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
  }
#if defined(CHERNFLOW_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

const Table& active() noexcept {
#if defined(CHERNFLOW_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

void select_isa(Isa isa) {
  (void)table(isa);
  current().store(isa, std::memory_order_relaxed);
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernels::dot: size mismatch");
  return active().dot(x.data(), y.data(), x.size());
}

double min(std::span<const double> x) { return active().min(x.data(), x.size()); }
double max(std::span<const double> x) { return active().max(x.data(), x.size()); }
double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

void exp_scaled(std::span<double> out, std::span<const double> x, double scale) {
  if (out.size() != x.size()) throw std::invalid_argument("kernels::exp_scaled: size mismatch");
  active().exp_scaled(out.data(), x.data(), scale, x.size());
}

void axpy(std::span<double> out, std::span<const double> x, double a, std::span<const double> y) {
  if (out.size() != x.size() || x.size() != y.size()) {
    throw std::invalid_argument("kernels::axpy: size mismatch");
  }
  active().axpy(out.data(), x.data(), a, y.data(), x.size());
}

void mul(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  if (out.size() != x.size() || x.size() != y.size()) {
    throw std::invalid_argument("kernels::mul: size mismatch");
  }
  active().mul(out.data(), x.data(), y.data(), x.size());
}

}  // namespace chernflow::kernels
