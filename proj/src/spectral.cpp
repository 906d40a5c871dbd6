#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "chernflow/kernels.hpp"

namespace chernflow::detail {
namespace {

// The FFTW planner is not re-entrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool fftw_aligned(const void* p) {
  return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0;
}

}  // namespace

Spectral::Spectral(std::span<const int> points, std::span<const double> periods)
    : axes_(static_cast<int>(points.size())) {
  if (points.empty() || points.size() != periods.size()) {
    throw std::invalid_argument("Spectral: axis lists must be non-empty and of equal length");
  }
  real_size_ = 1;
  for (int p : points) real_size_ *= static_cast<std::size_t>(p);
  const int last = points.back();
  const std::size_t last_half = static_cast<std::size_t>(last / 2 + 1);
  complex_size_ = real_size_ / static_cast<std::size_t>(last) * last_half;

  {
    std::lock_guard lock(planner_mutex());
    RealBuffer r(real_size_);
    ComplexBuffer c(complex_size_);
    auto* cr = reinterpret_cast<fftw_complex*>(c.data());
    forward_plan_ = fftw_plan_dft_r2c(axes_, points.data(), r.data(), cr, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r(axes_, points.data(), cr, r.data(), FFTW_ESTIMATE);
  }
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("Spectral: FFTW planning failed");
  }

  const double two_pi = 2.0 * std::numbers::pi;
  lap_symbol_.assign(complex_size_, 0.0);
  lap_multiplier_.assign(complex_size_, 0.0);
  derivative_.assign(complex_size_ * static_cast<std::size_t>(axes_), 0.0);
  wavenumber_.assign(complex_size_ * static_cast<std::size_t>(axes_), 0);
  doubled_.assign(complex_size_, 0);

  // Half-spectrum extents: full on every axis but the last.
  std::vector<std::size_t> extent(points.begin(), points.end());
  extent.back() = last_half;
  std::vector<std::size_t> idx(static_cast<std::size_t>(axes_), 0);
  const double inv_n = 1.0 / static_cast<double>(real_size_);
  for (std::size_t c = 0; c < complex_size_; ++c) {
    double lam = 0.0;
    for (int a = 0; a < axes_; ++a) {
      const int n = points[static_cast<std::size_t>(a)];
      const int i = static_cast<int>(idx[static_cast<std::size_t>(a)]);
      const int k = (i <= n / 2) ? i : i - n;
      const double kw = two_pi * static_cast<double>(k) / periods[static_cast<std::size_t>(a)];
      lam -= kw * kw;
      wavenumber_[static_cast<std::size_t>(a) * complex_size_ + c] = k;
      derivative_[static_cast<std::size_t>(a) * complex_size_ + c] = (2 * i == n) ? 0.0 : kw;
    }
    lap_symbol_[c] = lam;
    lap_multiplier_[c] = (c == 0) ? 0.0 : lam * inv_n;
    const std::size_t kl = idx.back();
    doubled_[c] = (kl != 0 && 2 * kl != static_cast<std::size_t>(last)) ? 1 : 0;

    for (int a = axes_ - 1; a >= 0; --a) {
      const auto ua = static_cast<std::size_t>(a);
      if (++idx[ua] < extent[ua]) break;
      idx[ua] = 0;
    }
  }
  spectral_radius_ = 0.0;
  for (int a = 0; a < axes_; ++a) {
    const double kn = std::numbers::pi * points[static_cast<std::size_t>(a)] / periods[static_cast<std::size_t>(a)];
    spectral_radius_ += kn * kn;
  }
}

Spectral::~Spectral() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(forward_plan_);
  if (inverse_plan_ != nullptr) fftw_destroy_plan(inverse_plan_);
}

std::span<const double> Spectral::derivative_symbol(int axis) const {
  if (axis < 0 || axis >= axes_) throw std::out_of_range("Spectral: axis out of range");
  return {derivative_.data() + static_cast<std::size_t>(axis) * complex_size_, complex_size_};
}

std::span<const int> Spectral::wavenumber(int axis) const {
  if (axis < 0 || axis >= axes_) throw std::out_of_range("Spectral: axis out of range");
  return {wavenumber_.data() + static_cast<std::size_t>(axis) * complex_size_, complex_size_};
}

void Spectral::forward(std::span<const double> in, ComplexBuffer& out) const {
  if (in.size() != real_size_) throw std::invalid_argument("Spectral::forward: size mismatch");
  out.resize(complex_size_);
  auto* co = reinterpret_cast<fftw_complex*>(out.data());
  if (fftw_aligned(in.data())) {
    fftw_execute_dft_r2c(forward_plan_, const_cast<double*>(in.data()), co);
  } else {
    RealBuffer tmp(in.begin(), in.end());
    fftw_execute_dft_r2c(forward_plan_, tmp.data(), co);
  }
}

void Spectral::inverse(ComplexBuffer& in, std::span<double> out) const {
  if (in.size() != complex_size_ || out.size() != real_size_) {
    throw std::invalid_argument("Spectral::inverse: size mismatch");
  }
  auto* ci = reinterpret_cast<fftw_complex*>(in.data());
  if (fftw_aligned(out.data())) {
    fftw_execute_dft_c2r(inverse_plan_, ci, out.data());
  } else {
    RealBuffer tmp(real_size_);
    fftw_execute_dft_c2r(inverse_plan_, ci, tmp.data());
    std::copy(tmp.begin(), tmp.end(), out.begin());
  }
}

void Spectral::apply_laplacian(std::span<const double> in, std::span<double> out,
                               ComplexBuffer& scratch) const {
  forward(in, scratch);
  kernels::active().scale_complex(reinterpret_cast<double*>(scratch.data()), lap_multiplier_.data(),
                                  complex_size_);
  inverse(scratch, out);
}

}  // namespace chernflow::detail
