#pragma once

// FFTW-backed real-to-complex transforms and the Fourier symbols of the
// operators on one grid geometry. Plans are created with FFTW_ESTIMATE so the
// chosen algorithm, and therefore every rounding, is reproducible.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace chernflow::detail {

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using RealBuffer = std::vector<double, FftwAllocator<double>>;
using ComplexBuffer = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

class Spectral {
 public:
  Spectral(std::span<const int> points, std::span<const double> periods);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  std::size_t real_size() const noexcept { return real_size_; }
  std::size_t complex_size() const noexcept { return complex_size_; }

  // Unnormalised forward transform; `in` is preserved.
  void forward(std::span<const double> in, ComplexBuffer& out) const;
  // Unnormalised inverse transform; `in` is destroyed.
  void inverse(ComplexBuffer& in, std::span<double> out) const;

  // -(2π)² Σ (k_a/L_a)² per half-spectrum index.
  std::span<const double> laplacian_symbol() const noexcept { return lap_symbol_; }
  // laplacian_symbol() / real_size(), with the zero mode exactly 0.
  std::span<const double> laplacian_multiplier() const noexcept { return lap_multiplier_; }
  // 2π k_a / L_a, zero on the Nyquist index of that axis.
  std::span<const double> derivative_symbol(int axis) const;
  // Signed integer wavenumber k_a per half-spectrum index.
  std::span<const int> wavenumber(int axis) const;
  // Flags half-spectrum indices whose conjugate partner is implicit (counted twice in Parseval).
  std::span<const unsigned char> doubled() const noexcept { return doubled_; }
  // max |laplacian_symbol|.
  double spectral_radius() const noexcept { return spectral_radius_; }

  // out = Δ in via the spectrum; scratch is resized as needed.
  void apply_laplacian(std::span<const double> in, std::span<double> out, ComplexBuffer& scratch) const;

 private:
  std::size_t real_size_ = 0;
  std::size_t complex_size_ = 0;
  int axes_ = 0;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan inverse_plan_ = nullptr;
  std::vector<double> lap_symbol_;
  std::vector<double> lap_multiplier_;
  std::vector<double> derivative_;  // axes_ blocks of complex_size_
  std::vector<int> wavenumber_;     // axes_ blocks of complex_size_
  std::vector<unsigned char> doubled_;
  double spectral_radius_ = 0.0;
};

}  // namespace chernflow::detail
