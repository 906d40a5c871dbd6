#pragma once

// Flat torus of unit volume with 2n real axes, sampled on a uniform periodic
// grid, and real scalar fields living on it.
//
// Node layout is row-major with the last axis varying fastest. Node i along
// axis a sits at x_a = i * L_a / N_a.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace chernflow {

namespace detail {
class Spectral;
}

class TorusGrid {
 public:
  int complex_dim() const noexcept;
  int axes() const noexcept;
  std::span<const int> points() const noexcept;
  std::span<const double> periods() const noexcept;
  std::size_t size() const noexcept;

  double spacing(int axis) const;
  double min_spacing() const noexcept;
  // (product of periods) / (number of nodes): the quadrature weight of every node.
  double cell_volume() const noexcept;
  double coordinate(int axis, int index) const;
  std::size_t stride(int axis) const;
  void node_coordinates(std::size_t node, std::span<double> x) const;

  // "n=<n> axes=<p1,...> periods=<L1,...>", periods printed with 17 significant digits.
  std::string describe() const;

  // Identical dimension, resolutions and periods.
  bool operator==(const TorusGrid& other) const noexcept;

  const detail::Spectral& spectral() const noexcept;

 private:
  struct Data;
  explicit TorusGrid(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;

  friend TorusGrid make_grid(int, std::vector<int>, std::vector<double>);
};

// Throws Error(BadResolution) for wrong list lengths, odd or < 8 axis counts;
// Error(VolumeNotOne) if the periods' product differs from 1 by more than 1e-12.
TorusGrid make_grid(int complex_dim, std::vector<int> points_per_axis, std::vector<double> periods);
// Same resolution on every axis, unit periods.
TorusGrid make_grid(int complex_dim, int points_per_axis);

class ScalarField {
 public:
  // Throws Error(BadResolution) on a size mismatch and Error(NonFinite) on any
  // non-finite value.
  ScalarField(TorusGrid grid, std::vector<double> values);

  static ScalarField constant(const TorusGrid& grid, double value);

  // fn is called with the coordinates of every node.
  template <class Fn>
  static ScalarField from_function(const TorusGrid& grid, Fn&& fn) {
    std::vector<double> values(grid.size());
    std::vector<double> x(static_cast<std::size_t>(grid.axes()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      grid.node_coordinates(i, x);
      values[i] = fn(std::span<const double>(x));
    }
    return ScalarField(grid, std::move(values));
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double min() const noexcept;
  double max() const noexcept;
  double sup_norm() const noexcept;

  template <class Fn>
  ScalarField map(Fn&& fn) const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(values_[i]);
    return ScalarField(grid_, std::move(out));
  }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator+(const ScalarField& a, double c);
  friend ScalarField operator-(const ScalarField& a, double c);
  friend ScalarField operator*(double c, const ScalarField& a);
  friend ScalarField operator-(const ScalarField& a);

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

// Throws Error(GridMismatch) unless both fields live on identical grids.
void require_same_grid(const ScalarField& a, const ScalarField& b);

// ∫ u dμ = (Π L_a / #nodes) Σ u_i.
double integrate(const ScalarField& field);

// Pseudo-spectral Laplacian. Eigenvalue of exp(2πi k·x/L) is -(2π)² Σ (k_a/L_a)²,
// including the Nyquist modes. The mean of the output is exactly removed.
ScalarField laplacian(const ScalarField& field);

// Second-order centred differences with periodic wrap.
ScalarField laplacian_fd(const ScalarField& field);

// Spectral ∂u/∂x_axis; the Nyquist mode's derivative is set to zero.
ScalarField partial_derivative(const ScalarField& field, int axis);

// Σ_a (∂u/∂x_a)² with spectral derivatives.
ScalarField grad_norm_sq(const ScalarField& field);

// Band limit used throughout: Fourier modes |k_a| <= N_a / 6 (a third of Nyquist).
int band_limit(const TorusGrid& grid, int axis);

// Largest Fourier amplitude |c_k| (u = Σ c_k e^{2πi k·x/L}) over modes with
// some |k_a| above band_limit(grid, a).
double amplitude_beyond_band_limit(const ScalarField& field);

}  // namespace chernflow
