#include "chernflow/torus.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <sstream>

#include "chernflow/error.hpp"
#include "chernflow/kernels.hpp"
#include "spectral.hpp"

namespace chernflow {

struct TorusGrid::Data {
  int complex_dim = 0;
  std::vector<int> points;
  std::vector<double> periods;
  std::vector<std::size_t> strides;
  std::size_t size = 0;
  double cell_volume = 0.0;
  std::unique_ptr<detail::Spectral> spectral;
};

TorusGrid::TorusGrid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

TorusGrid make_grid(int complex_dim, std::vector<int> points, std::vector<double> periods) {
  if (complex_dim < 1) throw Error(ErrorCode::BadResolution, "complex dimension must be >= 1");
  const std::size_t axes = 2 * static_cast<std::size_t>(complex_dim);
  if (points.size() != axes || periods.size() != axes) {
    throw Error(ErrorCode::BadResolution,
                "expected " + std::to_string(axes) + " axis resolutions and periods");
  }
  for (int p : points) {
    if (p < 8 || p % 2 != 0) {
      throw Error(ErrorCode::BadResolution,
                  "points per axis must be even and >= 8, got " + std::to_string(p));
    }
  }
  double volume = 1.0;
  for (double l : periods) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw Error(ErrorCode::VolumeNotOne, "periods must be positive and finite");
    }
    volume *= l;
  }
  if (std::fabs(volume - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "product of periods is " << volume << ", expected 1";
    throw Error(ErrorCode::VolumeNotOne, os.str());
  }

  auto data = std::make_shared<TorusGrid::Data>();
  data->complex_dim = complex_dim;
  data->points = std::move(points);
  data->periods = std::move(periods);
  data->strides.assign(axes, 1);
  for (std::size_t a = axes - 1; a > 0; --a) {
    data->strides[a - 1] = data->strides[a] * static_cast<std::size_t>(data->points[a]);
  }
  data->size = data->strides[0] * static_cast<std::size_t>(data->points[0]);
  data->cell_volume = volume / static_cast<double>(data->size);
  data->spectral = std::make_unique<detail::Spectral>(data->points, data->periods);
  return TorusGrid(std::move(data));
}

TorusGrid make_grid(int complex_dim, int points_per_axis) {
  const std::size_t axes = 2 * static_cast<std::size_t>(std::max(complex_dim, 0));
  return make_grid(complex_dim, std::vector<int>(axes, points_per_axis), std::vector<double>(axes, 1.0));
}

int TorusGrid::complex_dim() const noexcept { return data_->complex_dim; }
int TorusGrid::axes() const noexcept { return static_cast<int>(data_->points.size()); }
std::span<const int> TorusGrid::points() const noexcept { return data_->points; }
std::span<const double> TorusGrid::periods() const noexcept { return data_->periods; }
std::size_t TorusGrid::size() const noexcept { return data_->size; }
double TorusGrid::cell_volume() const noexcept { return data_->cell_volume; }
const detail::Spectral& TorusGrid::spectral() const noexcept { return *data_->spectral; }

double TorusGrid::spacing(int axis) const {
  const auto a = static_cast<std::size_t>(axis);
  return data_->periods.at(a) / data_->points.at(a);
}

double TorusGrid::min_spacing() const noexcept {
  double h = spacing(0);
  for (int a = 1; a < axes(); ++a) h = std::min(h, spacing(a));
  return h;
}

double TorusGrid::coordinate(int axis, int index) const { return index * spacing(axis); }

std::size_t TorusGrid::stride(int axis) const { return data_->strides.at(static_cast<std::size_t>(axis)); }

void TorusGrid::node_coordinates(std::size_t node, std::span<double> x) const {
  for (int a = 0; a < axes(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const auto idx = static_cast<int>((node / data_->strides[ua]) % static_cast<std::size_t>(data_->points[ua]));
    x[ua] = coordinate(a, idx);
  }
}

namespace {

std::string format17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string TorusGrid::describe() const {
  std::string s = "n=" + std::to_string(complex_dim()) + " axes=";
  for (std::size_t a = 0; a < data_->points.size(); ++a) {
    if (a) s += ',';
    s += std::to_string(data_->points[a]);
  }
  s += " periods=";
  for (std::size_t a = 0; a < data_->periods.size(); ++a) {
    if (a) s += ',';
    s += format17(data_->periods[a]);
  }
  return s;
}

bool TorusGrid::operator==(const TorusGrid& other) const noexcept {
  if (data_ == other.data_) return true;
  return data_->complex_dim == other.data_->complex_dim && data_->points == other.data_->points &&
         data_->periods == other.data_->periods;
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(TorusGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::BadResolution, "field has " + std::to_string(values_.size()) +
                                              " values for a grid of " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "field values must be finite");
  }
}

ScalarField ScalarField::constant(const TorusGrid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

double ScalarField::min() const noexcept { return kernels::min(values_); }
double ScalarField::max() const noexcept { return kernels::max(values_); }
double ScalarField::sup_norm() const noexcept { return kernels::max_abs(values_); }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorCode::GridMismatch, "fields live on different grids (" + a.grid().describe() +
                                             " vs " + b.grid().describe() + ")");
  }
}

namespace {

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return ScalarField(a.grid(), std::move(out));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}
ScalarField operator+(const ScalarField& a, double c) {
  return a.map([c](double x) { return x + c; });
}
ScalarField operator-(const ScalarField& a, double c) {
  return a.map([c](double x) { return x - c; });
}
ScalarField operator*(double c, const ScalarField& a) {
  return a.map([c](double x) { return c * x; });
}
ScalarField operator-(const ScalarField& a) {
  return a.map([](double x) { return -x; });
}

// ---------------------------------------------------------------------------

double integrate(const ScalarField& field) {
  return field.grid().cell_volume() * kernels::sum(field.values());
}

ScalarField laplacian(const ScalarField& field) {
  const auto& sp = field.grid().spectral();
  std::vector<double> out(field.size());
  detail::ComplexBuffer scratch;
  sp.apply_laplacian(field.values(), out, scratch);
  return ScalarField(field.grid(), std::move(out));
}

ScalarField laplacian_fd(const ScalarField& field) {
  const TorusGrid& g = field.grid();
  const auto v = field.values();
  std::vector<double> out(field.size(), 0.0);
  for (int a = 0; a < g.axes(); ++a) {
    const std::size_t stride = g.stride(a);
    const auto n = static_cast<std::size_t>(g.points()[static_cast<std::size_t>(a)]);
    const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::size_t pos = (i / stride) % n;
      const std::size_t base = i - pos * stride;
      const std::size_t up = base + ((pos + 1) % n) * stride;
      const std::size_t down = base + ((pos + n - 1) % n) * stride;
      out[i] += (v[up] - 2.0 * v[i] + v[down]) * inv_h2;
    }
  }
  return ScalarField(g, std::move(out));
}

ScalarField partial_derivative(const ScalarField& field, int axis) {
  const auto& sp = field.grid().spectral();
  detail::ComplexBuffer spec;
  sp.forward(field.values(), spec);
  const auto k = sp.derivative_symbol(axis);
  const double inv_n = 1.0 / static_cast<double>(sp.real_size());
  for (std::size_t c = 0; c < spec.size(); ++c) {
    spec[c] = std::complex<double>(0.0, k[c] * inv_n) * spec[c];
  }
  std::vector<double> out(field.size());
  sp.inverse(spec, out);
  return ScalarField(field.grid(), std::move(out));
}

ScalarField grad_norm_sq(const ScalarField& field) {
  const auto& sp = field.grid().spectral();
  detail::ComplexBuffer spec;
  sp.forward(field.values(), spec);
  const double inv_n = 1.0 / static_cast<double>(sp.real_size());
  std::vector<double> acc(field.size(), 0.0);
  std::vector<double> d(field.size());
  detail::ComplexBuffer work(spec.size());
  for (int a = 0; a < field.grid().axes(); ++a) {
    const auto k = sp.derivative_symbol(a);
    for (std::size_t c = 0; c < spec.size(); ++c) {
      work[c] = std::complex<double>(0.0, k[c] * inv_n) * spec[c];
    }
    sp.inverse(work, d);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += d[i] * d[i];
  }
  return ScalarField(field.grid(), std::move(acc));
}

int band_limit(const TorusGrid& grid, int axis) {
  return grid.points()[static_cast<std::size_t>(axis)] / 6;
}

double amplitude_beyond_band_limit(const ScalarField& field) {
  const TorusGrid& g = field.grid();
  const auto& sp = g.spectral();
  detail::ComplexBuffer spec;
  sp.forward(field.values(), spec);
  const double inv_n = 1.0 / static_cast<double>(sp.real_size());
  double worst = 0.0;
  for (std::size_t c = 0; c < spec.size(); ++c) {
    bool outside = false;
    for (int a = 0; a < g.axes() && !outside; ++a) {
      outside = std::abs(sp.wavenumber(a)[c]) > band_limit(g, a);
    }
    if (outside) worst = std::max(worst, std::abs(spec[c]) * inv_n);
  }
  return worst;
}

}  // namespace chernflow
