#include "nfield/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nfield/error.hpp"

namespace nfield {

GridSpec::GridSpec(std::vector<std::size_t> counts, std::vector<double> spacing,
                   std::vector<double> origin)
    : counts_(std::move(counts)), spacing_(std::move(spacing)), origin_(std::move(origin)) {
  const std::size_t n = counts_.size();
  if (n < 1 || n > 3) throw ParameterError("grid dimension must be 1, 2 or 3");
  if (spacing_.size() != n || origin_.size() != n)
    throw ShapeError("grid counts, spacing and origin must have one entry per axis");
  for (std::size_t i = 0; i < n; ++i) {
    if (counts_[i] < 3) throw ParameterError("grid needs at least 3 points per axis");
    if (!(spacing_[i] > 0.0) || !std::isfinite(spacing_[i]))
      throw ParameterError("grid spacing must be positive and finite");
    if (!std::isfinite(origin_[i])) throw ParameterError("grid origin must be finite");
  }
}

GridSpec GridSpec::centered(std::size_t dim, std::size_t points, double half_width) {
  if (points < 3) throw ParameterError("grid needs at least 3 points per axis");
  if (!(half_width > 0.0)) throw ParameterError("half width must be positive");
  const double h = 2.0 * half_width / static_cast<double>(points - 1);
  return GridSpec(std::vector<std::size_t>(dim, points), std::vector<double>(dim, h),
                  std::vector<double>(dim, -half_width));
}

std::size_t GridSpec::size() const noexcept {
  std::size_t n = 1;
  for (auto c : counts_) n *= c;
  return n;
}

double GridSpec::half_width(std::size_t axis) const {
  return static_cast<double>(counts_[axis] - 1) * spacing_[axis] / 2.0;
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (double s : spacing_) v *= s;
  return v;
}

void GridSpec::require_unit_margin() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (half_width(i) < 2.0)
      throw ParameterError("box half-width along axis " + std::to_string(i) +
                           " is below 2; no region at distance >= 1 from the boundary");
  }
}

std::array<std::size_t, 3> GridSpec::shape3() const noexcept {
  std::array<std::size_t, 3> s{1, 1, 1};
  const std::size_t off = 3 - dim();
  for (std::size_t i = 0; i < dim(); ++i) s[off + i] = counts_[i];
  return s;
}

void GridSpec::point(std::size_t index, std::span<double> x) const {
  for (std::size_t i = dim(); i-- > 0;) {
    const std::size_t k = index % counts_[i];
    index /= counts_[i];
    x[i] = coordinate(i, k);
  }
}

Field::Field(GridSpec g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size())
    throw ShapeError("field has " + std::to_string(values.size()) + " values, grid has " +
                     std::to_string(grid.size()) + " points");
}

Field Field::constant(const GridSpec& g, double c) {
  return Field(g, std::vector<double>(g.size(), c));
}

Field Field::sample(const GridSpec& g, const std::function<double(std::span<const double>)>& fn) {
  std::vector<double> v(g.size());
  std::array<double, 3> x{};
  std::span<double> xs(x.data(), g.dim());
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.point(i, xs);
    v[i] = fn(xs);
  }
  return Field(g, std::move(v));
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericError(std::string(what) + " contains a non-finite value");
}

std::vector<double> trapezoid_weights(const GridSpec& grid) {
  const auto shape = grid.shape3();
  const std::size_t off = 3 - grid.dim();
  std::array<std::vector<double>, 3> axis;
  for (std::size_t a = 0; a < 3; ++a) {
    if (a < off) {
      axis[a] = {1.0};
      continue;
    }
    const double h = grid.spacing()[a - off];
    axis[a].assign(shape[a], h);
    axis[a].front() *= 0.5;
    axis[a].back() *= 0.5;
  }
  std::vector<double> w(grid.size());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t j = 0; j < shape[1]; ++j) {
      const double wij = axis[0][i] * axis[1][j];
      for (std::size_t k = 0; k < shape[2]; ++k) w[idx++] = wij * axis[2][k];
    }
  return w;
}

double quadrature(const Field& field, std::optional<std::span<const double>> weight_samples) {
  if (weight_samples && weight_samples->size() != field.values.size())
    throw ShapeError("weight samples length " + std::to_string(weight_samples->size()) +
                     " does not match field length " + std::to_string(field.values.size()));
  require_finite(field.values, "field");
  if (weight_samples) require_finite(*weight_samples, "weight samples");

  const auto w = trapezoid_weights(field.grid);
  double sum = 0.0;
  if (weight_samples) {
    for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * field.values[i] * (*weight_samples)[i];
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * field.values[i];
  }
  return sum;
}

std::vector<bool> interior_mask(const GridSpec& grid, double margin) {
  if (!(margin >= 0.0)) throw ParameterError("interior margin must be nonnegative");
  // Per axis, the index range [lo, hi] at distance >= margin from both box faces.
  std::array<std::size_t, 3> lo{0, 0, 0}, hi{0, 0, 0};
  const auto shape = grid.shape3();
  const std::size_t off = 3 - grid.dim();
  for (std::size_t a = 0; a < 3; ++a) {
    if (a < off) continue;
    const std::size_t i = a - off;
    const double h = grid.spacing()[i];
    const std::size_t n = grid.counts()[i];
    const double length = static_cast<double>(n - 1) * h;
    if (margin >= length / 2.0 + 1e-12 * length)
      throw EmptyInteriorError("margin " + std::to_string(margin) +
                               " leaves no interior along axis " + std::to_string(i));
    // Smallest k with k*h >= margin, tolerant to rounding in margin/h.
    auto k = static_cast<std::size_t>(std::ceil(margin / h - 1e-9));
    if (k > n - 1 - k)
      throw EmptyInteriorError("margin " + std::to_string(margin) +
                               " leaves no interior along axis " + std::to_string(i));
    lo[a] = k;
    hi[a] = n - 1 - k;
  }
  std::vector<bool> mask(grid.size(), false);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t j = 0; j < shape[1]; ++j)
      for (std::size_t k = 0; k < shape[2]; ++k, ++idx)
        mask[idx] = i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1] && k >= lo[2] && k <= hi[2];
  return mask;
}

double sup_norm(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace nfield
