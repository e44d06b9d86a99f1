#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace nfield {

/// Uniform tensor grid over a box in R^N, N in {1,2,3}.
///
/// Point k along axis i sits at origin[i] + k * spacing[i]. Values are stored
/// row-major: the last axis varies fastest.
class GridSpec {
 public:
  GridSpec(std::vector<std::size_t> counts, std::vector<double> spacing,
           std::vector<double> origin);

  /// Box [-half_width, half_width]^dim sampled with `points` nodes per axis.
  static GridSpec centered(std::size_t dim, std::size_t points, double half_width);

  std::size_t dim() const noexcept { return counts_.size(); }
  std::size_t size() const noexcept;

  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  const std::vector<double>& spacing() const noexcept { return spacing_; }
  const std::vector<double>& origin() const noexcept { return origin_; }

  double coordinate(std::size_t axis, std::size_t k) const {
    return origin_[axis] + static_cast<double>(k) * spacing_[axis];
  }
  double lower(std::size_t axis) const { return origin_[axis]; }
  double upper(std::size_t axis) const { return coordinate(axis, counts_[axis] - 1); }

  /// counts[i] * spacing[i] / 2.
  double half_width(std::size_t axis) const;

  /// Volume of one grid cell, prod(spacing).
  double cell_volume() const noexcept;

  /// Throws ParameterError unless every axis has half_width >= 2, i.e. the box
  /// keeps a nonempty region at distance >= 1 from its boundary.
  void require_unit_margin() const;

  /// Counts padded to three axes with leading ones (layout preserving).
  std::array<std::size_t, 3> shape3() const noexcept;

  /// Fills `x` (length dim) with the coordinates of flat index `index`.
  void point(std::size_t index, std::span<double> x) const;

  bool operator==(const GridSpec&) const = default;

 private:
  std::vector<std::size_t> counts_;
  std::vector<double> spacing_;
  std::vector<double> origin_;
};

/// Grid-sampled real function. Invariant: values.size() == grid.size().
struct Field {
  GridSpec grid;
  std::vector<double> values;

  Field(GridSpec g, std::vector<double> v);

  static Field constant(const GridSpec& g, double c);
  static Field zeros(const GridSpec& g) { return constant(g, 0.0); }
  static Field sample(const GridSpec& g, const std::function<double(std::span<const double>)>& fn);

  bool operator==(const Field&) const = default;
};

/// Throws NumericError when any value is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

/// Tensor-product composite trapezoid weights (box-edge nodes carry half weight per axis).
std::vector<double> trapezoid_weights(const GridSpec& grid);

/// Trapezoid approximation of the integral of field * weight over the box.
double quadrature(const Field& field, std::optional<std::span<const double>> weight_samples = {});

/// True at grid points whose distance to the box boundary is >= margin on every axis.
std::vector<bool> interior_mask(const GridSpec& grid, double margin);

double sup_norm(std::span<const double> values);

}  // namespace nfield
