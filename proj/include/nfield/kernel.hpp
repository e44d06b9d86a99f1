#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nfield {

enum class KernelFamily {
  Bump,            ///< A * exp(-1 / (1 - |x|^2)) on |x| < 1
  PolynomialBump,  ///< A * (1 - |x|^2)^2 on |x| <= 1
};

/// One radial profile in a (possibly blended) kernel.
struct KernelTerm {
  KernelFamily family;
  double amplitude;
};

/// Even, nonnegative, C^1 connectivity kernel supported in the closed unit ball,
/// sampled once on a stencil whose spacing matches the field grid.
///
/// l1_norm is the certified ||J||_1 and deriv_bound the certified
/// S >= sup_i int |d_i J|. The analytic profile is kept alongside the samples
/// so that refined re-sampling and gradient stencils stay exact.
class Kernel {
 public:
  std::size_t dim() const noexcept { return spacing_.size(); }
  const std::vector<double>& spacing() const noexcept { return spacing_; }
  /// Stencil half-width in grid points per axis, ceil(1/spacing).
  const std::vector<std::size_t>& radius() const noexcept { return radius_; }
  /// Row-major samples over prod(2*radius+1) stencil points.
  const std::vector<double>& samples() const noexcept { return samples_; }
  const std::vector<KernelTerm>& terms() const noexcept { return terms_; }

  double l1_norm() const noexcept { return l1_norm_; }
  double deriv_bound() const noexcept { return deriv_bound_; }
  /// Quadrature intervals used for deriv_bound / l1_norm; 0 when closed forms were used.
  std::size_t bound_resolution() const noexcept { return bound_resolution_; }

  /// Sum of samples times cell volume (the stencil quadrature of J).
  double stencil_mass() const;

  double value(std::span<const double> x) const;
  double gradient(std::span<const double> x, std::size_t axis) const;

  /// Samples of d J / d x_axis on the same stencil.
  std::vector<double> gradient_samples(std::size_t axis) const;

  /// Stencil shape padded to three axes with leading ones.
  std::array<std::size_t, 3> stencil_shape3() const;

  friend Kernel make_kernel(KernelFamily, std::size_t, std::vector<double>, std::optional<double>,
                            double);
  friend Kernel blend_kernels(const Kernel&, const Kernel&, double);

 private:
  Kernel() = default;
  void resample();

  std::vector<double> spacing_;
  std::vector<std::size_t> radius_;
  std::vector<double> samples_;
  std::vector<KernelTerm> terms_;
  double l1_norm_ = 0.0;
  double deriv_bound_ = 0.0;
  std::size_t bound_resolution_ = 0;
};

/// Builds a kernel on a stencil with the given per-axis spacing (one entry, or one per axis).
///
/// With normalize_to the amplitude is chosen so the stencil quadrature equals the
/// target and l1_norm reports the target; otherwise `amplitude` is used and
/// l1_norm is the continuum value. Throws ResolutionError when spacing > 0.25.
Kernel make_kernel(KernelFamily family, std::size_t dim, std::vector<double> spacing,
                   std::optional<double> normalize_to = std::nullopt, double amplitude = 1.0);

struct H4Report {
  double S_observed = 0.0;
  bool pass = false;
};

/// max_i of the quadrature of |d_i J| from central differences on a 4x refined stencil.
H4Report verify_h4(const Kernel& kernel);

/// (1 - epsilon) J0 + epsilon J1; l1_norm is recomputed by stencil quadrature.
Kernel blend_kernels(const Kernel& j0, const Kernel& j1, double epsilon);

/// Unit-amplitude ||J||_1 and int |d_1 J| of one radial profile in R^N.
double radial_l1(KernelFamily family, std::size_t dim);
double radial_derivative_l1(KernelFamily family, std::size_t dim);

}  // namespace nfield
