#include "nfield/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nfield/error.hpp"
#include "nfield/weights.hpp"

namespace nfield {
namespace {

constexpr std::size_t kProfileIntervals = 20000;

double profile(KernelFamily family, double r) {
  switch (family) {
    case KernelFamily::Bump:
      return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
    case KernelFamily::PolynomialBump: {
      if (r > 1.0) return 0.0;
      const double s = 1.0 - r * r;
      return s * s;
    }
  }
  return 0.0;
}

double profile_derivative(KernelFamily family, double r) {
  if (r >= 1.0) return 0.0;
  const double s = 1.0 - r * r;
  switch (family) {
    case KernelFamily::Bump:
      return std::exp(-1.0 / s) * (-2.0 * r / (s * s));
    case KernelFamily::PolynomialBump:
      return -4.0 * r * s;
  }
  return 0.0;
}

// Composite Simpson on [0, 1].
template <typename F>
double simpson01(F&& f, std::size_t intervals) {
  const double h = 1.0 / static_cast<double>(intervals);
  double sum = f(0.0) + f(1.0);
  for (std::size_t i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) * h);
  return sum * h / 3.0;
}

// Integral of |omega_1| over the unit sphere S^{N-1}.
double sphere_abs_first_coordinate(std::size_t dim) {
  const double n = static_cast<double>(dim);
  return 2.0 * std::pow(std::numbers::pi, (n - 1.0) / 2.0) / std::tgamma((n + 1.0) / 2.0);
}

double radius_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::size_t stencil_radius(double h) { return static_cast<std::size_t>(std::ceil(1.0 / h - 1e-9)); }

}  // namespace

double radial_l1(KernelFamily family, std::size_t dim) {
  const double area = unit_sphere_area(dim);
  if (family == KernelFamily::PolynomialBump) {
    // int_0^1 (1-r^2)^2 r^{N-1} dr
    static constexpr double moments[] = {8.0 / 15.0, 1.0 / 6.0, 8.0 / 105.0};
    return area * moments[dim - 1];
  }
  const double n = static_cast<double>(dim);
  return area * simpson01([&](double r) { return profile(family, r) * std::pow(r, n - 1.0); },
                          kProfileIntervals);
}

double radial_derivative_l1(KernelFamily family, std::size_t dim) {
  const double sigma = sphere_abs_first_coordinate(dim);
  const double n = static_cast<double>(dim);
  if (family == KernelFamily::PolynomialBump) return sigma * 8.0 / ((n + 1.0) * (n + 3.0));
  return sigma * simpson01(
                     [&](double r) { return std::abs(profile_derivative(family, r)) * std::pow(r, n - 1.0); },
                     kProfileIntervals);
}

double Kernel::value(std::span<const double> x) const {
  const double r = radius_of(x);
  double v = 0.0;
  for (const auto& t : terms_) v += t.amplitude * profile(t.family, r);
  return v;
}

double Kernel::gradient(std::span<const double> x, std::size_t axis) const {
  const double r = radius_of(x);
  if (r == 0.0) return 0.0;
  double d = 0.0;
  for (const auto& t : terms_) d += t.amplitude * profile_derivative(t.family, r);
  return d * x[axis] / r;
}

std::array<std::size_t, 3> Kernel::stencil_shape3() const {
  std::array<std::size_t, 3> s{1, 1, 1};
  for (std::size_t i = 0; i < dim(); ++i) s[3 - dim() + i] = 2 * radius_[i] + 1;
  return s;
}

namespace {

template <typename F>
std::vector<double> sample_stencil(const Kernel& k, F&& fn) {
  const auto shape = k.stencil_shape3();
  const std::size_t dim = k.dim();
  std::vector<double> out(shape[0] * shape[1] * shape[2]);
  std::array<double, 3> x{};
  std::size_t idx = 0;
  for (std::size_t a = 0; a < shape[0]; ++a)
    for (std::size_t b = 0; b < shape[1]; ++b)
      for (std::size_t c = 0; c < shape[2]; ++c, ++idx) {
        const std::array<std::size_t, 3> ijk{a, b, c};
        for (std::size_t i = 0; i < dim; ++i) {
          const std::size_t ax = 3 - dim + i;
          x[i] = (static_cast<double>(ijk[ax]) - static_cast<double>(k.radius()[i])) * k.spacing()[i];
        }
        out[idx] = fn(std::span<const double>(x.data(), dim));
      }
  return out;
}

}  // namespace

void Kernel::resample() {
  samples_ = sample_stencil(*this, [this](std::span<const double> x) { return value(x); });
}

std::vector<double> Kernel::gradient_samples(std::size_t axis) const {
  if (axis >= dim()) throw ParameterError("gradient axis out of range");
  return sample_stencil(*this, [this, axis](std::span<const double> x) { return gradient(x, axis); });
}

double Kernel::stencil_mass() const {
  double cell = 1.0;
  for (double h : spacing_) cell *= h;
  double s = 0.0;
  for (double v : samples_) s += v;
  return s * cell;
}

Kernel make_kernel(KernelFamily family, std::size_t dim, std::vector<double> spacing,
                   std::optional<double> normalize_to, double amplitude) {
  if (dim < 1 || dim > 3) throw ParameterError("kernel dimension must be 1, 2 or 3");
  if (spacing.size() == 1 && dim > 1) spacing.assign(dim, spacing.front());
  if (spacing.size() != dim) throw ShapeError("kernel spacing needs one entry per axis");
  for (double h : spacing) {
    if (!(h > 0.0)) throw ParameterError("kernel spacing must be positive");
    if (h > 0.25)
      throw ResolutionError("kernel spacing " + std::to_string(h) +
                            " exceeds 0.25 (need at least 4 stencil points per unit radius)");
  }
  if (normalize_to && !(*normalize_to > 0.0)) throw ParameterError("normalize_to must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw ParameterError("kernel amplitude must be nonnegative and finite");

  Kernel k;
  k.spacing_ = std::move(spacing);
  for (double h : k.spacing_) k.radius_.push_back(stencil_radius(h));
  k.terms_ = {{family, 1.0}};
  k.resample();

  double a = amplitude;
  if (normalize_to) a = *normalize_to / k.stencil_mass();
  k.terms_.front().amplitude = a;
  for (double& v : k.samples_) v *= a;

  k.l1_norm_ = normalize_to ? *normalize_to : a * radial_l1(family, dim);
  k.deriv_bound_ = a * radial_derivative_l1(family, dim);
  k.bound_resolution_ = family == KernelFamily::PolynomialBump ? 0 : kProfileIntervals;
  return k;
}

H4Report verify_h4(const Kernel& kernel) {
  const std::size_t dim = kernel.dim();
  std::array<double, 3> hf{1, 1, 1};
  std::array<long, 3> rf{0, 0, 0};
  double cell = 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double h = kernel.spacing()[i] / 4.0;
    hf[3 - dim + i] = h;
    rf[3 - dim + i] = static_cast<long>(stencil_radius(h)) + 1;
    cell *= h;
  }
  const std::size_t off = 3 - dim;
  double best = 0.0;
  std::array<double, 3> xp{}, xm{};
  for (std::size_t axis = 0; axis < dim; ++axis) {
    const double h = hf[off + axis];
    double sum = 0.0;
    for (long a = -rf[0]; a <= rf[0]; ++a)
      for (long b = -rf[1]; b <= rf[1]; ++b)
        for (long c = -rf[2]; c <= rf[2]; ++c) {
          const std::array<long, 3> idx{a, b, c};
          for (std::size_t i = 0; i < dim; ++i) xp[i] = xm[i] = static_cast<double>(idx[off + i]) * hf[off + i];
          xp[axis] += h;
          xm[axis] -= h;
          const double d = (kernel.value(std::span<const double>(xp.data(), dim)) -
                            kernel.value(std::span<const double>(xm.data(), dim))) /
                           (2.0 * h);
          sum += std::abs(d);
        }
    best = std::max(best, sum * cell);
  }
  return {best, best <= kernel.deriv_bound() * (1.0 + 1e-3)};
}

Kernel blend_kernels(const Kernel& j0, const Kernel& j1, double epsilon) {
  if (j0.dim() != j1.dim() || j0.spacing() != j1.spacing())
    throw ShapeError("blended kernels must share dimension and spacing");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("blend epsilon must lie in [0, 1]");
  if (epsilon == 0.0) return j0;
  if (epsilon == 1.0) return j1;

  Kernel k;
  k.spacing_ = j0.spacing_;
  k.radius_ = j0.radius_;
  for (const auto& t : j0.terms_) k.terms_.push_back({t.family, (1.0 - epsilon) * t.amplitude});
  for (const auto& t : j1.terms_) k.terms_.push_back({t.family, epsilon * t.amplitude});
  k.samples_.resize(j0.samples_.size());
  for (std::size_t i = 0; i < k.samples_.size(); ++i)
    k.samples_[i] = (1.0 - epsilon) * j0.samples_[i] + epsilon * j1.samples_[i];
  k.l1_norm_ = k.stencil_mass();
  k.deriv_bound_ = (1.0 - epsilon) * j0.deriv_bound_ + epsilon * j1.deriv_bound_;
  k.bound_resolution_ = std::max(j0.bound_resolution_, j1.bound_resolution_);
  return k;
}

}  // namespace nfield
