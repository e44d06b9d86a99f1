#include "nfield/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "nfield/error.hpp"

namespace nfield {
namespace {

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw ParameterError("weighted norm exponent must satisfy 1 < p < inf, got " + std::to_string(p));
}

double euclid(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Integer grid offsets (per-axis spacing) of all points within distance 1.
std::vector<std::array<long, 3>> unit_ball_offsets(const GridSpec& grid) {
  const auto dim = grid.dim();
  std::array<long, 3> r{0, 0, 0};
  std::array<double, 3> h{1, 1, 1};
  for (std::size_t i = 0; i < dim; ++i) {
    h[3 - dim + i] = grid.spacing()[i];
    r[3 - dim + i] = static_cast<long>(std::floor(1.0 / grid.spacing()[i] + 1e-9));
  }
  std::vector<std::array<long, 3>> out;
  for (long a = -r[0]; a <= r[0]; ++a)
    for (long b = -r[1]; b <= r[1]; ++b)
      for (long c = -r[2]; c <= r[2]; ++c) {
        const double d2 = (a * h[0]) * (a * h[0]) + (b * h[1]) * (b * h[1]) + (c * h[2]) * (c * h[2]);
        if (d2 <= 1.0 + 1e-12) out.push_back({a, b, c});
      }
  return out;
}

}  // namespace

double unit_sphere_area(std::size_t dim) {
  const double n = static_cast<double>(dim);
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

Weight make_weight(WeightFamily family, double parameter, std::size_t dim) {
  if (dim < 1 || dim > 3) throw ParameterError("weight dimension must be 1, 2 or 3");
  const double n = static_cast<double>(dim);
  Weight w;
  w.family_ = family;
  w.parameter_ = parameter;
  w.dim_ = dim;
  switch (family) {
    case WeightFamily::Exponential:
      if (!(parameter > 0.0) || !std::isfinite(parameter))
        throw ParameterError("exponential weight rate must be positive");
      // int exp(-l r) r^{N-1} dr = Gamma(N) / l^N
      w.normalization_ = std::pow(parameter, n) / (unit_sphere_area(dim) * std::tgamma(n));
      // rho(x)/rho(y) = exp(l(|y|-|x|)) <= exp(l |x-y|)
      w.K_ = std::exp(parameter);
      break;
    case WeightFamily::PolynomialDecay:
      if (!(parameter > n) || !std::isfinite(parameter))
        throw ParameterError("polynomial weight exponent q must exceed the dimension " +
                             std::to_string(dim) + " (otherwise rho is not integrable)");
      // int r^{N-1} (1+r)^{-q} dr = B(N, q-N)
      w.normalization_ =
          std::tgamma(parameter) / (unit_sphere_area(dim) * std::tgamma(n) * std::tgamma(parameter - n));
      // (1+|y|)/(1+max(0,|y|-1)) <= 2
      w.K_ = std::pow(2.0, parameter);
      break;
  }
  return w;
}

double Weight::radial(double r) const {
  switch (family_) {
    case WeightFamily::Exponential:
      return normalization_ * std::exp(-parameter_ * r);
    case WeightFamily::PolynomialDecay:
      return normalization_ * std::pow(1.0 + r, -parameter_);
  }
  return 0.0;
}

double Weight::operator()(std::span<const double> x) const {
  if (x.size() != dim_) throw ShapeError("point dimension does not match weight dimension");
  return radial(euclid(x));
}

std::vector<double> Weight::sample(const GridSpec& grid) const {
  if (grid.dim() != dim_) throw ShapeError("grid dimension does not match weight dimension");
  // Squared coordinates per padded axis, so the inner loop is a sum and one radial call.
  const auto shape = grid.shape3();
  const std::size_t off = 3 - grid.dim();
  std::array<std::vector<double>, 3> sq;
  for (std::size_t a = 0; a < 3; ++a) {
    sq[a].assign(shape[a], 0.0);
    if (a < off) continue;
    for (std::size_t k = 0; k < shape[a]; ++k) {
      const double x = grid.coordinate(a - off, k);
      sq[a][k] = x * x;
    }
  }
  std::vector<double> out(grid.size());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t j = 0; j < shape[1]; ++j) {
      const double base = sq[0][i] + sq[1][j];
      for (std::size_t k = 0; k < shape[2]; ++k) out[idx++] = radial(std::sqrt(base + sq[2][k]));
    }
  return out;
}

H2Report verify_h2(std::span<const double> samples, const GridSpec& grid, double claimed_K) {
  if (samples.size() != grid.size()) throw ShapeError("weight samples do not match grid");
  grid.require_unit_margin();
  const auto mask = interior_mask(grid, 1.0);
  const auto offsets = unit_ball_offsets(grid);
  const auto shape = grid.shape3();
  const long s1 = static_cast<long>(shape[2]);
  const long s0 = static_cast<long>(shape[1] * shape[2]);

  double worst = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t j = 0; j < shape[1]; ++j)
      for (std::size_t k = 0; k < shape[2]; ++k, ++idx) {
        if (!mask[idx]) continue;
        const double ry = samples[idx];
        if (!(ry > 0.0)) throw NumericError("weight samples must be positive");
        double mx = 0.0;
        for (const auto& o : offsets) {
          const long at = static_cast<long>(idx) + o[0] * s0 + o[1] * s1 + o[2];
          mx = std::max(mx, samples[static_cast<std::size_t>(at)]);
        }
        worst = std::max(worst, mx / ry);
      }
  return {worst, worst <= claimed_K * (1.0 + 1e-9)};
}

H2Report verify_h2(const Weight& weight, const GridSpec& grid) {
  const auto samples = weight.sample(grid);
  return verify_h2(samples, grid, weight.K());
}

double weighted_lp_norm(const Field& field, const Weight& weight, double p) {
  check_p(p);
  const GridSpec& grid = field.grid;
  if (grid.dim() != weight.dim()) throw ShapeError("grid dimension does not match weight dimension");
  require_finite(field.values, "field");
  // One pass with per-axis trapezoid factors and squared coordinates.
  const auto shape = grid.shape3();
  const std::size_t off = 3 - grid.dim();
  std::array<std::vector<double>, 3> sq, tw;
  for (std::size_t a = 0; a < 3; ++a) {
    sq[a].assign(shape[a], 0.0);
    tw[a].assign(shape[a], 1.0);
    if (a < off) continue;
    const double h = grid.spacing()[a - off];
    for (std::size_t k = 0; k < shape[a]; ++k) {
      const double x = grid.coordinate(a - off, k);
      sq[a][k] = x * x;
      tw[a][k] = k == 0 || k + 1 == shape[a] ? 0.5 * h : h;
    }
  }
  double sum = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t j = 0; j < shape[1]; ++j) {
      const double base = sq[0][i] + sq[1][j], wij = tw[0][i] * tw[1][j];
      double row = 0.0;
      for (std::size_t k = 0; k < shape[2]; ++k, ++idx) {
        const double v = std::abs(field.values[idx]);
        if (v == 0.0) continue;
        const double vp = p == 2.0 ? v * v : (v == 1.0 ? 1.0 : std::pow(v, p));
        row += tw[2][k] * weight.radial(std::sqrt(base + sq[2][k])) * vp;
      }
      sum += wij * row;
    }
  return sum > 0.0 ? std::pow(sum, 1.0 / p) : 0.0;
}

WeightedNorm::WeightedNorm(const GridSpec& grid, const Weight& weight, double p,
                           const std::vector<bool>* mask)
    : grid_(grid), p_(p), mass_(trapezoid_weights(grid)) {
  check_p(p);
  if (mask && mask->size() != grid.size()) throw ShapeError("mask does not match grid");
  const auto rho = weight.sample(grid);
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    mass_[i] *= rho[i];
    if (mask && !(*mask)[i]) mass_[i] = 0.0;
  }
}

double WeightedNorm::finish(double sum) const { return sum > 0.0 ? std::pow(sum, 1.0 / p_) : 0.0; }

double WeightedNorm::operator()(std::span<const double> values) const {
  if (values.size() != mass_.size()) throw ShapeError("field does not match the norm's grid");
  require_finite(values, "field");
  double sum = 0.0;
  if (p_ == 2.0) {
    for (std::size_t i = 0; i < mass_.size(); ++i) sum += mass_[i] * values[i] * values[i];
  } else {
    for (std::size_t i = 0; i < mass_.size(); ++i)
      if (values[i] != 0.0) sum += mass_[i] * std::pow(std::abs(values[i]), p_);
  }
  return finish(sum);
}

double WeightedNorm::operator()(const Field& f) const {
  if (!(f.grid == grid_)) throw ShapeError("field grid differs from the norm's grid");
  return (*this)(f.values);
}

double WeightedNorm::distance(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != mass_.size() || b.size() != mass_.size())
    throw ShapeError("fields do not match the norm's grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (d != 0.0) sum += mass_[i] * (p_ == 2.0 ? d * d : std::pow(d, p_));
  }
  return finish(sum);
}

}  // namespace nfield
