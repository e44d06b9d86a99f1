#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nfield/grid.hpp"

namespace nfield {

enum class WeightFamily {
  Exponential,      ///< c * exp(-lambda |x|)
  PolynomialDecay,  ///< c * (1 + |x|)^(-q), q > N
};

/// Positive even weight rho with unit mass on R^N and the unit-ball domination
/// constant K: sup{rho(x) : |x - y| <= 1} <= K rho(y).
///
/// Both the normalization c and K are closed forms, never grid estimates.
class Weight {
 public:
  WeightFamily family() const noexcept { return family_; }
  /// lambda for Exponential, q for PolynomialDecay.
  double parameter() const noexcept { return parameter_; }
  std::size_t dim() const noexcept { return dim_; }
  double normalization() const noexcept { return normalization_; }
  double K() const noexcept { return K_; }

  double radial(double r) const;
  double operator()(std::span<const double> x) const;
  std::vector<double> sample(const GridSpec& grid) const;

  friend Weight make_weight(WeightFamily family, double parameter, std::size_t dim);

 private:
  Weight() = default;
  WeightFamily family_{};
  double parameter_ = 0.0;
  std::size_t dim_ = 1;
  double normalization_ = 0.0;
  double K_ = 0.0;
};

/// Throws ParameterError for lambda <= 0 or q <= N (q <= N is not integrable).
Weight make_weight(WeightFamily family, double parameter, std::size_t dim);

/// Surface measure of the unit sphere S^{N-1}.
double unit_sphere_area(std::size_t dim);

struct H2Report {
  double K_observed = 0.0;
  bool pass = false;
};

/// Grid search of max rho(x)/rho(y) over interior y (margin 1) and grid x with |x-y| <= 1.
H2Report verify_h2(const Weight& weight, const GridSpec& grid);

/// Same search for arbitrary positive samples against a claimed constant.
H2Report verify_h2(std::span<const double> samples, const GridSpec& grid, double claimed_K);

/// (integral |u|^p rho)^(1/p) by trapezoid quadrature; p in (1, inf).
double weighted_lp_norm(const Field& field, const Weight& weight, double p);

/// Weighted L^p norm with rho and the quadrature weights folded together once,
/// for repeated evaluation on one grid. An optional mask restricts the integral.
class WeightedNorm {
 public:
  WeightedNorm(const GridSpec& grid, const Weight& weight, double p,
               const std::vector<bool>* mask = nullptr);

  double operator()(std::span<const double> values) const;
  double operator()(const Field& f) const;
  double distance(std::span<const double> a, std::span<const double> b) const;

  double p() const noexcept { return p_; }
  const GridSpec& grid() const noexcept { return grid_; }

 private:
  double finish(double sum) const;
  GridSpec grid_;
  double p_;
  std::vector<double> mass_;  // quadrature weight * rho, zero outside the mask
};

}  // namespace nfield
