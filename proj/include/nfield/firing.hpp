#pragma once

#include <span>

namespace nfield {

enum class FiringFamily { Sigmoid, SaturatingRamp };

/// Bounded nondecreasing firing rate 0 <= f <= a with global Lipschitz constant k1.
class FiringRate {
 public:
  /// a / (1 + exp(-beta (u - theta))).
  static FiringRate sigmoid(double a, double beta, double theta);
  /// clamp(slope (u - theta), 0, a).
  static FiringRate ramp(double a, double slope, double theta);

  FiringFamily family() const noexcept { return family_; }
  double bound_a() const noexcept { return a_; }
  double beta() const noexcept { return rate_; }
  double slope() const noexcept { return rate_; }
  double theta() const noexcept { return theta_; }
  /// a beta / 4 for the sigmoid, slope for the ramp.
  double k1() const noexcept;
  bool strictly_increasing() const noexcept { return family_ == FiringFamily::Sigmoid; }

  double operator()(double u) const;
  void apply(std::span<const double> u, std::span<double> out) const;

  /// f'(u); at ramp kinks the left limit.
  double derivative(double u) const;

  /// f^{-1}(r) for r in (0, a); sigmoid only.
  double inverse(double r) const;

  /// Integral of f^{-1} over [s_lo, s_hi] in closed form, both ends in [0, a].
  double inverse_integral(double s_lo, double s_hi) const;

  bool operator==(const FiringRate&) const = default;

 private:
  FiringRate(FiringFamily family, double a, double rate, double theta);
  void require_invertible() const;
  double antiderivative(double r) const;

  FiringFamily family_;
  double a_;
  double rate_;  // beta or slope
  double theta_;
};

inline double lipschitz_constant(const FiringRate& f) { return f.k1(); }

}  // namespace nfield
