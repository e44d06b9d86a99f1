#include "nfield/firing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nfield/error.hpp"

namespace nfield {
namespace {

// x ln x with the removable singularity at 0.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

FiringRate::FiringRate(FiringFamily family, double a, double rate, double theta)
    : family_(family), a_(a), rate_(rate), theta_(theta) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("firing bound a must be positive");
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw ParameterError(family == FiringFamily::Sigmoid ? "sigmoid gain beta must be positive"
                                                         : "ramp slope must be positive");
  if (!std::isfinite(theta)) throw ParameterError("firing threshold must be finite");
}

FiringRate FiringRate::sigmoid(double a, double beta, double theta) {
  return FiringRate(FiringFamily::Sigmoid, a, beta, theta);
}

FiringRate FiringRate::ramp(double a, double slope, double theta) {
  return FiringRate(FiringFamily::SaturatingRamp, a, slope, theta);
}

double FiringRate::k1() const noexcept {
  return family_ == FiringFamily::Sigmoid ? a_ * rate_ / 4.0 : rate_;
}

double FiringRate::operator()(double u) const {
  if (family_ == FiringFamily::SaturatingRamp) return std::clamp(rate_ * (u - theta_), 0.0, a_);
  const double x = rate_ * (u - theta_);
  if (x >= 0.0) return a_ / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return a_ * e / (1.0 + e);
}

void FiringRate::apply(std::span<const double> u, std::span<double> out) const {
  if (u.size() != out.size()) throw ShapeError("firing input and output lengths differ");
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (*this)(u[i]);
}

double FiringRate::derivative(double u) const {
  if (family_ == FiringFamily::SaturatingRamp) {
    const double v = u - theta_;
    return v > 0.0 && v <= a_ / rate_ ? rate_ : 0.0;
  }
  // a beta s (1 - s) written through e = exp(-|x|) so neither tail cancels.
  const double e = std::exp(-std::abs(rate_ * (u - theta_)));
  return a_ * rate_ * e / ((1.0 + e) * (1.0 + e));
}

void FiringRate::require_invertible() const {
  if (!strictly_increasing())
    throw InvertibilityError("the saturating ramp is not invertible; Lyapunov quantities need a sigmoid");
}

double FiringRate::inverse(double r) const {
  require_invertible();
  if (!(r > 0.0 && r < a_))
    throw DomainError("f^-1 is defined on (0, " + std::to_string(a_) + "), got " + std::to_string(r));
  return theta_ + std::log(r / (a_ - r)) / rate_;
}

double FiringRate::antiderivative(double r) const {
  return theta_ * r + (xlogx(r) + xlogx(a_ - r)) / rate_;
}

double FiringRate::inverse_integral(double s_lo, double s_hi) const {
  require_invertible();
  for (double s : {s_lo, s_hi})
    if (!(s >= 0.0 && s <= a_))
      throw DomainError("inverse_integral limits must lie in [0, " + std::to_string(a_) + "], got " +
                        std::to_string(s));
  if (s_lo == s_hi) return 0.0;
  return antiderivative(s_hi) - antiderivative(s_lo);
}

}  // namespace nfield
