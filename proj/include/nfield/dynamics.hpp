#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nfield/convolution.hpp"
#include "nfield/firing.hpp"
#include "nfield/grid.hpp"
#include "nfield/weights.hpp"

namespace nfield {

/// du/dt = -u + J * f(u) + h with the kernel carried by the plan.
struct ModelParams {
  ConvolutionPlan plan;
  FiringRate firing;
  double h;

  /// Throws ParameterError unless h > 0.
  ModelParams(ConvolutionPlan plan, FiringRate firing, double h);

  const Kernel& kernel() const noexcept { return plan.kernel(); }
  const GridSpec& grid() const noexcept { return plan.grid(); }
};

enum class Integrator { ExponentialEuler, RK4 };

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Integrator integrator = Integrator::ExponentialEuler;
  std::size_t record_every = 1;
  std::uint64_t seed = 1;

  /// dt in (0, 0.1], t_end = 0 or t_end >= dt, record_every >= 1.
  void validate() const;
  /// ceil(t_end / dt); the last step is shortened to land on t_end.
  std::size_t steps() const;
};

struct DiagnosticsSeries {
  std::vector<double> t;
  std::vector<double> lp_norm;
  std::vector<double> sup_norm;
  /// Filled only when the firing rate is strictly increasing.
  std::vector<double> lyapunov_G;
  std::vector<double> dG_dt;

  bool has_lyapunov() const noexcept { return !lyapunov_G.empty(); }
  std::size_t size() const noexcept { return t.size(); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  DiagnosticsSeries diagnostics;
};

Field rhs(const ModelParams& params, const Field& u);
void rhs(const ModelParams& params, std::span<const double> u, std::span<double> out);

Field step_exponential_euler(const ModelParams& params, const Field& u, double dt);
Field step_rk4(const ModelParams& params, const Field& u, double dt);

/// Called with (step, t, state) at step 0 and after every step.
using StepObserver = std::function<void(std::size_t, double, std::span<const double>)>;

/// Advances u0 to t_end; throws DivergenceError(step) on the first non-finite state.
Field integrate(const ModelParams& params, const SimConfig& config, const Field& u0,
                const StepObserver& observer = {});

/// Records snapshots and diagnostics every record_every steps and at t_end.
/// lp_norm is taken in L^p(rho) with the given weight.
Trajectory simulate(const ModelParams& params, const SimConfig& config, const Field& u0,
                    const Weight& weight, double p);

struct DiagnosticsRun {
  DiagnosticsSeries series;
  Field final_state;
};

/// simulate without keeping the snapshots.
DiagnosticsRun simulate_diagnostics(const ModelParams& params, const SimConfig& config, const Field& u0,
                                    const Weight& weight, double p);

struct Equilibrium {
  double u0 = 0.0;
  bool unique = false;
  double residual = 0.0;  // |u0 - l1 f(u0) - h|
};

/// Constant solution of u = l1 f(u) + h by bisection on [h, l1 a + h].
/// unique reports the contraction condition l1 k1 < 1.
Equilibrium homogeneous_equilibrium(const FiringRate& firing, double l1_norm, double h);

struct RestingStimulus {
  double h = 0.0;
  bool in_model = false;  // h > 0
};

/// Stimulus making u0 a constant resting state: h = u0 - l1 f(u0).
RestingStimulus resting_stimulus(const FiringRate& firing, double l1_norm, double u0);

struct LipschitzReport {
  double max_quotient = 0.0;
  double bound = 0.0;  // 1 + K^{1/p} ||J||_1 k1
  std::size_t trials = 0;
  bool pass = false;
};

/// ||rhs(u) - rhs(v)|| / ||u - v|| in L^p(rho) over the whole box.
double lipschitz_quotient(const ModelParams& params, const WeightedNorm& norm, const Field& u, const Field& v);

/// Monte-Carlo max quotient over seeded random pairs; pass iff <= bound (1 + 1e-6).
LipschitzReport certify_lipschitz(const ModelParams& params, const Weight& weight, double p, std::size_t trials,
                                  std::uint64_t seed = 1);

/// Same over caller-supplied pairs (pairs with u == v are skipped).
LipschitzReport certify_lipschitz(const ModelParams& params, const Weight& weight, double p,
                                  std::span<const std::pair<Field, Field>> pairs);

}  // namespace nfield
