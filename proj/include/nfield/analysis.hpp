#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nfield/dynamics.hpp"

namespace nfield {

struct AbsorbingReport {
  double R = 0.0;              // a K^{1/p} ||J||_1 + h
  double max_violation = 0.0;  // max_t lp(t) - (e^{-t} lp(0) + R)
  double epsilon = 0.0;        // ball slack used for the entry-time check
  double entry_time = 0.0;     // ln(lp(0) / epsilon), clamped at 0
  double max_after_entry = 0.0;  // max lp(t) over t > entry_time + one step
  bool pass = false;
};

/// pass iff max_violation <= 1e-2 and the norm stays below R + epsilon after
/// the entry time (up to one recorded step); epsilon = epsilon_fraction * R.
AbsorbingReport certify_absorbing(const DiagnosticsSeries& series, const Weight& weight, double p,
                                  const ModelParams& params, double epsilon_fraction = 0.01);
AbsorbingReport certify_absorbing(const Trajectory& trajectory, const Weight& weight, double p,
                                  const ModelParams& params, double epsilon_fraction = 0.01);

struct ModelSummary {
  double a = 0.0;
  double l1_norm = 0.0;
  double h = 0.0;
  double k1 = 0.0;
};

ModelSummary summarize(const ModelParams& params);

struct AttractorSample {
  ModelSummary source;
  std::vector<Field> snapshots;
  double t_transient = 0.0;
  double t_sample = 0.0;
  double initial_sup = 0.0;  // max sup|u(0)| over the initial conditions
};

struct AttractorSettings {
  std::size_t n_initial = 4;
  double t_transient = 20.0;
  double t_sample = 1.0;
};

/// Runs n_initial seeded random initial conditions (seeds config.seed + i), each
/// scaled to a random L^p(rho) radius in (0, R + 0.01 R), and keeps the snapshots
/// recorded in [t_transient, t_transient + t_sample].
AttractorSample sample_attractor(const ModelParams& params, const SimConfig& config, const Weight& weight, double p,
                                 const AttractorSettings& settings);

struct LinfReport {
  double r = 0.0;  // a ||J||_1 + h
  double max_sup = 0.0;
  bool pass = false;
};

/// pass iff every snapshot has sup|u| <= r + 1e-6 + e^{-t_transient} initial_sup.
LinfReport certify_linf_bound(const AttractorSample& sample, const ModelParams& params);

/// Energy relative to the constant equilibrium u0 (f strictly increasing):
/// integral of -1/2 phi (J*phi) + int_{f(u0)}^{f(u)} f^{-1}(r) dr - d phi, with
/// phi = f(u) - f(u0) and d = f(u0) (J*1) + h, which is u0 at distance >= 1 from the faces.
double lyapunov_G(const Field& u, const ModelParams& params, double u0);

/// -integral of f'(u) rhs(u)^2, never positive.
double lyapunov_rate(const Field& u, const ModelParams& params);

struct H6Report {
  std::vector<double> tail_masses;
  bool converged = false;
};

/// Integral of |f(u) - f(u0)| over centered sub-boxes scaled by each fraction;
/// converged iff the last two masses differ by < 1e-6 relative.
H6Report check_h6(const Field& u, const ModelParams& params, double u0, std::span<const double> fractions);

/// max over a in A of min over b in B of ||a - b||_{p,rho}.
double semidistance(const AttractorSample& A, const AttractorSample& B, const Weight& weight, double p);

struct SemicontinuityRow {
  double epsilon = 0.0;
  double semidistance = 0.0;
  double R_max = 0.0;
  double max_sup_norm = 0.0;
  double max_lp_norm = 0.0;
  double l1_norm = 0.0;
};

struct SemicontinuityResult {
  std::vector<SemicontinuityRow> rows;
  double R_max = 0.0;
  bool contained = false;  // every sampled state has lp_norm <= R_max + 1e-3
};

/// For each epsilon samples the attractor of (1 - eps) J0 + eps J1 and measures
/// its semidistance to the attractor of J0. Epsilons must be strictly decreasing
/// and nonnegative. The template supplies the firing rate, h and the engine.
SemicontinuityResult semicontinuity_experiment(const Kernel& j0, const Kernel& j1, std::span<const double> epsilons,
                                               const ModelParams& model, const SimConfig& config,
                                               const Weight& weight, double p, const AttractorSettings& settings);

}  // namespace nfield
