#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nfield/analysis.hpp"
#include "nfield/convolution.hpp"
#include "nfield/dynamics.hpp"
#include "nfield/firing.hpp"
#include "nfield/kernel.hpp"
#include "nfield/weights.hpp"

namespace nfield {

// Line-oriented `section.key = value`; '#' starts a comment, blank lines are ignored.
//
//   grid.dim = 1               grid.points = 1025           grid.half_width = 16
//   model.h = 0.1              model.p = 2                  (space.p is accepted for model.p)
//   kernel.family = polynomial|bump                         kernel.normalize_l1 = 1
//   kernel.blend_epsilon = 0   kernel.blend_family = bump   kernel.blend_normalize_l1 = 1.5
//   weight.family = exponential|polynomial                  weight.lambda = 1   weight.q = 2
//   firing.family = sigmoid|ramp   firing.a = 1   firing.beta = 2   firing.theta = 0   firing.slope = 1
//   sim.dt = 0.001   sim.t_end = 10   sim.integrator = exponential_euler|rk4
//   sim.record_every = 10   sim.seed = 1   sim.engine = fourier|direct
//   analysis.t_transient = 20   analysis.t_sample = 1   analysis.n_initial = 4
//   analysis.epsilons = 0.2, 0.1, 0.05, 0.025

struct GridSection {
  std::size_t dim = 1;
  std::size_t points = 1025;
  double half_width = 16.0;
  bool operator==(const GridSection&) const = default;
};

struct ModelSection {
  double h = 0.1;
  double p = 2.0;
  bool operator==(const ModelSection&) const = default;
};

struct KernelSection {
  KernelFamily family = KernelFamily::PolynomialBump;
  double normalize_l1 = 1.0;
  double blend_epsilon = 0.0;
  KernelFamily blend_family = KernelFamily::Bump;
  double blend_normalize_l1 = 1.5;
  bool operator==(const KernelSection&) const = default;
};

struct WeightSection {
  WeightFamily family = WeightFamily::Exponential;
  double lambda = 1.0;
  double q = 2.0;
  bool operator==(const WeightSection&) const = default;
};

struct FiringSection {
  FiringFamily family = FiringFamily::Sigmoid;
  double a = 1.0;
  double beta = 2.0;
  double theta = 0.0;
  double slope = 1.0;
  bool operator==(const FiringSection&) const = default;
};

struct SimSection {
  double dt = 1e-3;
  double t_end = 10.0;
  Integrator integrator = Integrator::ExponentialEuler;
  std::size_t record_every = 10;
  std::uint64_t seed = 1;
  Engine engine = Engine::Fourier;
  bool operator==(const SimSection&) const = default;
};

struct AnalysisSection {
  double t_transient = 20.0;
  double t_sample = 1.0;
  std::size_t n_initial = 4;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
  bool operator==(const AnalysisSection&) const = default;
};

struct RunConfig {
  GridSection grid;
  ModelSection model;
  KernelSection kernel;
  WeightSection weight;
  FiringSection firing;
  SimSection sim;
  AnalysisSection analysis;
  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; throws ConfigError carrying the offending line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Every key, one per line, in a form parse_config reads back to an equal RunConfig.
std::string to_text(const RunConfig& config);

/// Range and cross-key checks; line numbers are 0 here.
void validate(const RunConfig& config);

// Builders for the library objects a config describes.
GridSpec make_grid(const RunConfig& c);
Weight make_weight(const RunConfig& c);
FiringRate make_firing(const RunConfig& c);
/// Primary kernel J0 (before blending).
Kernel make_base_kernel(const RunConfig& c);
/// Blend partner J1.
Kernel make_blend_kernel(const RunConfig& c);
/// (1 - blend_epsilon) J0 + blend_epsilon J1.
Kernel make_kernel(const RunConfig& c);
ModelParams make_model(const RunConfig& c);
SimConfig make_sim_config(const RunConfig& c);
AttractorSettings make_attractor_settings(const RunConfig& c);

}  // namespace nfield
