#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "nfield/grid.hpp"
#include "nfield/kernel.hpp"
#include "nfield/weights.hpp"

namespace nfield {

enum class Engine { Direct, Fourier };

/// Discrete J * v on a fixed grid with v taken as zero off the box.
///
/// The y-integral uses the same trapezoid weights as every other quadrature in
/// the library, so box-face nodes of v count with half weight per axis. Both
/// engines compute exactly this sum; Direct loops over the stencil, Fourier
/// goes through a zero-padded real FFT. Plans are immutable and cheap to copy.
class ConvolutionPlan {
 public:
  ConvolutionPlan(GridSpec grid, Kernel kernel, Engine engine = Engine::Fourier);

  Engine engine() const noexcept;
  const GridSpec& grid() const noexcept;
  const Kernel& kernel() const noexcept;

  /// Same grid and kernel, other engine (shares no transform data).
  ConvolutionPlan with_engine(Engine engine) const;

  Field operator()(const Field& v) const;
  void apply(std::span<const double> v, std::span<double> out) const;

  /// (d J / d x_axis) * v by the stencil sum with the analytic derivative stencil.
  void apply_gradient(std::span<const double> v, std::span<double> out, std::size_t axis) const;

  /// Padded FFT extent per axis (Fourier engine), empty for Direct.
  std::vector<std::size_t> padded_counts() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

Field convolve(const ConvolutionPlan& plan, const Field& v);
Field convolve_gradient(const ConvolutionPlan& plan, const Field& v, std::size_t axis);

struct Lemma21Report {
  double max_ratio = 0.0;
  double bound = 0.0;  // K^{1/p} ||J||_1
  std::size_t trials = 0;
  bool pass = false;
};

/// Max of ||J*u|| / ||u|| in L^p(rho) over seeded random fields. The numerator
/// is taken on the points at distance >= 1 from the box faces, the denominator
/// on the whole box; pass iff max_ratio <= bound (1 + 1e-6).
Lemma21Report certify_lemma21(const ConvolutionPlan& plan, const Weight& weight, double p,
                              std::size_t trials, std::uint64_t seed = 1);

/// Same certificate over caller-supplied fields (zero-norm fields are skipped).
Lemma21Report certify_lemma21(const ConvolutionPlan& plan, const Weight& weight, double p,
                              std::span<const Field> fields);

struct BenchRow {
  Engine engine;
  std::size_t points = 0;  // total grid points
  double seconds_per_call = 0.0;
  double max_abs_diff_vs_direct = 0.0;
};

struct BenchSettings {
  std::size_t dim = 1;
  double half_width = 16.0;
  KernelFamily family = KernelFamily::PolynomialBump;
  std::vector<Engine> engines{Engine::Direct, Engine::Fourier};
  std::size_t trials = 3;  // timing windows; the fastest single call is reported
  double min_seconds = 0.05;
  std::uint64_t seed = 1;
};

/// For each size (points per axis) builds a normalized kernel on the centered
/// grid, checks every engine against Direct to 1e-10 (NumericError otherwise),
/// then times convolve in interleaved windows and reports the fastest call.
std::vector<BenchRow> benchmark(std::span<const std::size_t> sizes, const BenchSettings& settings = {});

const char* engine_name(Engine e);
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace nfield
