#include "nfield/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <mutex>
#include <ostream>
#include <string>

#include "nfield/error.hpp"
#include "nfield/random_field.hpp"
#include "nfield/text.hpp"

namespace nfield {
namespace {

// The FFTW planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Smallest m >= n of the form 2^k * c, c in {1, 3, 5, 9}; FFTW is fastest on these.
std::size_t smooth_size(std::size_t n) {
  std::size_t best = 0;
  for (std::size_t c : {1, 3, 5, 9}) {
    std::size_t m = c;
    while (m < n) m *= 2;
    if (best == 0 || m < best) best = m;
  }
  return best;
}

template <typename T>
struct FftwBuffer {
  T* ptr = nullptr;
  explicit FftwBuffer(std::size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct StencilEntry {
  std::array<long, 3> offset;
  double value;
};

std::vector<StencilEntry> stencil_entries(const Kernel& k, const std::vector<double>& samples) {
  const auto shape = k.stencil_shape3();
  std::array<long, 3> r{0, 0, 0};
  for (std::size_t a = 0; a < 3; ++a) r[a] = static_cast<long>(shape[a] / 2);
  std::vector<StencilEntry> out;
  std::size_t idx = 0;
  for (long a = -r[0]; a <= r[0]; ++a)
    for (long b = -r[1]; b <= r[1]; ++b)
      for (long c = -r[2]; c <= r[2]; ++c, ++idx)
        if (samples[idx] != 0.0) out.push_back({{a, b, c}, samples[idx]});
  return out;
}

// out[x] += sum_o w_o v[x - o] over the index box where x - o stays on the grid.
void stencil_sum(const std::vector<StencilEntry>& entries, const std::array<std::size_t, 3>& shape,
                 std::span<const double> v, std::span<double> out) {
  const long n0 = static_cast<long>(shape[0]), n1 = static_cast<long>(shape[1]),
             n2 = static_cast<long>(shape[2]);
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& e : entries) {
    const auto [oa, ob, oc] = e.offset;
    const long i0 = std::max(0L, oa), i1 = std::min(n0, n0 + oa);
    const long j0 = std::max(0L, ob), j1 = std::min(n1, n1 + ob);
    const long k0 = std::max(0L, oc), k1 = std::min(n2, n2 + oc);
    for (long i = i0; i < i1; ++i)
      for (long j = j0; j < j1; ++j) {
        double* o = out.data() + (i * n1 + j) * n2;
        const double* s = v.data() + ((i - oa) * n1 + (j - ob)) * n2 - oc;
        for (long k = k0; k < k1; ++k) o[k] += e.value * s[k];
      }
  }
}

}  // namespace

struct ConvolutionPlan::Impl {
  GridSpec grid;
  Kernel kernel;
  Engine engine;
  std::array<std::size_t, 3> shape;
  std::vector<double> edge;  // trapezoid weight / cell volume
  std::vector<StencilEntry> entries;
  std::array<std::vector<StencilEntry>, 3> gradient_entries;

  std::array<std::size_t, 3> padded{1, 1, 1};
  std::size_t padded_real = 0, padded_complex = 0;
  fftw_plan forward = nullptr, backward = nullptr;
  std::vector<std::complex<double>> spectrum;

  Impl(GridSpec g, Kernel k, Engine e) : grid(std::move(g)), kernel(std::move(k)), engine(e), shape(grid.shape3()) {}

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  void build_fourier() {
    const auto kshape = kernel.stencil_shape3();
    for (std::size_t a = 0; a < 3; ++a)
      padded[a] = shape[a] == 1 ? 1 : smooth_size(shape[a] + kshape[a] - 1);
    padded_real = padded[0] * padded[1] * padded[2];
    padded_complex = padded[0] * padded[1] * (padded[2] / 2 + 1);

    FftwBuffer<double> real(padded_real);
    FftwBuffer<fftw_complex> cplx(padded_complex);
    const std::size_t off = 3 - grid.dim();
    std::vector<int> dims;
    for (std::size_t a = off; a < 3; ++a) dims.push_back(static_cast<int>(padded[a]));
    {
      std::lock_guard lock(planner_mutex());
      forward = fftw_plan_dft_r2c(static_cast<int>(dims.size()), dims.data(), real.ptr, cplx.ptr, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r(static_cast<int>(dims.size()), dims.data(), cplx.ptr, real.ptr, FFTW_ESTIMATE);
    }
    if (!forward || !backward) throw NumericError("FFTW could not create a plan");

    std::fill(real.ptr, real.ptr + padded_real, 0.0);
    for (const auto& e : entries) {
      std::array<std::size_t, 3> w{};
      for (std::size_t a = 0; a < 3; ++a) {
        const long m = static_cast<long>(padded[a]);
        w[a] = static_cast<std::size_t>(((e.offset[a] % m) + m) % m);
      }
      real.ptr[(w[0] * padded[1] + w[1]) * padded[2] + w[2]] = e.value;
    }
    fftw_execute_dft_r2c(forward, real.ptr, cplx.ptr);
    spectrum.resize(padded_complex);
    for (std::size_t i = 0; i < padded_complex; ++i) spectrum[i] = {cplx.ptr[i][0], cplx.ptr[i][1]};
  }

  void weighted_input(std::span<const double> v, std::vector<double>& out) const {
    out.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * edge[i];
  }

  void apply(std::span<const double> v, std::span<double> out) const {
    std::vector<double> ve;
    weighted_input(v, ve);
    const double cell = grid.cell_volume();
    if (engine == Engine::Direct) {
      stencil_sum(entries, shape, ve, out);
      for (double& x : out) x *= cell;
      return;
    }
    FftwBuffer<double> real(padded_real);
    FftwBuffer<fftw_complex> cplx(padded_complex);
    std::fill(real.ptr, real.ptr + padded_real, 0.0);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < shape[0]; ++i)
      for (std::size_t j = 0; j < shape[1]; ++j, idx += shape[2])
        std::copy_n(ve.data() + idx, shape[2], real.ptr + (i * padded[1] + j) * padded[2]);
    fftw_execute_dft_r2c(forward, real.ptr, cplx.ptr);
    for (std::size_t i = 0; i < padded_complex; ++i) {
      const std::complex<double> z = std::complex<double>(cplx.ptr[i][0], cplx.ptr[i][1]) * spectrum[i];
      cplx.ptr[i][0] = z.real();
      cplx.ptr[i][1] = z.imag();
    }
    fftw_execute_dft_c2r(backward, cplx.ptr, real.ptr);
    const double scale = cell / static_cast<double>(padded_real);
    idx = 0;
    for (std::size_t i = 0; i < shape[0]; ++i)
      for (std::size_t j = 0; j < shape[1]; ++j)
        for (std::size_t k = 0; k < shape[2]; ++k, ++idx)
          out[idx] = real.ptr[(i * padded[1] + j) * padded[2] + k] * scale;
  }
};

ConvolutionPlan::ConvolutionPlan(GridSpec grid, Kernel kernel, Engine engine) {
  if (grid.dim() != kernel.dim())
    throw ShapeError("kernel dimension " + std::to_string(kernel.dim()) + " differs from grid dimension " +
                     std::to_string(grid.dim()));
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    const double g = grid.spacing()[i], k = kernel.spacing()[i];
    if (std::abs(g - k) > 1e-12 * g)
      throw ShapeError("kernel spacing " + format_double(k) + " differs from grid spacing " + format_double(g));
  }
  auto impl = std::make_shared<Impl>(std::move(grid), std::move(kernel), engine);
  impl->edge = trapezoid_weights(impl->grid);
  const double cell = impl->grid.cell_volume();
  for (double& e : impl->edge) e /= cell;
  impl->entries = stencil_entries(impl->kernel, impl->kernel.samples());
  for (std::size_t a = 0; a < impl->grid.dim(); ++a)
    impl->gradient_entries[a] = stencil_entries(impl->kernel, impl->kernel.gradient_samples(a));
  if (engine == Engine::Fourier) impl->build_fourier();
  impl_ = std::move(impl);
}

Engine ConvolutionPlan::engine() const noexcept { return impl_->engine; }
const GridSpec& ConvolutionPlan::grid() const noexcept { return impl_->grid; }
const Kernel& ConvolutionPlan::kernel() const noexcept { return impl_->kernel; }

ConvolutionPlan ConvolutionPlan::with_engine(Engine engine) const {
  return ConvolutionPlan(impl_->grid, impl_->kernel, engine);
}

std::vector<std::size_t> ConvolutionPlan::padded_counts() const {
  if (impl_->engine == Engine::Direct) return {};
  return {impl_->padded.begin() + (3 - impl_->grid.dim()), impl_->padded.end()};
}

void ConvolutionPlan::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != impl_->grid.size() || out.size() != impl_->grid.size())
    throw ShapeError("field length does not match the convolution grid");
  require_finite(v, "convolution input");
  impl_->apply(v, out);
}

Field ConvolutionPlan::operator()(const Field& v) const {
  if (!(v.grid == impl_->grid)) throw ShapeError("field grid differs from the convolution plan's grid");
  Field out = Field::zeros(v.grid);
  apply(v.values, out.values);
  return out;
}

void ConvolutionPlan::apply_gradient(std::span<const double> v, std::span<double> out, std::size_t axis) const {
  if (axis >= impl_->grid.dim()) throw ParameterError("gradient axis out of range");
  if (v.size() != impl_->grid.size() || out.size() != impl_->grid.size())
    throw ShapeError("field length does not match the convolution grid");
  require_finite(v, "convolution input");
  std::vector<double> ve;
  impl_->weighted_input(v, ve);
  stencil_sum(impl_->gradient_entries[axis], impl_->shape, ve, out);
  const double cell = impl_->grid.cell_volume();
  for (double& x : out) x *= cell;
}

Field convolve(const ConvolutionPlan& plan, const Field& v) { return plan(v); }

Field convolve_gradient(const ConvolutionPlan& plan, const Field& v, std::size_t axis) {
  if (!(v.grid == plan.grid())) throw ShapeError("field grid differs from the convolution plan's grid");
  Field out = Field::zeros(v.grid);
  plan.apply_gradient(v.values, out.values, axis);
  return out;
}

namespace {

struct Lemma21Norms {
  std::vector<bool> mask;
  WeightedNorm interior, full;
  Lemma21Norms(const GridSpec& g, const Weight& w, double p)
      : mask(interior_mask(g, 1.0)), interior(g, w, p, &mask), full(g, w, p) {}
};

void accumulate_ratio(const ConvolutionPlan& plan, const Lemma21Norms& norms, const Field& u,
                      std::vector<double>& scratch, Lemma21Report& report) {
  const double den = norms.full(u.values);
  if (!(den > 0.0)) return;
  scratch.resize(u.values.size());
  plan.apply(u.values, scratch);
  report.max_ratio = std::max(report.max_ratio, norms.interior(scratch) / den);
  ++report.trials;
}

Lemma21Report start_report(const ConvolutionPlan& plan, const Weight& weight, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must satisfy 1 < p < inf");
  if (weight.dim() != plan.grid().dim()) throw ShapeError("weight dimension differs from grid dimension");
  plan.grid().require_unit_margin();
  Lemma21Report r;
  r.bound = std::pow(weight.K(), 1.0 / p) * plan.kernel().l1_norm();
  return r;
}

}  // namespace

Lemma21Report certify_lemma21(const ConvolutionPlan& plan, const Weight& weight, double p,
                              std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  Lemma21Report report = start_report(plan, weight, p);
  const Lemma21Norms norms(plan.grid(), weight, p);
  std::mt19937_64 rng(seed);
  std::vector<double> scratch;
  while (report.trials < trials) accumulate_ratio(plan, norms, random_field(plan.grid(), rng), scratch, report);
  report.pass = report.max_ratio <= report.bound * (1.0 + 1e-6);
  return report;
}

Lemma21Report certify_lemma21(const ConvolutionPlan& plan, const Weight& weight, double p,
                              std::span<const Field> fields) {
  Lemma21Report report = start_report(plan, weight, p);
  const Lemma21Norms norms(plan.grid(), weight, p);
  std::vector<double> scratch;
  for (const auto& u : fields) {
    if (!(u.grid == plan.grid())) throw ShapeError("field grid differs from the convolution plan's grid");
    accumulate_ratio(plan, norms, u, scratch, report);
  }
  if (report.trials == 0) throw InputError("no field with nonzero norm to certify");
  report.pass = report.max_ratio <= report.bound * (1.0 + 1e-6);
  return report;
}

const char* engine_name(Engine e) { return e == Engine::Direct ? "direct" : "fourier"; }

std::vector<BenchRow> benchmark(std::span<const std::size_t> sizes, const BenchSettings& s) {
  if (sizes.empty()) throw InputError("benchmark needs at least one size");
  if (s.engines.empty()) throw InputError("benchmark needs at least one engine");
  using clock = std::chrono::steady_clock;
  struct Case {
    ConvolutionPlan plan;
    Field v;
    Field out;
  };
  std::vector<Case> cases;
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    const GridSpec grid = GridSpec::centered(s.dim, n, s.half_width);
    const Kernel kernel = make_kernel(s.family, s.dim, grid.spacing(), 1.0);
    const Field v = random_field(grid, s.seed);
    const ConvolutionPlan direct(grid, kernel, Engine::Direct);
    const Field reference = direct(v);

    for (Engine e : s.engines) {
      ConvolutionPlan plan = e == Engine::Direct ? direct : direct.with_engine(e);
      Field out = plan(v);
      double diff = 0.0;
      for (std::size_t i = 0; i < out.values.size(); ++i)
        diff = std::max(diff, std::abs(out.values[i] - reference.values[i]));
      if (diff > 1e-10)
        throw NumericError(std::string(engine_name(e)) + " engine disagrees with direct by " + format_double(diff));
      cases.push_back({std::move(plan), v, std::move(out)});
      rows.push_back({e, grid.size(), INFINITY, diff});
    }
  }

  // Trials cycle through every case so slow phases of a shared machine hit all
  // of them alike. Each row keeps its fastest single call.
  for (std::size_t t = 0; t < std::max<std::size_t>(s.trials, 1); ++t)
    for (std::size_t c = 0; c < cases.size(); ++c) {
      auto& [plan, v, out] = cases[c];
      double& best = rows[c].seconds_per_call;
      const auto start = clock::now();
      auto last = start;
      do {
        plan.apply(v.values, out.values);
        const auto now = clock::now();
        best = std::min(best, std::chrono::duration<double>(now - last).count());
        last = now;
      } while (std::chrono::duration<double>(last - start).count() < s.min_seconds);
    }
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "engine,points,seconds_per_call,max_abs_diff_vs_direct\n";
  for (const auto& r : rows)
    out << engine_name(r.engine) << ',' << r.points << ',' << format_double(r.seconds_per_call) << ','
        << format_double(r.max_abs_diff_vs_direct) << '\n';
}

}  // namespace nfield
