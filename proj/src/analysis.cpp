#include "nfield/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "nfield/error.hpp"
#include "nfield/random_field.hpp"

namespace nfield {
namespace {

double ball_radius(const ModelParams& params, const Weight& weight, double p) {
  return params.firing.bound_a() * std::pow(weight.K(), 1.0 / p) * params.kernel().l1_norm() + params.h;
}

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must satisfy 1 < p < inf");
}

}  // namespace

AbsorbingReport certify_absorbing(const DiagnosticsSeries& series, const Weight& weight, double p,
                                  const ModelParams& params, double epsilon_fraction) {
  require_p(p);
  if (series.lp_norm.empty() || series.lp_norm.size() != series.t.size())
    throw InputError("absorbing-ball check needs a nonempty lp_norm series");
  if (!(epsilon_fraction > 0.0)) throw ParameterError("epsilon fraction must be positive");

  AbsorbingReport r;
  r.R = ball_radius(params, weight, p);
  r.epsilon = epsilon_fraction * r.R;
  const double lp0 = series.lp_norm.front();
  r.entry_time = lp0 > r.epsilon ? std::log(lp0 / r.epsilon) : 0.0;

  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < series.t.size(); ++i) step = std::min(step, series.t[i] - series.t[i - 1]);
  if (!std::isfinite(step)) step = 0.0;

  r.max_violation = -std::numeric_limits<double>::infinity();
  bool entered_ok = true;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    const double t = series.t[i];
    r.max_violation = std::max(r.max_violation, series.lp_norm[i] - (std::exp(-t) * lp0 + r.R));
    if (t > r.entry_time + step) {
      r.max_after_entry = std::max(r.max_after_entry, series.lp_norm[i]);
      entered_ok = entered_ok && series.lp_norm[i] <= r.R + r.epsilon;
    }
  }
  r.pass = r.max_violation <= 1e-2 && entered_ok;
  return r;
}

AbsorbingReport certify_absorbing(const Trajectory& trajectory, const Weight& weight, double p,
                                  const ModelParams& params, double epsilon_fraction) {
  return certify_absorbing(trajectory.diagnostics, weight, p, params, epsilon_fraction);
}

ModelSummary summarize(const ModelParams& params) {
  return {params.firing.bound_a(), params.kernel().l1_norm(), params.h, params.firing.k1()};
}

AttractorSample sample_attractor(const ModelParams& params, const SimConfig& config, const Weight& weight, double p,
                                 const AttractorSettings& settings) {
  require_p(p);
  if (settings.n_initial < 1) throw ParameterError("n_initial must be at least 1");
  if (!(settings.t_transient >= 5.0)) throw ParameterError("t_transient must be at least 5");
  if (!(settings.t_sample >= 0.0)) throw ParameterError("t_sample must be nonnegative");

  AttractorSample out;
  out.source = summarize(params);
  out.t_transient = settings.t_transient;
  out.t_sample = settings.t_sample;

  SimConfig run = config;
  run.t_end = settings.t_transient + settings.t_sample;
  run.validate();
  const std::size_t steps = run.steps();
  const double radius = 1.01 * ball_radius(params, weight, p);
  const WeightedNorm norm(params.grid(), weight, p);

  for (std::size_t i = 0; i < settings.n_initial; ++i) {
    std::mt19937_64 rng(config.seed + i);
    std::uniform_real_distribution<double> unit(0.05, 0.99);
    Field u0 = random_field(params.grid(), rng);
    while (!(norm(u0) > 0.0)) u0 = random_field(params.grid(), rng);
    const double scale = unit(rng) * radius / norm(u0);
    for (double& v : u0.values) v *= scale;
    out.initial_sup = std::max(out.initial_sup, sup_norm(u0.values));

    integrate(params, run, u0, [&](std::size_t step, double t, std::span<const double> u) {
      if (t < settings.t_transient - 1e-9) return;
      if (step % run.record_every != 0 && step != steps) return;
      out.snapshots.emplace_back(params.grid(), std::vector<double>(u.begin(), u.end()));
    });
  }
  return out;
}

LinfReport certify_linf_bound(const AttractorSample& sample, const ModelParams& params) {
  LinfReport r;
  r.r = params.firing.bound_a() * params.kernel().l1_norm() + params.h;
  for (const auto& s : sample.snapshots) r.max_sup = std::max(r.max_sup, sup_norm(s.values));
  r.pass = r.max_sup <= r.r + 1e-6 + std::exp(-sample.t_transient) * sample.initial_sup;
  return r;
}

double lyapunov_G(const Field& u, const ModelParams& params, double u0) {
  const FiringRate& f = params.firing;
  if (!f.strictly_increasing())
    throw InvertibilityError("the Lyapunov functional needs a strictly increasing firing rate");
  if (!(u.grid == params.grid())) throw ShapeError("state grid differs from the model grid");
  const double f0 = f(u0);
  const std::size_t n = u.values.size();
  std::vector<double> fu(n), phi(n), conv(n), drive(n);
  f.apply(u.values, fu);
  for (std::size_t i = 0; i < n; ++i) phi[i] = fu[i] - f0;
  params.plan.apply(phi, conv);

  // Resting drive f(u0) (J*1)(x) + h: equals u0 away from the faces and keeps
  // G exactly nonincreasing on the truncated box, where J*1 < ||J||_1.
  const std::vector<double> ones(n, 1.0);
  params.plan.apply(ones, drive);
  for (double& d : drive) d = f0 * d + params.h;

  const auto w = trapezoid_weights(u.grid);
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    g += w[i] * (-0.5 * phi[i] * conv[i] + f.inverse_integral(f0, fu[i]) - drive[i] * phi[i]);
  return g;
}

double lyapunov_rate(const Field& u, const ModelParams& params) {
  const FiringRate& f = params.firing;
  if (!f.strictly_increasing())
    throw InvertibilityError("the Lyapunov rate needs a strictly increasing firing rate");
  const Field du = rhs(params, u);
  const auto w = trapezoid_weights(u.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.derivative(u.values[i]) * du.values[i] * du.values[i];
  return -s;
}

H6Report check_h6(const Field& u, const ModelParams& params, double u0, std::span<const double> fractions) {
  if (!(u.grid == params.grid())) throw ShapeError("state grid differs from the model grid");
  if (fractions.empty()) throw InputError("check_h6 needs at least one box fraction");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0)) throw ParameterError("box fractions must lie in (0, 1]");
    if (i > 0 && !(fractions[i] > fractions[i - 1])) throw ParameterError("box fractions must be increasing");
  }
  const GridSpec& g = u.grid;
  const double f0 = params.firing(u0);
  const auto w = trapezoid_weights(g);
  std::vector<double> excess(u.values.size());
  for (std::size_t i = 0; i < excess.size(); ++i) excess[i] = w[i] * std::abs(params.firing(u.values[i]) - f0);

  H6Report r;
  std::array<double, 3> x{};
  std::span<double> xs(x.data(), g.dim());
  for (double frac : fractions) {
    double mass = 0.0;
    for (std::size_t k = 0; k < excess.size(); ++k) {
      g.point(k, xs);
      bool inside = true;
      for (std::size_t a = 0; a < g.dim(); ++a) {
        const double c = 0.5 * (g.lower(a) + g.upper(a));
        const double half = 0.5 * (g.upper(a) - g.lower(a));
        inside = inside && std::abs(x[a] - c) <= frac * half * (1.0 + 1e-12);
      }
      if (inside) mass += excess[k];
    }
    r.tail_masses.push_back(mass);
  }
  if (r.tail_masses.size() >= 2) {
    const double a = r.tail_masses[r.tail_masses.size() - 2], b = r.tail_masses.back();
    r.converged = std::abs(b - a) <= 1e-6 * std::max(std::abs(a), std::abs(b)) || (a == 0.0 && b == 0.0);
  } else {
    r.converged = false;
  }
  return r;
}

double semidistance(const AttractorSample& A, const AttractorSample& B, const Weight& weight, double p) {
  if (A.snapshots.empty() || B.snapshots.empty()) throw InputError("semidistance needs nonempty samples");
  const GridSpec& grid = A.snapshots.front().grid;
  for (const auto* s : {&A, &B})
    for (const auto& f : s->snapshots)
      if (!(f.grid == grid)) throw ShapeError("attractor samples live on different grids");
  const WeightedNorm norm(grid, weight, p);
  double worst = 0.0;
  for (const auto& a : A.snapshots) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : B.snapshots) {
      best = std::min(best, norm.distance(a.values, b.values));
      if (best == 0.0) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

SemicontinuityResult semicontinuity_experiment(const Kernel& j0, const Kernel& j1, std::span<const double> epsilons,
                                               const ModelParams& model, const SimConfig& config,
                                               const Weight& weight, double p, const AttractorSettings& settings) {
  require_p(p);
  if (epsilons.empty()) throw InputError("semicontinuity sweep needs at least one epsilon");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] >= 0.0 && epsilons[i] <= 1.0)) throw ParameterError("epsilons must lie in [0, 1]");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ParameterError("epsilons must be strictly decreasing");
  }
  const GridSpec& grid = model.grid();
  const Engine engine = model.plan.engine();
  auto params_for = [&](const Kernel& k) { return ModelParams(ConvolutionPlan(grid, k, engine), model.firing, model.h); };

  const ModelParams base = params_for(j0);
  const AttractorSample reference = sample_attractor(base, config, weight, p, settings);

  std::vector<ModelParams> blended;
  double l1_max = j0.l1_norm();
  for (double eps : epsilons) {
    blended.push_back(params_for(blend_kernels(j0, j1, eps)));
    l1_max = std::max(l1_max, blended.back().kernel().l1_norm());
  }

  SemicontinuityResult out;
  out.R_max = model.firing.bound_a() * std::pow(weight.K(), 1.0 / p) * l1_max + model.h;
  const WeightedNorm norm(grid, weight, p);
  out.contained = true;
  auto contained = [&](const AttractorSample& s, SemicontinuityRow& row) {
    for (const auto& f : s.snapshots) {
      const double lp = norm(f.values);
      row.max_lp_norm = std::max(row.max_lp_norm, lp);
      row.max_sup_norm = std::max(row.max_sup_norm, sup_norm(f.values));
      out.contained = out.contained && lp <= out.R_max + 1e-3;
    }
  };
  SemicontinuityRow ref_row;
  contained(reference, ref_row);

  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const AttractorSample sample = sample_attractor(blended[i], config, weight, p, settings);
    SemicontinuityRow row;
    row.epsilon = epsilons[i];
    row.R_max = out.R_max;
    row.l1_norm = blended[i].kernel().l1_norm();
    row.semidistance = semidistance(sample, reference, weight, p);
    contained(sample, row);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace nfield
