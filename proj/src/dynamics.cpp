#include "nfield/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nfield/analysis.hpp"
#include "nfield/error.hpp"
#include "nfield/random_field.hpp"

namespace nfield {

ModelParams::ModelParams(ConvolutionPlan p, FiringRate f, double stimulus)
    : plan(std::move(p)), firing(f), h(stimulus) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("external stimulus must satisfy h > 0");
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || dt > 0.1) throw ParameterError("time step must satisfy 0 < dt <= 0.1");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be finite and nonnegative");
  if (t_end > 0.0 && t_end < dt) throw ParameterError("t_end must be 0 or at least dt");
  if (record_every < 1) throw ParameterError("record_every must be at least 1");
}

std::size_t SimConfig::steps() const {
  if (t_end == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

namespace {

void require_grid(const ModelParams& params, const Field& u) {
  if (!(u.grid == params.grid())) throw ShapeError("state grid differs from the model grid");
}

struct Workspace {
  std::vector<double> fu, conv;
};

void rhs_into(const ModelParams& params, std::span<const double> u, std::span<double> out, Workspace& ws) {
  ws.fu.resize(u.size());
  ws.conv.resize(u.size());
  params.firing.apply(u, ws.fu);
  params.plan.apply(ws.fu, ws.conv);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = -u[i] + ws.conv[i] + params.h;
}

void exp_euler_into(const ModelParams& params, std::vector<double>& u, double dt, Workspace& ws) {
  ws.fu.resize(u.size());
  ws.conv.resize(u.size());
  params.firing.apply(u, ws.fu);
  params.plan.apply(ws.fu, ws.conv);
  // gain = 1 - decay is exact here, so the update is a convex combination.
  const double decay = std::exp(-dt);
  const double gain = 1.0 - decay;
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = decay * u[i] + gain * (ws.conv[i] + params.h);
}

struct Rk4Workspace {
  Workspace ws;
  std::vector<double> k1, k2, k3, k4, tmp;
};

void rk4_into(const ModelParams& params, std::vector<double>& u, double dt, Rk4Workspace& w) {
  const std::size_t n = u.size();
  for (auto* v : {&w.k1, &w.k2, &w.k3, &w.k4, &w.tmp}) v->resize(n);
  rhs_into(params, u, w.k1, w.ws);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = u[i] + 0.5 * dt * w.k1[i];
  rhs_into(params, w.tmp, w.k2, w.ws);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = u[i] + 0.5 * dt * w.k2[i];
  rhs_into(params, w.tmp, w.k3, w.ws);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = u[i] + dt * w.k3[i];
  rhs_into(params, w.tmp, w.k4, w.ws);
  for (std::size_t i = 0; i < n; ++i) u[i] += dt / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

void require_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void rhs(const ModelParams& params, std::span<const double> u, std::span<double> out) {
  if (u.size() != params.grid().size() || out.size() != u.size())
    throw ShapeError("state length does not match the model grid");
  Workspace ws;
  rhs_into(params, u, out, ws);
}

Field rhs(const ModelParams& params, const Field& u) {
  require_grid(params, u);
  Field out = Field::zeros(u.grid);
  rhs(params, u.values, out.values);
  return out;
}

Field step_exponential_euler(const ModelParams& params, const Field& u, double dt) {
  require_grid(params, u);
  require_dt(dt);
  Field out = u;
  Workspace ws;
  exp_euler_into(params, out.values, dt, ws);
  return out;
}

Field step_rk4(const ModelParams& params, const Field& u, double dt) {
  require_grid(params, u);
  require_dt(dt);
  Field out = u;
  Rk4Workspace ws;
  rk4_into(params, out.values, dt, ws);
  return out;
}

Field integrate(const ModelParams& params, const SimConfig& config, const Field& u0, const StepObserver& observer) {
  config.validate();
  require_grid(params, u0);
  require_finite(u0.values, "initial state");
  Field u = u0;
  if (observer) observer(0, 0.0, u.values);

  const std::size_t steps = config.steps();
  Rk4Workspace ws;
  for (std::size_t s = 1; s <= steps; ++s) {
    const bool last = s == steps;
    const double dt = last ? config.t_end - static_cast<double>(s - 1) * config.dt : config.dt;
    try {
      if (config.integrator == Integrator::ExponentialEuler)
        exp_euler_into(params, u.values, dt, ws.ws);
      else
        rk4_into(params, u.values, dt, ws);
    } catch (const NumericError&) {
      throw DivergenceError(s);
    }
    if (!all_finite(u.values)) throw DivergenceError(s);
    if (observer) observer(s, last ? config.t_end : static_cast<double>(s) * config.dt, u.values);
  }
  return u;
}

namespace {

class Recorder {
 public:
  Recorder(const ModelParams& params, const SimConfig& config, const Weight& weight, double p)
      : params_(params), config_(config), norm_(params.grid(), weight, p), steps_(config.steps()) {
    if (params.firing.strictly_increasing())
      u0_ = homogeneous_equilibrium(params.firing, params.kernel().l1_norm(), params.h).u0;
  }

  bool wants(std::size_t step) const { return step % config_.record_every == 0 || step == steps_; }

  void record(double t, std::span<const double> u) {
    series.t.push_back(t);
    series.lp_norm.push_back(norm_(u));
    series.sup_norm.push_back(sup_norm(u));
    if (u0_) {
      const Field f(params_.grid(), {u.begin(), u.end()});
      series.lyapunov_G.push_back(lyapunov_G(f, params_, *u0_));
      series.dG_dt.push_back(lyapunov_rate(f, params_));
    }
  }

  DiagnosticsSeries series;

 private:
  const ModelParams& params_;
  const SimConfig& config_;
  WeightedNorm norm_;
  std::size_t steps_;
  std::optional<double> u0_;
};

}  // namespace

Trajectory simulate(const ModelParams& params, const SimConfig& config, const Field& u0, const Weight& weight,
                    double p) {
  config.validate();
  Recorder rec(params, config, weight, p);
  Trajectory traj;
  integrate(params, config, u0, [&](std::size_t step, double t, std::span<const double> u) {
    if (!rec.wants(step)) return;
    rec.record(t, u);
    traj.times.push_back(t);
    traj.snapshots.emplace_back(params.grid(), std::vector<double>(u.begin(), u.end()));
  });
  traj.diagnostics = std::move(rec.series);
  return traj;
}

DiagnosticsRun simulate_diagnostics(const ModelParams& params, const SimConfig& config, const Field& u0,
                                    const Weight& weight, double p) {
  config.validate();
  Recorder rec(params, config, weight, p);
  Field final_state = integrate(params, config, u0, [&](std::size_t step, double t, std::span<const double> u) {
    if (rec.wants(step)) rec.record(t, u);
  });
  return {std::move(rec.series), std::move(final_state)};
}

Equilibrium homogeneous_equilibrium(const FiringRate& firing, double l1_norm, double h) {
  if (!(l1_norm >= 0.0) || !std::isfinite(l1_norm)) throw ParameterError("||J||_1 must be finite and nonnegative");
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("external stimulus must satisfy h > 0");
  auto g = [&](double u) { return u - l1_norm * firing(u) - h; };

  double lo = h, hi = l1_norm * firing.bound_a() + h;
  double root;
  if (g(lo) >= 0.0) {
    root = lo;
  } else if (g(hi) <= 0.0) {
    root = hi;
  } else {
    // g(lo) < 0 < g(hi); halve until the bracket is two adjacent doubles.
    for (;;) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    root = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
  }
  return {root, l1_norm * firing.k1() < 1.0, std::abs(g(root))};
}

RestingStimulus resting_stimulus(const FiringRate& firing, double l1_norm, double u0) {
  if (!std::isfinite(u0)) throw ParameterError("resting potential must be finite");
  if (!(l1_norm >= 0.0) || !std::isfinite(l1_norm)) throw ParameterError("||J||_1 must be finite and nonnegative");
  const double h = u0 - l1_norm * firing(u0);
  return {h, h > 0.0};
}

double lipschitz_quotient(const ModelParams& params, const WeightedNorm& norm, const Field& u, const Field& v) {
  const Field ru = rhs(params, u), rv = rhs(params, v);
  const double den = norm.distance(u.values, v.values);
  if (!(den > 0.0)) throw InputError("Lipschitz quotient needs u != v");
  return norm.distance(ru.values, rv.values) / den;
}

namespace {

LipschitzReport start_lipschitz(const ModelParams& params, const Weight& weight, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must satisfy 1 < p < inf");
  LipschitzReport r;
  r.bound = 1.0 + std::pow(weight.K(), 1.0 / p) * params.kernel().l1_norm() * params.firing.k1();
  return r;
}

}  // namespace

LipschitzReport certify_lipschitz(const ModelParams& params, const Weight& weight, double p, std::size_t trials,
                                  std::uint64_t seed) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  LipschitzReport report = start_lipschitz(params, weight, p);
  const WeightedNorm norm(params.grid(), weight, p);
  std::mt19937_64 rng(seed);
  while (report.trials < trials) {
    Field u = random_field(params.grid(), rng);
    Field v = random_field(params.grid(), rng);
    // Alternate far pairs with nearby ones, where the local slope of f dominates.
    if (report.trials % 2 == 1)
      for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] = u.values[i] + 0.05 * v.values[i];
    if (!(norm.distance(u.values, v.values) > 0.0)) continue;
    report.max_quotient = std::max(report.max_quotient, lipschitz_quotient(params, norm, u, v));
    ++report.trials;
  }
  report.pass = report.max_quotient <= report.bound * (1.0 + 1e-6);
  return report;
}

LipschitzReport certify_lipschitz(const ModelParams& params, const Weight& weight, double p,
                                  std::span<const std::pair<Field, Field>> pairs) {
  LipschitzReport report = start_lipschitz(params, weight, p);
  const WeightedNorm norm(params.grid(), weight, p);
  for (const auto& [u, v] : pairs) {
    if (!(norm.distance(u.values, v.values) > 0.0)) continue;
    report.max_quotient = std::max(report.max_quotient, lipschitz_quotient(params, norm, u, v));
    ++report.trials;
  }
  if (report.trials == 0) throw InputError("no pair with u != v to certify");
  report.pass = report.max_quotient <= report.bound * (1.0 + 1e-6);
  return report;
}

}  // namespace nfield
