// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Tolerances and runtime budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nfield/analysis.hpp"
#include "nfield/cli.hpp"
#include "nfield/convolution.hpp"
#include "nfield/dynamics.hpp"
#include "nfield/error.hpp"
#include "nfield/random_field.hpp"
#include "nfield/text.hpp"
#include "oracles.hpp"

using namespace nfield;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("violated: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double x) { return format_double(x); }

const FiringRate kSigmoid = FiringRate::sigmoid(1.0, 2.0, 0.0);

ModelParams model(const GridSpec& g, const FiringRate& f = kSigmoid, double h = 0.1,
                  KernelFamily fam = KernelFamily::PolynomialBump, double mass = 1.0) {
  return ModelParams(ConvolutionPlan(g, make_kernel(fam, g.dim(), g.spacing(), mass)), f, h);
}

double ball_R(const ModelParams& m, const Weight& w, double p) {
  return m.firing.bound_a() * std::pow(w.K(), 1.0 / p) * m.kernel().l1_norm() + m.h;
}

Field scaled_to_norm(Field u, const WeightedNorm& norm, double target) {
  const double n = norm(u);
  for (double& v : u.values) v *= target / n;
  return u;
}

// 1. Unit mass of both weight families: ||1||_{p,rho} = 1.
Outcome norm_normalization() {
  Outcome o;
  struct Case {
    WeightFamily family;
    double param;
    std::size_t dim, points;
    double half_width;
  };
  // Even point counts keep the origin cusp of rho off the grid.
  const std::vector<Case> cases{{WeightFamily::Exponential, 1.0, 1, 40001, 20.0},
                                {WeightFamily::PolynomialDecay, 20.0, 1, 40001, 2.0},
                                {WeightFamily::Exponential, 1.0, 2, 1600, 20.0},
                                {WeightFamily::PolynomialDecay, 20.0, 2, 2000, 2.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const GridSpec g = GridSpec::centered(c.dim, c.points, c.half_width);
    const Field one = Field::constant(g, 1.0);
    const Weight w = make_weight(c.family, c.param, c.dim);
    for (double p : {1.5, 2.0, 3.0}) worst = std::max(worst, std::abs(weighted_lp_norm(one, w, p) - 1.0));
  }
  o.require(worst <= 1e-6, "|norm - 1| <= 1e-6");
  o.note("max |norm - 1| = " + fmt(worst));
  return o;
}

// 2. ||J*u|| <= K^{1/p} ||J||_1 ||u|| over random fields.
Outcome convolution_bound() {
  Outcome o;
  struct Case {
    std::size_t dim, points;
    double half_width, q;
  };
  std::size_t configs = 0;
  double worst = 0.0;
  for (const Case& c : {Case{1, 2049, 16.0, 2.0}, Case{2, 257, 8.0, 4.0}}) {
    const GridSpec g = GridSpec::centered(c.dim, c.points, c.half_width);
    const ConvolutionPlan plan(g, make_kernel(KernelFamily::PolynomialBump, c.dim, g.spacing(), 1.0));
    for (const Weight& w :
         {make_weight(WeightFamily::Exponential, 1.0, c.dim), make_weight(WeightFamily::PolynomialDecay, c.q, c.dim)}) {
      for (double p : {1.5, 2.0, 3.0}) {
        const auto r = certify_lemma21(plan, w, p, 1000, 100 + configs);
        ++configs;
        worst = std::max(worst, r.max_ratio / r.bound);
        o.require(r.pass && r.trials == 1000, "ratio <= bound (1 + 1e-6) for N=" + std::to_string(c.dim) +
                                                  ", p=" + fmt(p));
      }
    }
  }
  o.note(std::to_string(configs) + " configurations x 1000 fields, max ratio/bound = " + fmt(worst));
  return o;
}

// 3. Lipschitz quotient of the right-hand side.
Outcome rhs_lipschitz() {
  Outcome o;
  const GridSpec g = GridSpec::centered(1, 1025, 16.0);
  struct Case {
    FiringRate f;
    Weight w;
    double p;
  };
  const std::vector<Case> cases{
      {FiringRate::sigmoid(1.0, 4.0, 0.0), make_weight(WeightFamily::Exponential, 1.0, 1), 2.0},
      {FiringRate::ramp(1.0, 2.0, 0.1), make_weight(WeightFamily::PolynomialDecay, 2.0, 1), 1.5}};
  for (const auto& c : cases) {
    const auto r = certify_lipschitz(model(g, c.f), c.w, c.p, 1000);
    o.require(r.pass && r.trials == 1000, "quotient <= 1 + K^{1/p} ||J||_1 k1");
    o.note("max quotient " + fmt(r.max_quotient) + " vs bound " + fmt(r.bound));
  }
  return o;
}

// 4. Absorbing ball from ||u(0)|| = 10 R.
Outcome absorbing_ball() {
  Outcome o;
  const GridSpec g = GridSpec::centered(1, 1025, 16.0);
  const auto m = model(g);
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  const double p = 2.0, R = ball_R(m, w, p);
  const WeightedNorm norm(g, w, p);
  SimConfig c;
  c.dt = 1e-3;
  c.t_end = 30.0;
  c.record_every = 1;
  double worst = -INFINITY, after = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const Field u0 = scaled_to_norm(random_field(g, seed), norm, 10 * R);
    const auto series = simulate_diagnostics(m, c, u0, w, p).series;
    const auto r = certify_absorbing(series, w, p, m, 0.01);
    o.require(r.max_violation <= 1e-2, "||u(t)|| <= e^{-t} ||u(0)|| + R + 1e-2 (seed " + std::to_string(seed) + ")");
    o.require(r.max_after_entry <= R + r.epsilon, "inside R + 0.01 R after the entry time (seed " +
                                                      std::to_string(seed) + ")");
    worst = std::max(worst, r.max_violation);
    after = std::max(after, r.max_after_entry);
  }
  o.note("R = " + fmt(R) + ", max violation " + fmt(worst) + ", max norm after entry " + fmt(after));
  return o;
}

// 5. Sup-norm bound on the attractor and per-step invariance of the sup ball.
Outcome linf_bound() {
  Outcome o;
  const GridSpec g = GridSpec::centered(1, 1025, 16.0);
  const auto m = model(g);
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  const double r = m.firing.bound_a() * m.kernel().l1_norm() + m.h;
  SimConfig c;
  c.record_every = 10;
  const auto sample = sample_attractor(m, c, w, 2.0, {8, 20.0, 1.0});
  const auto rep = certify_linf_bound(sample, m);
  o.require(rep.pass && rep.max_sup <= r + 1e-6, "post-transient sup|u| <= a ||J||_1 + h + 1e-6");
  o.note("r = " + fmt(r) + ", post-transient max sup " + fmt(rep.max_sup));

  double excess = -INFINITY;
  std::mt19937_64 rng(77);
  for (int i = 0; i < 8; ++i) {
    Field u0 = random_field(g, rng);
    const double s = sup_norm(u0.values);
    for (double& v : u0.values) v *= r / s;
    SimConfig run;
    run.t_end = 5.0;
    integrate(m, run, u0, [&](std::size_t, double, std::span<const double> u) {
      excess = std::max(excess, sup_norm(u) - r);
    });
  }
  // Slack covers the rounding in the stencil mass, which equals ||J||_1 to about 1e-16.
  o.require(excess <= 1e-12 * r, "sup|u| never exceeds a ||J||_1 + h when started inside");
  o.note("max per-step excess " + fmt(excess));
  return o;
}

// 6. Lyapunov decay along sigmoid trajectories.
Outcome lyapunov_decay() {
  Outcome o;
  const GridSpec g = GridSpec::centered(1, 1025, 16.0);
  const auto m = model(g);
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  const double u0 = homogeneous_equilibrium(m.firing, m.kernel().l1_norm(), m.h).u0;
  SimConfig c;
  c.dt = 1e-3;
  c.t_end = 20.0;
  c.record_every = 1;
  double worst_rise = -INFINITY, worst_fd = 0.0, max_rate = -INFINITY;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = simulate_diagnostics(m, c, resting_with_bumps(g, u0, seed), w, 2.0).series;
    bool mono = true, fd_ok = true, sign_ok = true;
    for (std::size_t k = 0; k < s.size(); ++k) {
      sign_ok = sign_ok && s.dG_dt[k] <= 0.0;
      max_rate = std::max(max_rate, s.dG_dt[k]);
      if (k + 1 == s.size()) break;
      const double G0 = s.lyapunov_G[k], G1 = s.lyapunov_G[k + 1];
      worst_rise = std::max(worst_rise, (G1 - G0) / (1.0 + std::abs(G0)));
      mono = mono && G1 <= G0 + 1e-10 * (1.0 + std::abs(G0));
      const double fd = (G1 - G0) / (s.t[k + 1] - s.t[k]);
      const double tol = std::max(1e-4, 0.05 * std::abs(s.dG_dt[k]));
      worst_fd = std::max(worst_fd, std::abs(fd - s.dG_dt[k]) / tol);
      fd_ok = fd_ok && std::abs(fd - s.dG_dt[k]) <= tol;
    }
    const std::string tag = " (seed " + std::to_string(seed) + ")";
    o.require(mono, "G nonincreasing within 1e-10 (1 + |G|)" + tag);
    o.require(fd_ok, "dG/dt matches the rate within max(1e-4, 5%)" + tag);
    o.require(sign_ok, "rate <= 0" + tag);
  }
  o.note("max relative rise " + fmt(worst_rise) + ", max fd error / tol " + fmt(worst_fd) + ", max rate " +
         fmt(max_rate));
  return o;
}

// 7. Homogeneous equilibrium.
Outcome equilibrium() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double residual = 0.0, agree = 0.0, round_trip = 0.0;
  std::size_t contraction = 0;
  for (int t = 0; t < 2000; ++t) {
    const FiringRate f = U(rng) < 0.8 ? FiringRate::sigmoid(0.5 + 2 * U(rng), 0.5 + 8 * U(rng), 2 * U(rng) - 1)
                                      : FiringRate::ramp(0.5 + 2 * U(rng), 0.5 + 4 * U(rng), 2 * U(rng) - 1);
    const double l1 = 3 * U(rng), h = 0.01 + U(rng);
    const auto eq = homogeneous_equilibrium(f, l1, h);
    residual = std::max(residual, eq.residual);
    residual = std::max(residual, std::abs(eq.u0 - l1 * f(eq.u0) - h));
    if (l1 * f.k1() < 1.0) {
      ++contraction;
      o.require(eq.unique, "contraction regime reports unique");
      const double ref = oracle::damped_fixed_point([&](double u) { return f(u); }, l1, h);
      agree = std::max(agree, std::abs(eq.u0 - ref));
    }
    const auto rs = resting_stimulus(f, l1, eq.u0);
    if (rs.in_model) round_trip = std::max(round_trip, std::abs(homogeneous_equilibrium(f, l1, rs.h).u0 - eq.u0));
  }
  o.require(residual <= 1e-12, "residual <= 1e-12");
  o.require(agree <= 1e-10, "bisection and damped iteration agree within 1e-10");
  o.require(round_trip <= 1e-10, "resting_stimulus round trip within 1e-10");
  o.note("max residual " + fmt(residual) + ", oracle gap " + fmt(agree) + " over " + std::to_string(contraction) +
         " contraction cases, round trip " + fmt(round_trip));
  return o;
}

// 8. Upper semicontinuity of the attractor in the kernel.
Outcome semicontinuity() {
  Outcome o;
  const GridSpec g = GridSpec::centered(1, 769, 24.0);
  const auto m = model(g);
  const Kernel j0 = m.kernel();
  const Kernel j1 = make_kernel(KernelFamily::Bump, 1, g.spacing(), 1.5);
  o.require(1.5 * kSigmoid.k1() < 1.0, "contraction regime");
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  SimConfig c;
  c.record_every = 100;
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  const auto res = semicontinuity_experiment(j0, j1, eps, m, c, w, 2.0, {4, 20.0, 1.0});
  auto F = [](double u) { return kSigmoid(u); };
  const double u_ref = oracle::damped_fixed_point(F, 1.0, 0.1);
  double gap = 0.0;
  std::string ds;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& row = res.rows[i];
    const double u_eps = oracle::damped_fixed_point(F, (1 - row.epsilon) + 1.5 * row.epsilon, 0.1);
    gap = std::max(gap, std::abs(row.semidistance - std::abs(u_eps - u_ref)));
    if (i > 0) o.require(row.semidistance < res.rows[i - 1].semidistance - 1e-5, "d(eps) strictly decreasing");
    ds += (ds.empty() ? "" : ", ") + fmt(row.semidistance);
  }
  o.require(gap <= 1e-4, "d(eps) = |u_eps - u_0| within 1e-4");
  o.require(res.contained, "all sampled states within R_max + 1e-3");
  o.note("d = [" + ds + "], oracle gap " + fmt(gap) + ", R_max " + fmt(res.R_max));
  return o;
}

// 9. Fourier and direct engines agree.
Outcome engine_equivalence() {
  Outcome o;
  double worst = 0.0;
  for (const GridSpec& g : {GridSpec::centered(1, 2049, 16.0), GridSpec::centered(2, 257, 8.0)}) {
    for (KernelFamily fam : {KernelFamily::PolynomialBump, KernelFamily::Bump}) {
      const ConvolutionPlan fourier(g, make_kernel(fam, g.dim(), g.spacing(), 1.0), Engine::Fourier);
      const ConvolutionPlan direct = fourier.with_engine(Engine::Direct);
      std::mt19937_64 rng(9);
      for (int t = 0; t < 100; ++t) {
        const Field v = random_field(g, rng);
        const Field a = fourier(v), b = direct(v);
        for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
      }
    }
  }
  o.require(worst <= 1e-10, "max |Fourier - Direct| <= 1e-10");
  o.note("max abs difference " + fmt(worst));
  return o;
}

// 10. Observed integrator orders.
Outcome integrator_orders() {
  Outcome o;
  const GridSpec g = GridSpec::centered(1, 257, 8.0);
  const auto m = model(g);
  const Field u0 = Field::sample(g, [](std::span<const double> x) {
    return 1.5 * std::exp(-x[0] * x[0] / 2.0) - 0.8 * std::exp(-(x[0] - 2.0) * (x[0] - 2.0));
  });
  auto solve = [&](double dt, Integrator in) {
    SimConfig c;
    c.dt = dt;
    c.t_end = 1.0;
    c.integrator = in;
    return integrate(m, c, u0);
  };
  const Field ref = solve(1e-4, Integrator::RK4);
  auto err = [&](const Field& u) {
    double e = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) e = std::max(e, std::abs(u.values[i] - ref.values[i]));
    return e;
  };
  auto study = [&](Integrator in, std::vector<double> dts, double lo, double hi, const char* name) {
    std::vector<double> errs;
    for (double dt : dts) errs.push_back(err(solve(dt, in)));
    std::string qs;
    for (std::size_t i = 1; i < errs.size(); ++i) {
      const double q = oracle::observed_order(errs[i - 1], errs[i]);
      o.require(q >= lo && q <= hi, std::string(name) + " order in [" + fmt(lo) + ", " + fmt(hi) + "]");
      qs += (qs.empty() ? "" : ", ") + fmt(q);
    }
    o.note(std::string(name) + " orders [" + qs + "]");
  };
  study(Integrator::ExponentialEuler, {0.02, 0.01, 0.005}, 0.8, 1.2, "exponential Euler");
  study(Integrator::RK4, {0.1, 0.05, 0.025}, 3.5, 4.3, "RK4");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "weighted norm of 1 equals 1", 1.0, norm_normalization},
      {2, "convolution norm bound", 120.0, convolution_bound},
      {3, "right-hand side Lipschitz bound", 60.0, rhs_lipschitz},
      {4, "absorbing ball", 120.0, absorbing_ball},
      {5, "sup-norm attractor bound", 120.0, linf_bound},
      {6, "Lyapunov decay", 120.0, lyapunov_decay},
      {7, "homogeneous equilibrium", 1.0, equilibrium},
      {8, "upper semicontinuity in the kernel", 300.0, semicontinuity},
      {9, "engine equivalence", 60.0, engine_equivalence},
      {10, "integrator orders", 120.0, integrator_orders},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.budget_seconds) {
      o.pass = false;
      o.note("runtime over budget");
    }
    if (!o.pass) ++failures;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, c.budget_seconds);
    std::printf("%s %d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
