#include "nfield/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <random>

#include "nfield/analysis.hpp"
#include "nfield/error.hpp"
#include "nfield/random_field.hpp"
#include "nfield/snapshot.hpp"
#include "nfield/text.hpp"

namespace nfield {
namespace {

using json = nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistenceError("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw PersistenceError("failed writing '" + path.string() + "'");
}

std::string cell(const std::vector<double>& v, std::size_t i) { return i < v.size() ? format_double(v[i]) : ""; }

int cmd_simulate(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const ModelParams params = make_model(c);
  const Weight weight = make_weight(c);
  const double u0 = homogeneous_equilibrium(params.firing, params.kernel().l1_norm(), params.h).u0;
  const Field init = resting_with_bumps(params.grid(), u0, c.sim.seed);
  const DiagnosticsRun res = simulate_diagnostics(params, make_sim_config(c), init, weight, c.model.p);

  auto csv = open_output(dir / "diagnostics.csv");
  csv << "t,lp_norm,sup_norm,lyapunov_G,dG_dt\n";
  const auto& s = res.series;
  for (std::size_t i = 0; i < s.size(); ++i)
    csv << format_double(s.t[i]) << ',' << format_double(s.lp_norm[i]) << ',' << format_double(s.sup_norm[i]) << ','
        << cell(s.lyapunov_G, i) << ',' << cell(s.dG_dt, i) << '\n';
  write_snapshot(res.final_state, dir / "final.nfld");
  out << "simulate: " << s.size() << " records to t = " << format_double(s.t.back()) << ", final sup|u| = "
      << format_double(sup_norm(res.final_state.values)) << '\n';
  return 0;
}

int cmd_verify(const RunConfig& c, const std::filesystem::path& dir, const RunOptions& opt, std::ostream& out) {
  const ModelParams params = make_model(c);
  const Weight weight = make_weight(c);
  const double p = c.model.p;
  const std::size_t trials = opt.trials.value_or(200);
  json checks = json::array();
  bool all = true;
  auto add = [&](const char* name, bool pass, json detail) {
    json entry{{"name", name}, {"pass", pass}};
    entry.update(detail);
    checks.push_back(std::move(entry));
    all = all && pass;
    out << (pass ? "PASS " : "FAIL ") << name << '\n';
  };

  const H2Report h2 = verify_h2(weight, params.grid());
  add("weight_domination", h2.pass, {{"K", weight.K()}, {"K_observed", h2.K_observed}});

  const H4Report h4 = verify_h4(params.kernel());
  add("kernel_derivative_bound", h4.pass, {{"S", params.kernel().deriv_bound()}, {"S_observed", h4.S_observed}});

  const Lemma21Report l21 = certify_lemma21(params.plan, weight, p, trials, c.sim.seed);
  add("convolution_norm_bound", l21.pass, {{"bound", l21.bound}, {"max_ratio", l21.max_ratio}, {"trials", l21.trials}});

  const LipschitzReport lip = certify_lipschitz(params, weight, p, trials, c.sim.seed);
  add("rhs_lipschitz", lip.pass, {{"bound", lip.bound}, {"max_quotient", lip.max_quotient}, {"trials", lip.trials}});

  // Absorbing ball from an initial state of norm 10 R.
  const double R = params.firing.bound_a() * std::pow(weight.K(), 1.0 / p) * params.kernel().l1_norm() + params.h;
  Field init = random_field(params.grid(), c.sim.seed);
  const double n0 = WeightedNorm(params.grid(), weight, p)(init);
  if (!(n0 > 0.0)) throw NumericError("random initial condition has zero norm");
  for (double& v : init.values) v *= 10.0 * R / n0;
  const DiagnosticsRun absorbing = simulate_diagnostics(params, make_sim_config(c), init, weight, p);
  const AbsorbingReport ab = certify_absorbing(absorbing.series, weight, p, params);
  add("absorbing_ball", ab.pass,
      {{"R", ab.R}, {"max_violation", ab.max_violation}, {"epsilon", ab.epsilon}, {"entry_time", ab.entry_time},
       {"max_norm_after_entry", ab.max_after_entry}});

  const AttractorSample sample = sample_attractor(params, make_sim_config(c), weight, p, make_attractor_settings(c));
  const LinfReport linf = certify_linf_bound(sample, params);
  add("sup_norm_attractor_bound", linf.pass,
      {{"r", linf.r}, {"max_sup", linf.max_sup}, {"snapshots", sample.snapshots.size()}});

  write_json(dir / "verify.json", json{{"all_pass", all}, {"checks", checks}});
  return all ? 0 : 1;
}

int cmd_equilibrium(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const FiringRate f = make_firing(c);
  const Kernel k = make_kernel(c);
  const Equilibrium eq = homogeneous_equilibrium(f, k.l1_norm(), c.model.h);
  const bool pass = eq.residual <= 1e-12;
  write_json(dir / "equilibrium.json", json{{"u0", eq.u0},
                                            {"unique", eq.unique},
                                            {"residual", eq.residual},
                                            {"l1_norm", k.l1_norm()},
                                            {"k1", f.k1()},
                                            {"h", c.model.h},
                                            {"pass", pass}});
  out << "equilibrium: u0 = " << format_double(eq.u0) << ", unique = " << (eq.unique ? "true" : "false")
      << ", residual = " << format_double(eq.residual) << '\n';
  return pass ? 0 : 1;
}

int cmd_energy(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const ModelParams params = make_model(c);
  if (!params.firing.strictly_increasing())
    throw InvertibilityError("energy needs firing.family = sigmoid (the ramp is not invertible)");
  const double u0 = homogeneous_equilibrium(params.firing, params.kernel().l1_norm(), params.h).u0;
  const Field init = resting_with_bumps(params.grid(), u0, c.sim.seed);
  const DiagnosticsRun res = simulate_diagnostics(params, make_sim_config(c), init, make_weight(c), c.model.p);

  const auto& s = res.series;
  bool pass = true;
  auto csv = open_output(dir / "energy.csv");
  csv << "t,lyapunov_G,dG_dt\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv << format_double(s.t[i]) << ',' << format_double(s.lyapunov_G[i]) << ',' << format_double(s.dG_dt[i]) << '\n';
    pass = pass && s.dG_dt[i] <= 0.0;
    if (i > 0) pass = pass && s.lyapunov_G[i] <= s.lyapunov_G[i - 1] + 1e-10 * (1.0 + std::abs(s.lyapunov_G[i - 1]));
  }
  out << "energy: G(0) = " << format_double(s.lyapunov_G.front()) << ", G(end) = " << format_double(s.lyapunov_G.back())
      << (pass ? ", nonincreasing" : ", NOT nonincreasing") << '\n';
  return pass ? 0 : 1;
}

int cmd_semicontinuity(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const ModelParams model = make_model(c);
  const SemicontinuityResult res =
      semicontinuity_experiment(make_base_kernel(c), make_blend_kernel(c), c.analysis.epsilons, model,
                                make_sim_config(c), make_weight(c), c.model.p, make_attractor_settings(c));
  auto csv = open_output(dir / "semicontinuity.csv");
  csv << "epsilon,semidistance,R_max,max_sup_norm\n";
  bool monotone = true;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    csv << format_double(r.epsilon) << ',' << format_double(r.semidistance) << ',' << format_double(r.R_max) << ','
        << format_double(r.max_sup_norm) << '\n';
    if (i > 0) monotone = monotone && r.semidistance <= res.rows[i - 1].semidistance + 1e-5;
  }
  out << "semicontinuity: " << res.rows.size() << " epsilons, containment " << (res.contained ? "holds" : "FAILS")
      << ", d(eps) " << (monotone ? "nonincreasing" : "NOT nonincreasing") << '\n';
  return res.contained && monotone ? 0 : 1;
}

int cmd_bench(const RunConfig& c, const std::filesystem::path& dir, const RunOptions& opt, std::ostream& out) {
  BenchSettings s;
  s.dim = c.grid.dim;
  s.half_width = c.grid.half_width;
  s.family = c.kernel.family;
  s.seed = c.sim.seed;
  if (opt.engine) s.engines = {*opt.engine};
  if (opt.trials) s.trials = *opt.trials;
  const auto rows = benchmark(opt.sizes, s);
  auto csv = open_output(dir / "bench.csv");
  write_bench_csv(csv, rows);
  write_bench_csv(out, rows);
  return 0;
}

}  // namespace

Field resting_with_bumps(const GridSpec& grid, double u0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Field f = Field::constant(grid, u0);
  std::array<double, 3> x{};
  std::span<double> xs(x.data(), grid.dim());
  for (int b = 0; b < 3; ++b) {
    std::array<double, 3> c{};
    for (std::size_t i = 0; i < grid.dim(); ++i) {
      const double lo = grid.lower(i) + 2.0, hi = grid.upper(i) - 2.0;
      c[i] = hi > lo ? lo + (hi - lo) * unit(rng) : 0.5 * (grid.lower(i) + grid.upper(i));
    }
    const double width = 0.3 + 0.4 * unit(rng);
    const double amp = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * unit(rng));
    for (std::size_t k = 0; k < f.values.size(); ++k) {
      grid.point(k, xs);
      double d2 = 0.0;
      for (std::size_t i = 0; i < grid.dim(); ++i) d2 += (x[i] - c[i]) * (x[i] - c[i]);
      f.values[k] += amp * std::exp(-d2 / (2.0 * width * width));
    }
  }
  return f;
}

std::string usage() {
  return "usage: nfield <simulate|verify|equilibrium|energy|semicontinuity|bench> [--config PATH] [--out DIR]\n"
         "              [--sizes N,N,...] [--engine direct|fourier] [--trials N]\n";
}

int run(std::string_view sub, const RunConfig& config, const std::filesystem::path& out_dir,
        const RunOptions& options, std::ostream& out, std::ostream& err) {
  static constexpr std::string_view known[] = {"simulate", "verify", "equilibrium", "energy", "semicontinuity", "bench"};
  if (std::find(std::begin(known), std::end(known), sub) == std::end(known)) {
    err << "unknown subcommand '" << sub << "'\n" << usage();
    return 2;
  }
  try {
    validate(config);
    std::filesystem::create_directories(out_dir);
    if (sub == "simulate") return cmd_simulate(config, out_dir, out);
    if (sub == "verify") return cmd_verify(config, out_dir, options, out);
    if (sub == "equilibrium") return cmd_equilibrium(config, out_dir, out);
    if (sub == "energy") return cmd_energy(config, out_dir, out);
    if (sub == "semicontinuity") return cmd_semicontinuity(config, out_dir, out);
    return cmd_bench(config, out_dir, options, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nfield
