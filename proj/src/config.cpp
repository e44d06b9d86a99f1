#include "nfield/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nfield/error.hpp"
#include "nfield/text.hpp"

namespace nfield {
namespace {

using Kind = ConfigError::Kind;

struct BadValue {
  std::string message;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return trim(s.substr(1, s.size() - 2));
  return s;
}

double parse_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw BadValue{"expected a finite real number, got '" + std::string(s) + "'"};
  return v;
}

std::uint64_t parse_unsigned(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw BadValue{"expected a nonnegative integer, got '" + std::string(s) + "'"};
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_real(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<std::pair<const char*, E>> names) {
  std::string choices;
  for (const auto& [n, e] : names) {
    if (s == n) return e;
    choices += choices.empty() ? n : std::string("|") + n;
  }
  throw BadValue{"expected one of " + choices + ", got '" + std::string(s) + "'"};
}

template <typename E>
std::string enum_name(E value, std::initializer_list<std::pair<const char*, E>> names) {
  for (const auto& [n, e] : names)
    if (e == value) return n;
  return "?";
}

const std::initializer_list<std::pair<const char*, KernelFamily>> kKernelNames{
    {"polynomial", KernelFamily::PolynomialBump}, {"bump", KernelFamily::Bump}};
const std::initializer_list<std::pair<const char*, WeightFamily>> kWeightNames{
    {"exponential", WeightFamily::Exponential}, {"polynomial", WeightFamily::PolynomialDecay}};
const std::initializer_list<std::pair<const char*, FiringFamily>> kFiringNames{
    {"sigmoid", FiringFamily::Sigmoid}, {"ramp", FiringFamily::SaturatingRamp}};
const std::initializer_list<std::pair<const char*, Integrator>> kIntegratorNames{
    {"exponential_euler", Integrator::ExponentialEuler}, {"rk4", Integrator::RK4}};
const std::initializer_list<std::pair<const char*, Engine>> kEngineNames{{"fourier", Engine::Fourier},
                                                                          {"direct", Engine::Direct}};

struct KeyDef {
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define NF_REAL(key, member) \
  KeyDef { key, [](RunConfig& c, std::string_view v) { c.member = parse_real(v); }, \
           [](const RunConfig& c) { return format_double(c.member); } }
#define NF_UINT(key, member) \
  KeyDef { key, [](RunConfig& c, std::string_view v) { c.member = parse_unsigned(v); }, \
           [](const RunConfig& c) { return std::to_string(c.member); } }
#define NF_ENUM(key, member, names) \
  KeyDef { key, [](RunConfig& c, std::string_view v) { c.member = parse_enum(v, names); }, \
           [](const RunConfig& c) { return enum_name(c.member, names); } }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> keys{
      NF_UINT("grid.dim", grid.dim),
      NF_UINT("grid.points", grid.points),
      NF_REAL("grid.half_width", grid.half_width),
      NF_REAL("model.h", model.h),
      NF_REAL("model.p", model.p),
      NF_ENUM("kernel.family", kernel.family, kKernelNames),
      NF_REAL("kernel.normalize_l1", kernel.normalize_l1),
      NF_REAL("kernel.blend_epsilon", kernel.blend_epsilon),
      NF_ENUM("kernel.blend_family", kernel.blend_family, kKernelNames),
      NF_REAL("kernel.blend_normalize_l1", kernel.blend_normalize_l1),
      NF_ENUM("weight.family", weight.family, kWeightNames),
      NF_REAL("weight.lambda", weight.lambda),
      NF_REAL("weight.q", weight.q),
      NF_ENUM("firing.family", firing.family, kFiringNames),
      NF_REAL("firing.a", firing.a),
      NF_REAL("firing.beta", firing.beta),
      NF_REAL("firing.theta", firing.theta),
      NF_REAL("firing.slope", firing.slope),
      NF_REAL("sim.dt", sim.dt),
      NF_REAL("sim.t_end", sim.t_end),
      NF_ENUM("sim.integrator", sim.integrator, kIntegratorNames),
      NF_UINT("sim.record_every", sim.record_every),
      NF_UINT("sim.seed", sim.seed),
      NF_ENUM("sim.engine", sim.engine, kEngineNames),
      NF_REAL("analysis.t_transient", analysis.t_transient),
      NF_REAL("analysis.t_sample", analysis.t_sample),
      NF_UINT("analysis.n_initial", analysis.n_initial),
      KeyDef{"analysis.epsilons", [](RunConfig& c, std::string_view v) { c.analysis.epsilons = parse_list(v); },
             [](const RunConfig& c) {
               std::string s;
               for (double e : c.analysis.epsilons) s += (s.empty() ? "" : ", ") + format_double(e);
               return s;
             }},
  };
  return keys;
}

#undef NF_REAL
#undef NF_UINT
#undef NF_ENUM

using LineMap = std::map<std::string, std::size_t>;

void check(bool ok, const LineMap& lines, const std::string& key, const std::string& message) {
  if (ok) return;
  const auto it = lines.find(key);
  throw ConfigError(Kind::Constraint, it == lines.end() ? 0 : it->second, key + ": " + message);
}

void validate_with_lines(const RunConfig& c, const LineMap& lines) {
  check(c.grid.dim >= 1 && c.grid.dim <= 3, lines, "grid.dim", "dimension must be 1, 2 or 3");
  check(c.grid.points >= 3, lines, "grid.points", "need at least 3 points per axis");
  check(c.grid.half_width >= 2.0, lines, "grid.half_width",
        "half width must be >= 2 so a region at distance >= 1 from the boundary exists");
  const double spacing = 2.0 * c.grid.half_width / static_cast<double>(c.grid.points - 1);
  check(spacing <= 0.25, lines, "grid.points",
        "grid spacing " + format_double(spacing) + " exceeds the kernel resolution limit 0.25");

  check(c.model.h > 0.0, lines, "model.h", "the model requires h > 0");
  check(c.model.p > 1.0, lines, "model.p", "the norm exponent requires 1 < p < inf");

  check(c.kernel.normalize_l1 > 0.0, lines, "kernel.normalize_l1", "must be > 0");
  check(c.kernel.blend_normalize_l1 > 0.0, lines, "kernel.blend_normalize_l1", "must be > 0");
  check(c.kernel.blend_epsilon >= 0.0 && c.kernel.blend_epsilon <= 1.0, lines, "kernel.blend_epsilon",
        "must lie in [0, 1]");

  check(c.weight.lambda > 0.0, lines, "weight.lambda", "exponential rate requires lambda > 0");
  if (c.weight.family == WeightFamily::PolynomialDecay)
    check(c.weight.q > static_cast<double>(c.grid.dim), lines, "weight.q",
          "polynomial weight requires q > N = " + std::to_string(c.grid.dim) + " (otherwise not integrable)");

  check(c.firing.a > 0.0, lines, "firing.a", "requires a > 0");
  check(c.firing.beta > 0.0, lines, "firing.beta", "requires beta > 0");
  check(c.firing.slope > 0.0, lines, "firing.slope", "requires slope > 0");

  check(c.sim.dt > 0.0 && c.sim.dt <= 0.1, lines, "sim.dt", "requires 0 < dt <= 0.1 (dt cap 0.1)");
  check(c.sim.t_end >= 0.0, lines, "sim.t_end", "requires t_end >= 0");
  check(c.sim.t_end == 0.0 || c.sim.t_end >= c.sim.dt, lines, "sim.t_end", "requires t_end = 0 or t_end >= dt");
  check(c.sim.record_every >= 1, lines, "sim.record_every", "requires record_every >= 1");

  check(c.analysis.t_transient >= 5.0, lines, "analysis.t_transient", "requires t_transient >= 5");
  check(c.analysis.t_sample >= 0.0, lines, "analysis.t_sample", "requires t_sample >= 0");
  check(c.analysis.n_initial >= 1, lines, "analysis.n_initial", "requires n_initial >= 1");
  const auto& eps = c.analysis.epsilons;
  check(!eps.empty(), lines, "analysis.epsilons", "needs at least one value");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    check(eps[i] >= 0.0 && eps[i] <= 1.0, lines, "analysis.epsilons", "values must lie in [0, 1]");
    check(i == 0 || eps[i] < eps[i - 1], lines, "analysis.epsilons", "values must be strictly decreasing");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  LineMap lines;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(Kind::Syntax, lineno, "expected 'section.key = value', got '" + std::string(line) + "'");
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = unquote(trim(line.substr(eq + 1)));
    if (key == "space.p") key = "model.p";

    const auto& table = key_table();
    const auto def = std::find_if(table.begin(), table.end(), [&](const KeyDef& d) { return key == d.name; });
    if (def == table.end()) throw ConfigError(Kind::UnknownKey, lineno, "unknown key '" + key + "'");
    if (lines.count(key)) throw ConfigError(Kind::Syntax, lineno, "key '" + key + "' set twice");
    if (value.empty()) throw ConfigError(Kind::Malformed, lineno, key + ": missing value");
    try {
      def->set(c, value);
    } catch (const BadValue& e) {
      throw ConfigError(Kind::Malformed, lineno, key + ": " + e.message);
    }
    lines[key] = lineno;
  }
  validate_with_lines(c, lines);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PersistenceError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& config) {
  std::string out;
  for (const auto& d : key_table()) out += std::string(d.name) + " = " + d.get(config) + "\n";
  return out;
}

void validate(const RunConfig& config) { validate_with_lines(config, {}); }

GridSpec make_grid(const RunConfig& c) { return GridSpec::centered(c.grid.dim, c.grid.points, c.grid.half_width); }

Weight make_weight(const RunConfig& c) {
  return c.weight.family == WeightFamily::Exponential
             ? make_weight(WeightFamily::Exponential, c.weight.lambda, c.grid.dim)
             : make_weight(WeightFamily::PolynomialDecay, c.weight.q, c.grid.dim);
}

FiringRate make_firing(const RunConfig& c) {
  return c.firing.family == FiringFamily::Sigmoid ? FiringRate::sigmoid(c.firing.a, c.firing.beta, c.firing.theta)
                                                  : FiringRate::ramp(c.firing.a, c.firing.slope, c.firing.theta);
}

Kernel make_base_kernel(const RunConfig& c) {
  return make_kernel(c.kernel.family, c.grid.dim, make_grid(c).spacing(), c.kernel.normalize_l1);
}

Kernel make_blend_kernel(const RunConfig& c) {
  return make_kernel(c.kernel.blend_family, c.grid.dim, make_grid(c).spacing(), c.kernel.blend_normalize_l1);
}

Kernel make_kernel(const RunConfig& c) {
  const Kernel j0 = make_base_kernel(c);
  if (c.kernel.blend_epsilon == 0.0) return j0;
  return blend_kernels(j0, make_blend_kernel(c), c.kernel.blend_epsilon);
}

ModelParams make_model(const RunConfig& c) {
  return ModelParams(ConvolutionPlan(make_grid(c), make_kernel(c), c.sim.engine), make_firing(c), c.model.h);
}

SimConfig make_sim_config(const RunConfig& c) {
  SimConfig s;
  s.dt = c.sim.dt;
  s.t_end = c.sim.t_end;
  s.integrator = c.sim.integrator;
  s.record_every = c.sim.record_every;
  s.seed = c.sim.seed;
  return s;
}

AttractorSettings make_attractor_settings(const RunConfig& c) {
  return {c.analysis.n_initial, c.analysis.t_transient, c.analysis.t_sample};
}

}  // namespace nfield
