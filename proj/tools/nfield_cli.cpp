#include <CLI11.hpp>
#include <iostream>

#include "nfield/cli.hpp"
#include "nfield/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Neural-field simulation and certification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  nfield::RunOptions options;
  std::string engine;
  std::size_t trials = 0;

  const char* subs[][2] = {
      {"simulate", "Run one trajectory; writes diagnostics.csv and final.nfld"},
      {"verify", "Run the six certifications; writes verify.json"},
      {"equilibrium", "Solve for the constant equilibrium; writes equilibrium.json"},
      {"energy", "Track the Lyapunov functional; writes energy.csv"},
      {"semicontinuity", "Attractor distance sweep over blended kernels; writes semicontinuity.csv"},
      {"bench", "Time the convolution engines; writes bench.csv"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Config file (section.key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--trials", trials, "Random draws (verify) or timing repeats (bench)");
    if (std::string(name) == "bench") {
      sub->add_option("--sizes", options.sizes, "Points per axis")->delimiter(',');
      sub->add_option("--engine", engine, "Restrict to one engine")->check(CLI::IsMember({"direct", "fourier"}));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) std::cerr << nfield::usage();
    return code == 0 ? 0 : 2;
  }

  if (!engine.empty()) options.engine = engine == "direct" ? nfield::Engine::Direct : nfield::Engine::Fourier;
  if (trials > 0) options.trials = trials;

  nfield::RunConfig config;
  try {
    if (!config_path.empty()) config = nfield::load_config(config_path);
  } catch (const nfield::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  return nfield::run(app.get_subcommands().front()->get_name(), config, out_dir, options, std::cout, std::cerr);
}
