#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfield/config.hpp"

namespace nfield {

struct RunOptions {
  std::vector<std::size_t> sizes{257, 513, 1025, 2049};  // bench: points per axis
  std::optional<Engine> engine;                         // bench: restrict to one engine
  std::optional<std::size_t> trials;                    // verify: random draws; bench: timing repeats
};

/// Subcommands: simulate, verify, equilibrium, energy, semicontinuity, bench.
/// Writes its files under out_dir and returns 0 iff every certification it ran passed;
/// library errors are reported on `err` with exit status 1, an unknown subcommand with 2.
int run(std::string_view subcommand, const RunConfig& config, const std::filesystem::path& out_dir,
        const RunOptions& options, std::ostream& out, std::ostream& err);

std::string usage();

/// Resting state u0 plus three seeded Gaussian bumps kept at distance >= 2 from the faces.
Field resting_with_bumps(const GridSpec& grid, double u0, std::uint64_t seed);

}  // namespace nfield
