#pragma once

#include <cstdint>
#include <random>

#include "nfield/grid.hpp"

namespace nfield {

enum class RandomFieldKind { GaussianBumps, WhiteNoise, Indicators };

/// One draw of a given kind: a few Gaussian bumps with random centers, widths
/// and signed amplitudes; i.i.d. uniform noise in [-1, 1]; or a few signed box indicators.
Field random_field(const GridSpec& grid, RandomFieldKind kind, std::mt19937_64& rng);

/// Mixture draw: bumps 40%, noise 40%, indicators 20%.
Field random_field(const GridSpec& grid, std::mt19937_64& rng);

/// Reproducible mixture draw from a fresh generator seeded with `seed`.
Field random_field(const GridSpec& grid, std::uint64_t seed);

}  // namespace nfield
