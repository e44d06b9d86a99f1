#include "nfield/random_field.hpp"

#include <array>
#include <cmath>

namespace nfield {

Field random_field(const GridSpec& grid, RandomFieldKind kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  const std::size_t dim = grid.dim();
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  Field out = Field::zeros(grid);
  std::array<double, 3> x{};
  std::span<double> xs(x.data(), dim);

  switch (kind) {
    case RandomFieldKind::WhiteNoise:
      for (double& v : out.values) v = uniform(-1.0, 1.0);
      break;

    case RandomFieldKind::GaussianBumps: {
      const int n = count(rng);
      for (int b = 0; b < n; ++b) {
        std::array<double, 3> c{};
        for (std::size_t i = 0; i < dim; ++i) c[i] = uniform(grid.lower(i), grid.upper(i));
        const double width = uniform(0.2, 3.0);
        const double amp = uniform(-2.0, 2.0);
        for (std::size_t k = 0; k < out.values.size(); ++k) {
          grid.point(k, xs);
          double d2 = 0.0;
          for (std::size_t i = 0; i < dim; ++i) d2 += (x[i] - c[i]) * (x[i] - c[i]);
          out.values[k] += amp * std::exp(-d2 / (2.0 * width * width));
        }
      }
      break;
    }

    case RandomFieldKind::Indicators: {
      const int n = count(rng);
      for (int b = 0; b < n; ++b) {
        std::array<double, 3> lo{}, hi{};
        for (std::size_t i = 0; i < dim; ++i) {
          const double a = uniform(grid.lower(i), grid.upper(i));
          const double c = uniform(grid.lower(i), grid.upper(i));
          lo[i] = std::min(a, c);
          hi[i] = std::max(a, c);
        }
        const double amp = uniform(-2.0, 2.0);
        for (std::size_t k = 0; k < out.values.size(); ++k) {
          grid.point(k, xs);
          bool inside = true;
          for (std::size_t i = 0; i < dim; ++i) inside = inside && x[i] >= lo[i] && x[i] <= hi[i];
          if (inside) out.values[k] += amp;
        }
      }
      break;
    }
  }
  return out;
}

Field random_field(const GridSpec& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double pick = unit(rng);
  const auto kind = pick < 0.4   ? RandomFieldKind::GaussianBumps
                    : pick < 0.8 ? RandomFieldKind::WhiteNoise
                                 : RandomFieldKind::Indicators;
  return random_field(grid, kind, rng);
}

Field random_field(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_field(grid, rng);
}

}  // namespace nfield
