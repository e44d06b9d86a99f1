#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nfield/error.hpp"
#include "nfield/random_field.hpp"
#include "nfield/weights.hpp"

using namespace nfield;

TEST(MakeWeight, ExponentialOneDimensional) {
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  EXPECT_NEAR(w.normalization(), 0.5, 1e-15);
  EXPECT_NEAR(w.K(), 2.718281828, 1e-9);
  const double x[] = {1.3};
  EXPECT_NEAR(w(x), 0.5 * std::exp(-1.3), 1e-15);
}

TEST(MakeWeight, PolynomialOneDimensional) {
  // int (1+|x|)^-2 dx = 2, so c = 1/2.
  const Weight w = make_weight(WeightFamily::PolynomialDecay, 2.0, 1);
  EXPECT_NEAR(w.normalization(), 0.5, 1e-15);
  EXPECT_EQ(w.K(), 4.0);
}

TEST(MakeWeight, NormalizationMatchesRadialIntegral) {
  // c |S^{N-1}| int_0^inf r^{N-1} rho_1(r) dr = 1 with the closed-form radial moments.
  for (std::size_t n : {1u, 2u, 3u}) {
    const double area = n == 1 ? 2.0 : n == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
    EXPECT_NEAR(unit_sphere_area(n), area, 1e-14);
    const double lam = 1.7;
    const Weight e = make_weight(WeightFamily::Exponential, lam, n);
    const double fact = n == 1 ? 1.0 : n == 2 ? 1.0 : 2.0;
    EXPECT_NEAR(e.normalization() * area * fact / std::pow(lam, static_cast<double>(n)), 1.0, 1e-14);
    const double q = 5.5;
    const Weight p = make_weight(WeightFamily::PolynomialDecay, q, n);
    // B(N, q-N) = Gamma(N) Gamma(q-N) / Gamma(q)
    const double beta = std::tgamma(static_cast<double>(n)) * std::tgamma(q - n) / std::tgamma(q);
    EXPECT_NEAR(p.normalization() * area * beta, 1.0, 1e-13);
  }
}

TEST(MakeWeight, RejectsInadmissibleParameters) {
  EXPECT_THROW(make_weight(WeightFamily::Exponential, 0.0, 1), ParameterError);
  EXPECT_THROW(make_weight(WeightFamily::Exponential, -1.0, 2), ParameterError);
  EXPECT_THROW(make_weight(WeightFamily::PolynomialDecay, 1.0, 1), ParameterError);
  EXPECT_THROW(make_weight(WeightFamily::PolynomialDecay, 2.0, 2), ParameterError);
  EXPECT_THROW(make_weight(WeightFamily::PolynomialDecay, 2.5, 3), ParameterError);
  EXPECT_THROW(make_weight(WeightFamily::Exponential, 1.0, 4), ParameterError);
}

TEST(Weight, PositiveAndEven) {
  for (const Weight& w : {make_weight(WeightFamily::Exponential, 2.0, 2), make_weight(WeightFamily::PolynomialDecay, 3.5, 2)}) {
    const GridSpec g = GridSpec::centered(2, 41, 30.0);
    const auto s = w.sample(g);
    double x[2];
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_GT(s[i], 0.0);
      g.point(i, x);
      const double mx[2] = {-x[0], -x[1]};
      EXPECT_EQ(w(x), w(mx));
    }
  }
}

TEST(Weight, UnitMassOnLargeBox) {
  {
    const GridSpec g = GridSpec::centered(1, 40001, 20.0);
    const auto s = make_weight(WeightFamily::Exponential, 1.0, 1).sample(g);
    EXPECT_NEAR(quadrature(Field::constant(g, 1.0), s), 1.0, 1e-6);
  }
  {
    const GridSpec g = GridSpec::centered(1, 40001, 2.0);
    const auto s = make_weight(WeightFamily::PolynomialDecay, 20.0, 1).sample(g);
    EXPECT_NEAR(quadrature(Field::constant(g, 1.0), s), 1.0, 1e-6);
  }
}

TEST(WeightDomination, ExponentialOnEightBox) {
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  const auto r = verify_h2(w, GridSpec::centered(1, 1025, 8.0));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.K_observed, std::exp(1.0) * (1 + 1e-9));
  // The grid contains exact unit offsets here, so the analytic sup is attained.
  EXPECT_NEAR(r.K_observed, std::exp(1.0), 1e-9);
}

TEST(WeightDomination, PolynomialQuadratic) {
  const Weight w = make_weight(WeightFamily::PolynomialDecay, 2.0, 1);
  const auto r = verify_h2(w, GridSpec::centered(1, 1025, 8.0));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.K_observed, 4.0);
}

TEST(WeightDomination, GaussianCandidateIsRejectedAndGrows) {
  auto observed = [](double L) {
    const GridSpec g = GridSpec::centered(1, static_cast<std::size_t>(64 * L) + 1, L);
    const Field gauss = Field::sample(g, [](auto x) { return std::exp(-x[0] * x[0]); });
    return verify_h2(gauss.values, g, std::exp(1.0));
  };
  const auto small = observed(4.0), large = observed(8.0);
  EXPECT_FALSE(small.pass);
  EXPECT_FALSE(large.pass);
  // ratio e^{2|y|-1} at the interior edge |y| = L - 1
  EXPECT_NEAR(std::log(small.K_observed), 2.0 * 3.0 - 1.0, 1e-9);
  EXPECT_NEAR(std::log(large.K_observed), 2.0 * 7.0 - 1.0, 1e-9);
}

TEST(WeightDomination, EveryFamilyPassesWithItsAnalyticK) {
  for (std::size_t n : {1u, 2u}) {
    const GridSpec g = n == 1 ? GridSpec::centered(1, 513, 12.0) : GridSpec::centered(2, 97, 6.0);
    for (double lam : {0.25, 1.0, 3.0}) EXPECT_TRUE(verify_h2(make_weight(WeightFamily::Exponential, lam, n), g).pass);
    for (double q : {2.5, 4.0, 9.0}) EXPECT_TRUE(verify_h2(make_weight(WeightFamily::PolynomialDecay, q, n), g).pass);
  }
  const GridSpec g3 = GridSpec::centered(3, 25, 3.0);
  EXPECT_TRUE(verify_h2(make_weight(WeightFamily::Exponential, 1.0, 3), g3).pass);
  EXPECT_TRUE(verify_h2(make_weight(WeightFamily::PolynomialDecay, 4.0, 3), g3).pass);
}

TEST(WeightDomination, NeedsUnitMargin) {
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  EXPECT_THROW(verify_h2(w, GridSpec::centered(1, 33, 1.5)), ParameterError);
}

TEST(WeightedLpNorm, ConstantOneHasNormOne) {
  const GridSpec g = GridSpec::centered(1, 40001, 20.0);
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  for (double p : {1.5, 2.0, 3.0, 7.0}) EXPECT_NEAR(weighted_lp_norm(Field::constant(g, 1.0), w, p), 1.0, 1e-6);
}

TEST(WeightedLpNorm, ZeroIsExactlyZero) {
  const GridSpec g = GridSpec::centered(2, 33, 4.0);
  EXPECT_EQ(weighted_lp_norm(Field::zeros(g), make_weight(WeightFamily::Exponential, 1.0, 2), 2.0), 0.0);
  EXPECT_EQ(weighted_lp_norm(Field::zeros(g), make_weight(WeightFamily::Exponential, 1.0, 2), 3.0), 0.0);
}

TEST(WeightedLpNorm, HalfSpaceIndicator) {
  const GridSpec g = GridSpec::centered(1, 40000, 20.0);  // even count: no node at 0
  const Field ind = Field::sample(g, [](auto x) { return x[0] >= 0.0 ? 1.0 : 0.0; });
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  EXPECT_NEAR(weighted_lp_norm(ind, w, 2.0), std::sqrt(0.5), 1e-4);
}

TEST(WeightedLpNorm, RejectsExponentAtMostOne) {
  const GridSpec g = GridSpec::centered(1, 33, 4.0);
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  EXPECT_THROW(weighted_lp_norm(Field::zeros(g), w, 1.0), ParameterError);
  EXPECT_THROW(weighted_lp_norm(Field::zeros(g), w, 0.5), ParameterError);
  EXPECT_THROW(weighted_lp_norm(Field::zeros(g), w, INFINITY), ParameterError);
}

TEST(WeightedLpNorm, NormAxiomsOnRandomFields) {
  const GridSpec g = GridSpec::centered(1, 801, 10.0);
  std::mt19937_64 rng(7);
  for (const Weight& w : {make_weight(WeightFamily::Exponential, 0.7, 1), make_weight(WeightFamily::PolynomialDecay, 3.0, 1)})
    for (double p : {1.5, 2.0, 3.0}) {
      const WeightedNorm norm(g, w, p);
      for (int t = 0; t < 20; ++t) {
        const Field u = random_field(g, rng), v = random_field(g, rng);
        const double alpha = -2.75;
        Field au = u, sum = u, absu = u, bigger = u;
        for (std::size_t i = 0; i < g.size(); ++i) {
          au.values[i] = alpha * u.values[i];
          sum.values[i] = u.values[i] + v.values[i];
          absu.values[i] = std::abs(u.values[i]);
          bigger.values[i] = std::abs(u.values[i]) + std::abs(v.values[i]);
        }
        const double nu = norm(u), nv = norm(v);
        EXPECT_NEAR(norm(au), std::abs(alpha) * nu, 1e-12 * std::abs(alpha) * nu);
        EXPECT_LE(norm(sum), nu + nv + 1e-12);
        EXPECT_LE(norm(absu), norm(bigger) + 1e-12);
        EXPECT_NEAR(norm.distance(u.values, v.values), norm(Field(g, [&] {
                      std::vector<double> d(g.size());
                      for (std::size_t i = 0; i < d.size(); ++i) d[i] = u.values[i] - v.values[i];
                      return d;
                    }())),
                    1e-12 * (nu + nv));
      }
    }
}

TEST(WeightedNorm, MaskRestrictsIntegral) {
  const GridSpec g = GridSpec::centered(1, 2001, 10.0);
  const Weight w = make_weight(WeightFamily::Exponential, 1.0, 1);
  const auto mask = interior_mask(g, 1.0);
  const WeightedNorm full(g, w, 2.0), inner(g, w, 2.0, &mask);
  const Field one = Field::constant(g, 1.0);
  // mass outside [-9, 9] is e^{-9}
  EXPECT_NEAR(inner(one) * inner(one), full(one) * full(one) - std::exp(-9.0) + std::exp(-10.0), 1e-5);
  EXPECT_LT(inner(one), full(one));
  const std::vector<bool> bad(5, true);
  EXPECT_THROW(WeightedNorm(g, w, 2.0, &bad), ShapeError);
}

TEST(WeightedNorm, ShapeChecks) {
  const GridSpec g = GridSpec::centered(1, 101, 5.0);
  const WeightedNorm n(g, make_weight(WeightFamily::Exponential, 1.0, 1), 2.0);
  EXPECT_THROW(n(std::vector<double>(100)), ShapeError);
  EXPECT_THROW(n(Field::zeros(GridSpec::centered(1, 101, 6.0))), ShapeError);
  EXPECT_THROW(make_weight(WeightFamily::Exponential, 1.0, 2).sample(g), ShapeError);
}

TEST(WeightedNorm, AgreesWithTheOnePassNorm) {
  for (const GridSpec& g : {GridSpec::centered(1, 301, 6.0), GridSpec::centered(2, 61, 3.0),
                            GridSpec({9, 11, 13}, {0.3, 0.25, 0.2}, {-1.0, -1.5, 0.5})}) {
    for (const Weight& w : {make_weight(WeightFamily::Exponential, 0.7, g.dim()),
                            make_weight(WeightFamily::PolynomialDecay, 5.0, g.dim())}) {
      for (double p : {1.5, 2.0, 3.0}) {
        const Field u = random_field(g, 40 + g.dim());
        const double a = weighted_lp_norm(u, w, p), b = WeightedNorm(g, w, p)(u);
        EXPECT_NEAR(a, b, 1e-13 * b);
      }
    }
  }
}
