#include <gtest/gtest.h>

#include <complex>

#include "stillwater/spectral.hpp"
#include "support.hpp"

using namespace stillwater;
using namespace testing_support;

namespace {

const Grid unit(1, 1, 32, 32);

Field cos1(const Grid& g, int k = 1) {
  return Field::from_function(g, [&](double x, double) { return std::cos(2 * pi * k * x / g.length(0)); });
}

// Direct O(N^4) DFT, normalized like forward().
Complex naive_coeff(const Field& f, int k1, int k2) {
  const Grid& g = f.grid();
  Complex c = 0;
  for (int j1 = 0; j1 < g.size(0); ++j1)
    for (int j2 = 0; j2 < g.size(1); ++j2) {
      const double phase = -2 * pi * (double(k1) * j1 / g.size(0) + double(k2) * j2 / g.size(1));
      c += f(j1, j2) * std::polar(1.0, phase);
    }
  return c / double(g.num_points());
}

}  // namespace

TEST(Grid, RejectsOddOrTinyResolution) {
  EXPECT_THROW(Grid(1, 1, 7, 8), BadSpec);
  EXPECT_THROW(Grid(1, 1, 6, 8), BadSpec);
  EXPECT_THROW(Grid(0, 1, 8, 8), BadSpec);
}

TEST(Grid, ZeroWavenumberAndSamplePoints) {
  const Grid g(2, 3, 8, 12);
  EXPECT_EQ(g.xi1(0), 0.0);
  EXPECT_EQ(g.xi2(0), 0.0);
  EXPECT_DOUBLE_EQ(g.xi1(1), 2 * pi / 2);
  EXPECT_DOUBLE_EQ(g.xi1(7), -2 * pi / 2);
  EXPECT_DOUBLE_EQ(g.coordinate(0, 4), 1.0);
  EXPECT_DOUBLE_EQ(g.coordinate(1, 11), 11 * 3.0 / 12);
}

TEST(Field, RejectsNonFiniteSamples) {
  std::vector<double> s(unit.num_points(), 0.0);
  s[5] = std::nan("");
  EXPECT_THROW(Field(unit, s), NonFiniteValue);
}

TEST(Transform, MatchesDirectSum) {
  const Grid g(1.5, 0.75, 8, 10);
  Rng rng(11);
  std::vector<double> s(g.num_points());
  for (double& v : s) v = rng.uniform(-1, 1);
  const Field f(g, s);
  const Spectrum c = forward(f);
  for (int i1 = 0; i1 < g.size(0); ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      const Complex want = naive_coeff(f, g.mode1(i1), i2);
      EXPECT_NEAR(std::abs(c(i1, i2) - want), 0.0, 1e-14) << i1 << "," << i2;
    }
}

TEST(Transform, RoundTrip) {
  Rng rng(2);
  std::vector<double> s(unit.num_points());
  for (double& v : s) v = rng.uniform(-3, 3);
  const Field f(unit, s);
  const Field back = inverse(forward(f));
  EXPECT_LE(max_diff(f, back), 1e-12 * f.max_abs());
}

TEST(Multiplier, DerivativeOfConstantIsZero) {
  const Field c = Field::constant(unit, 4.2);
  const Field d = apply_fourier_multiplier(c, [](double x1, double) { return Complex(0, x1); });
  EXPECT_LE(d.max_abs(), 1e-14);
}

TEST(Multiplier, DerivativeOfCosine) {
  const Field d = apply_fourier_multiplier(cos1(unit), [](double x1, double) { return Complex(0, x1); });
  const Field want = Field::from_function(unit, [](double x, double) { return -2 * pi * std::sin(2 * pi * x); });
  EXPECT_LE(max_diff(d, want), 1e-10);
}

TEST(Multiplier, InverseLaplacian) {
  const Field f = Field::from_function(unit, [](double x, double) { return std::sin(2 * pi * x); });
  const Field r = apply_fourier_multiplier(
      f, [](double a, double b) { return Complex(-1.0 / (a * a + b * b), 0); }, SymbolKind::singular_at_zero);
  const Field want = f * (-1.0 / (4 * pi * pi));
  EXPECT_LE(max_diff(r, want), 1e-14);
}

TEST(Multiplier, SingularSymbolNeedsZeroMean) {
  const Field f = cos1(unit) + Field::constant(unit, 0.5);
  auto inv = [](double a, double b) { return Complex(-1.0 / (a * a + b * b), 0); };
  EXPECT_THROW(apply_fourier_multiplier(f, inv, SymbolKind::singular_at_zero), SingularMode);
}

TEST(Multiplier, RejectsNonHermitianSymbol) {
  EXPECT_THROW(apply_fourier_multiplier(cos1(unit), [](double x1, double) { return Complex(x1, 0); }), NonRealSymbol);
}

TEST(Multiplier, Composition) {
  Rng rng(4);
  const Field f = random_field(unit, rng, 10);
  auto m1 = [](double a, double b) { return Complex(1.0 / (1 + a * a + b * b), 0); };
  auto m2 = [](double a, double b) { return Complex(std::cos(a), std::sin(a)) * std::exp(-1e-3 * b * b); };
  const Field seq = apply_fourier_multiplier(apply_fourier_multiplier(f, m1), m2);
  const Field once = apply_fourier_multiplier(f, [&](double a, double b) { return m1(a, b) * m2(a, b); });
  EXPECT_LE(max_diff(seq, once), 1e-12 * std::max(1.0, f.max_abs()));
}

TEST(ProjectMeanZero, Examples) {
  EXPECT_LE(project_mean_zero(Field::constant(unit, 3)).max_abs(), 1e-15);
  EXPECT_LE(max_diff(project_mean_zero(cos1(unit)), cos1(unit)), 1e-15);
  const Field f = cos1(unit) + Field::constant(unit, 2);
  EXPECT_LE(max_diff(project_mean_zero(f), cos1(unit)), 1e-14);
  EXPECT_EQ(forward(project_mean_zero(f)).mean(), Complex(0, 0));
}

TEST(ProjectMeanZero, IdempotentAndSelfAdjoint) {
  Rng rng(5);
  const Field a = random_field(unit, rng, 6) + Field::constant(unit, 0.3);
  const Field b = random_field(unit, rng, 6) + Field::constant(unit, -1.1);
  const Field pa = project_mean_zero(a);
  EXPECT_LE(max_diff(project_mean_zero(pa), pa), 1e-15);
  EXPECT_NEAR(l2_inner(pa, b), l2_inner(a, project_mean_zero(b)), 1e-13);
}

TEST(Dealias, InBandUnchangedOutOfBandRemoved) {
  const Field low = cos1(unit, 10);  // 3*10 <= 32
  EXPECT_LE(max_diff(dealias(low), low), 1e-13);
  const Field high = cos1(unit, 15);
  EXPECT_LE(dealias(high).max_abs(), 1e-13);
  EXPECT_LE(max_diff(dealias(low + high), low), 1e-13);
}

TEST(Dealias, IdempotentAndContracting) {
  Rng rng(6);
  const Field f = random_field(unit, rng, 15, 0.5);
  const Field d = dealias(f);
  EXPECT_LE(max_diff(dealias(d), d), 1e-13);
  for (int s = 0; s <= 3; ++s) EXPECT_LE(norm_sobolev(d, s), norm_sobolev(f, s) * (1 + 1e-14));
}

TEST(Dealias, ProductOfLowModesIsExact) {
  const Field a = cos1(unit, 3), b = cos1(unit, 4);
  const Field want = Field::from_function(unit, [](double x, double) {
    return 0.5 * (std::cos(2 * pi * 7 * x) + std::cos(2 * pi * x));
  });
  EXPECT_LE(max_diff(dealiased_product(a, b), want), 1e-14);
}

TEST(Sobolev, Examples) {
  EXPECT_NEAR(norm_sobolev(Field::constant(unit, 1), 0), 1.0, 1e-15);
  EXPECT_NEAR(norm_sobolev(cos1(unit), 0), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(norm_sobolev(cos1(unit), 1), std::sqrt((1 + 4 * pi * pi) / 2), 1e-12);
  EXPECT_NEAR(norm_sobolev(cos1(unit), 1), 4.49880, 1e-5);
}

TEST(Sobolev, ParsevalMatchesTrapezoid) {
  const Grid g(2, 0.5, 24, 16);
  Rng rng(8);
  const Field f = random_field(g, rng, 7) + Field::constant(g, 0.7);
  double sum = 0;
  for (double v : f.samples()) sum += v * v;
  const double quad = std::sqrt(sum * g.area() / g.num_points());
  EXPECT_NEAR(norm_sobolev(f, 0), quad, 1e-12 * quad);
  EXPECT_NEAR(norm_l2(f), quad, 1e-12 * quad);
}

TEST(Sobolev, NegativeIndexUsesInverseWeights) {
  const Field f = cos1(unit);
  EXPECT_NEAR(norm_sobolev(f, -1), std::sqrt(0.5 / (1 + 4 * pi * pi)), 1e-14);
}

TEST(Calculus, GradientDivergenceCurlLaplacian) {
  const Grid g(1, 2, 32, 32);
  auto f = [](double x, double y) { return std::sin(2 * pi * x) * std::cos(pi * y); };
  const Field u = Field::from_function(g, f);
  const VectorField gu = gradient(u);
  const Field gx = Field::from_function(g, [](double x, double y) { return 2 * pi * std::cos(2 * pi * x) * std::cos(pi * y); });
  const Field gy = Field::from_function(g, [](double x, double y) { return -pi * std::sin(2 * pi * x) * std::sin(pi * y); });
  EXPECT_LE(max_diff(gu[0], gx), 1e-11);
  EXPECT_LE(max_diff(gu[1], gy), 1e-11);
  EXPECT_LE(max_diff(laplacian(u), u * (-5 * pi * pi)), 1e-10);
  EXPECT_LE(max_diff(divergence(gu), laplacian(u)), 1e-10);
  EXPECT_LE(curl(gu).max_abs(), 1e-10);
}

TEST(Calculus, NyquistModeHasNoDerivative) {
  const Field f = Field::from_function(unit, [](double x, double) { return std::cos(2 * pi * 16 * x); });
  EXPECT_LE(derivative(f, 0).max_abs(), 1e-12);
}

TEST(Calculus, MismatchedGridsThrow) {
  const Grid other(1, 1, 16, 16);
  EXPECT_THROW(Field(unit) + Field(other), GridMismatch);
}

TEST(Integrate, TrapezoidIsExactForTrigPolynomials) {
  const Grid g(3, 2, 16, 16);
  const Field f = Field::from_function(g, [](double x, double y) {
    return 1.5 + std::cos(2 * pi * x / 3) * std::sin(2 * pi * y / 2);
  });
  EXPECT_NEAR(integrate(f), 1.5 * 6, 1e-12);
}

TEST(Resample, SpectralInterpolationIsExactForBandLimited) {
  const Grid coarse(1, 1, 16, 16), fine(1, 1, 48, 32);
  auto fn = [](double x, double y) { return std::cos(2 * pi * 3 * x) + std::sin(2 * pi * (2 * x + 5 * y)); };
  const Field a = Field::from_function(coarse, fn);
  EXPECT_LE(max_diff(resample(a, fine), Field::from_function(fine, fn)), 1e-13);
  EXPECT_LE(max_diff(resample(resample(a, fine), coarse), a), 1e-13);
}
