#include <gtest/gtest.h>

#include <cstring>

#include "stillwater/model.hpp"
#include "support.hpp"

using namespace stillwater;
using namespace testing_support;

namespace {

bool bitwise_equal(const Field& a, const Field& b) {
  const auto x = a.samples(), y = b.samples();
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Nondimensionalize, AllOnes) {
  const Nondimensionalization nd = nondimensionalize({1, 1, 1, 1, 1});
  EXPECT_EQ(nd.A, 1.0);
  EXPECT_EQ(nd.G, 1.0);
  EXPECT_EQ(nd.kappa(1.0), 1.0);
  EXPECT_EQ(nd.length_scale, 1.0);
  EXPECT_EQ(nd.time_scale, 1.0);
}

TEST(Nondimensionalize, MoundRunConstants) {
  const double alpha = 0.65, g = 0.5, mu = 0.3, sigma = 1.1, H = 1;
  const Nondimensionalization nd = nondimensionalize({alpha, g, mu, sigma, H});
  // Desk arithmetic: A = alpha mu^3 / (H sigma^2), G = g H mu^2 / sigma^2, kappa = kappa_hat mu^4 / sigma^3.
  EXPECT_NEAR(nd.A, 0.65 * 0.027 / 1.21, 1e-15);
  EXPECT_NEAR(nd.G, 0.5 * 0.09 / 1.21, 1e-15);
  EXPECT_NEAR(nd.kappa(20000), 20000 * 0.0081 / 1.331, 1e-10);
  EXPECT_NEAR(nd.A, 0.0145041, 1e-7);
  EXPECT_NEAR(nd.G, 0.0371901, 1e-7);
  EXPECT_NEAR(nd.kappa(20000), 121.713, 1e-3);
  EXPECT_NEAR(nd.length_scale, 0.09 / 1.1, 1e-15);
  EXPECT_NEAR(nd.time_scale, 0.027 / 1.21, 1e-15);
}

TEST(Nondimensionalize, KappaIsLinearAndLeavesAGUnchanged) {
  const Nondimensionalization nd = nondimensionalize({0.65, 0.5, 0.3, 1.1, 1});
  EXPECT_NEAR(nd.kappa(3 * 777.0), 3 * nd.kappa(777.0), 1e-12);
  EXPECT_NEAR(nd.kappa(-5.0), -nd.kappa(5.0), 1e-15);
}

TEST(Nondimensionalize, RejectsBadScales) {
  EXPECT_THROW(nondimensionalize({1, 1, 0, 1, 1}), NonPositiveScale);
  EXPECT_THROW(nondimensionalize({1, 1, 1, -1, 1}), NonPositiveScale);
  EXPECT_THROW(nondimensionalize({1, 1, 1, 1, 0}), NonPositiveScale);
  EXPECT_THROW(nondimensionalize({0, 1, 1, 1, 1}), BadSpec);
  EXPECT_THROW(nondimensionalize({1, -1, 1, 1, 1}), BadSpec);
  EXPECT_NO_THROW(nondimensionalize({1, 0, 1, 1, 1}));
}

TEST(Params, Validate) {
  Params p;
  p.A = 0;
  EXPECT_THROW(p.validate(), BadSpec);
  p.A = 1;
  p.G = 0;
  EXPECT_NO_THROW(p.validate());
  p.G = -1;
  EXPECT_THROW(p.validate(), BadSpec);
}

TEST(Bathymetry, Flat) {
  const Grid g(1, 1, 16, 16);
  EXPECT_EQ(make_bathymetry({}, g).max_abs(), 0.0);
}

TEST(Bathymetry, HalfEllipseNormalization) {
  const Grid g(1, 1, 64, 64);
  BathymetrySpec b;
  b.kind = BathymetrySpec::Kind::half_ellipse;
  b.amplitude = 2;
  for (bool invert : {false, true}) {
    b.invert = invert;
    const Field beta = make_bathymetry(b, g);
    EXPECT_EQ(beta.min(), 0.0);
    EXPECT_NEAR(beta.max(), 2.0, 2e-6);
    EXPECT_TRUE(bitwise_equal(beta, make_bathymetry(b, g)));
  }
}

TEST(Bathymetry, InvertedMoundIsShallowestAtCenter) {
  const Grid g(1, 1, 64, 64);
  BathymetrySpec b;
  b.kind = BathymetrySpec::Kind::half_ellipse;
  b.amplitude = 2;
  b.invert = true;
  const Field beta = make_bathymetry(b, g);
  EXPECT_LT(beta(32, 32), 0.05);
  EXPECT_NEAR(beta(0, 0), 2.0, 1e-3);
}

TEST(Bathymetry, RidgeDependsOnOneCoordinate) {
  const Grid g(1, 1, 64, 32);
  BathymetrySpec b;
  b.kind = BathymetrySpec::Kind::half_ellipse;
  b.amplitude = 1;
  b.semi_axes = {0.2, std::numeric_limits<double>::infinity()};
  const Field beta = make_bathymetry(b, g);
  for (int j1 = 0; j1 < 64; ++j1)
    for (int j2 = 1; j2 < 32; ++j2) ASSERT_EQ(beta(j1, j2), beta(j1, 0));
}

TEST(Bathymetry, SpectrallySmooth) {
  const Grid g(1, 1, 128, 128);
  BathymetrySpec b;
  b.kind = BathymetrySpec::Kind::half_ellipse;
  b.amplitude = 2;
  const Spectrum s = forward(make_bathymetry(b, g));
  double tail = 0;
  for (int i1 = 0; i1 < 128; ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2)
      if (std::abs(g.mode1(i1)) > 40 || i2 > 40) tail = std::max(tail, std::abs(s(i1, i2)));
  EXPECT_LT(tail, 1e-12);
}

TEST(Bathymetry, RandomIsSeededAndNormalized) {
  const Grid g(1, 1, 32, 32);
  BathymetrySpec b;
  b.kind = BathymetrySpec::Kind::random;
  b.amplitude = 0.7;
  b.seed = 42;
  b.max_mode = 5;
  const Field a = make_bathymetry(b, g);
  EXPECT_TRUE(bitwise_equal(a, make_bathymetry(b, g)));
  EXPECT_EQ(a.min(), 0.0);
  EXPECT_NEAR(a.max(), 0.7, 1e-14);
  b.seed = 43;
  EXPECT_FALSE(bitwise_equal(a, make_bathymetry(b, g)));
  // Band limit: nothing beyond max_mode.
  const Spectrum s = forward(a);
  for (int i1 = 0; i1 < 32; ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2)
      if (std::abs(g.mode1(i1)) > 5 || i2 > 5) {
        ASSERT_LT(std::abs(s(i1, i2)), 1e-14);
      }
}

TEST(Bathymetry, InvalidSpecs) {
  const Grid g(1, 1, 16, 16);
  BathymetrySpec b;
  b.kind = BathymetrySpec::Kind::half_ellipse;
  b.amplitude = -1;
  EXPECT_THROW(make_bathymetry(b, g), BadSpec);
  b.amplitude = 1;
  b.semi_axes = {0, 1};
  EXPECT_THROW(make_bathymetry(b, g), BadSpec);
  b.kind = BathymetrySpec::Kind::random;
  b.decay = 1.5;
  EXPECT_THROW(make_bathymetry(b, g), BadSpec);
  b.decay = 2;
  b.max_mode = 8;
  EXPECT_THROW(make_bathymetry(b, g), BadSpec);
  b.kind = BathymetrySpec::Kind::samples;
  EXPECT_THROW(make_bathymetry(b, g), BadSpec);
}

TEST(Forcing, ConstantIgnoresEta) {
  const Grid g(1, 1, 16, 16);
  Rng rng(1);
  const Field beta(g);
  const ForcingSpec spec = ForcingSpec::constant({0.3, -0.4});
  const ForcingData a = eval_forcing_data(spec, Field(g), beta);
  const ForcingData b = eval_forcing_data(spec, random_field(g, rng, 3) * 0.1, beta);
  EXPECT_TRUE(bitwise_equal(a.phi[0], b.phi[0]));
  EXPECT_TRUE(bitwise_equal(a.phi[1], b.phi[1]));
  EXPECT_EQ(a.phi[0].max(), 0.3);
  EXPECT_EQ(a.phi[1].min(), -0.4);
  EXPECT_EQ(a.psi.max_abs(), 0.0);
}

TEST(Forcing, GravityIsAffineInDepth) {
  const Grid g(1, 1, 16, 16);
  Rng rng(2);
  const Field beta = random_field(g, rng, 3).map([](double v) { return v * v; });
  const Field raw = random_field(g, rng, 3);
  const Field eta = raw * (0.1 / raw.max_abs());
  const ForcingData d = eval_forcing_data(ForcingSpec::gravity({1, 0}), eta, beta);
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    EXPECT_NEAR(d.phi[0][i], 1 + beta[i] + eta[i], 1e-14);
    EXPECT_EQ(d.phi[1][i], 0.0);
  }
}

TEST(Forcing, PolynomialMatchesPointwiseOracle) {
  const Grid g(1, 1, 36, 36);
  Rng rng(3);
  ForcingSpec spec;
  spec.phi_kind = ForcingSpec::VectorKind::polynomial;
  // In-band data: g2 eta^2 stays within |k| <= 12 = N/3.
  const VectorField g0(random_field(g, rng, 4), random_field(g, rng, 4));
  const VectorField g2(random_field(g, rng, 4), random_field(g, rng, 4));
  spec.phi_coeffs = {g0, VectorField::zeros(g), g2};
  const Field raw = random_field(g, rng, 4);
  const Field eta = raw * (0.5 / raw.max_abs());
  const ForcingData d = eval_forcing_data(spec, eta, Field(g));
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g.num_points(); ++i) {
      const double y = eta[i];
      EXPECT_NEAR(d.phi[c][i], g0[c][i] + g2[c][i] * y * y, 1e-12);
    }
}

TEST(Forcing, LinearInCoefficients) {
  const Grid g(1, 1, 32, 32);
  Rng rng(4);
  const Field raw = random_field(g, rng, 3);
  const Field eta = raw * (0.2 / raw.max_abs());
  auto spec_with = [&](const Field& c0, const Field& c1) {
    ForcingSpec s;
    s.psi_kind = ForcingSpec::ScalarKind::polynomial;
    s.psi_coeffs = {c0, c1};
    return s;
  };
  const Field a0 = random_field(g, rng, 3), a1 = random_field(g, rng, 3);
  const Field b0 = random_field(g, rng, 3), b1 = random_field(g, rng, 3);
  const Field fa = eval_forcing_data(spec_with(a0, a1), eta, Field(g)).psi;
  const Field fb = eval_forcing_data(spec_with(b0, b1), eta, Field(g)).psi;
  const Field fab = eval_forcing_data(spec_with(a0 + 2.0 * b0, a1 + 2.0 * b1), eta, Field(g)).psi;
  EXPECT_LE(max_diff(fab, fa + 2.0 * fb), 1e-13);
}

TEST(Forcing, RangeViolation) {
  const Grid g(1, 1, 16, 16);
  const Field beta = Field::constant(g, 0.0);
  const Field eta = Field::from_function(g, [](double x, double) { return x < 0.5 ? -1.0 : 1.0; });
  EXPECT_THROW(eval_forcing_data(ForcingSpec::gravity({1, 0}), eta, beta), RangeViolation);
  ForcingSpec capped = ForcingSpec::gravity({1, 0});
  capped.y_max = 0.5;
  EXPECT_THROW(eval_forcing_data(capped, eta * 0.9, beta), RangeViolation);
}

TEST(Forcing, DegreeCap) {
  const Grid g(1, 1, 16, 16);
  ForcingSpec spec;
  spec.psi_kind = ForcingSpec::ScalarKind::polynomial;
  spec.max_degree = 2;
  spec.psi_coeffs.assign(4, Field(g));
  EXPECT_THROW(spec.validate(g), BadSpec);
}
