#include <gtest/gtest.h>

#include <cstdlib>

#include "stillwater/config.hpp"

using namespace stillwater;

namespace {

const char* kMinimal = R"(
[grid]
L = 2
N = 32

[nondimensional]
A = 0.5
G = 0

[forcing]
phi = gravity
nu1 = 1

[run]
kappa = 0.1, 0.2
)";

std::string with(const std::string& extra) { return std::string(kMinimal) + extra; }

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalFile) {
  const RunConfig c = parse_config(kMinimal, "/tmp/base");
  EXPECT_EQ(c.L1, 2.0);
  EXPECT_EQ(c.L2, 2.0);
  EXPECT_EQ(c.N1, 32);
  EXPECT_EQ(c.N2, 32);
  const Params p = c.params();
  EXPECT_EQ(p.A, 0.5);
  EXPECT_EQ(p.G, 0.0);
  EXPECT_EQ(p.L[1], 2.0);
  EXPECT_EQ(c.kappas, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(c.forcing.phi_kind, ForcingSpec::VectorKind::gravity_affine);
  EXPECT_EQ(c.bathymetry.kind, BathymetrySpec::Kind::flat);
  EXPECT_EQ(c.method, RunConfig::Method::newton);
  EXPECT_EQ(c.out, std::filesystem::path("/tmp/base/out"));
  EXPECT_TRUE(c.grid() == Grid(2, 2, 32, 32));
}

TEST(Config, BothParameterBlocksAreRejected) {
  const std::string msg = error_of(with("[dimensional]\nalpha = 1\ng = 1\nmu = 1\nsigma = 1\nH = 1\n"));
  EXPECT_NE(msg.find("[dimensional]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("[nondimensional]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("mutually exclusive"), std::string::npos) << msg;
}

TEST(Config, NeitherParameterBlockIsRejected) {
  EXPECT_THROW(parse_config("[grid]\nN = 16\n[run]\nkappa = 1\n"), ConfigError);
}

TEST(Config, UnknownKeysAndSections) {
  EXPECT_NE(error_of(with("[solver]\ntolerance = 1\n")).find("tolerance"), std::string::npos);
  EXPECT_NE(error_of(with("[extras]\nx = 1\n")).find("extras"), std::string::npos);
}

TEST(Config, BadValues) {
  EXPECT_THROW(parse_config(with("[solver]\nmethod = bisection\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[solver]\nmax_newton = many\n")), ConfigError);
  std::string odd = kMinimal;
  odd.replace(odd.find("N = 32"), 6, "N = 33");
  EXPECT_THROW(parse_config(odd), ConfigError);
}

TEST(Config, DimensionalKappaHat) {
  const RunConfig c = parse_config(R"(
[grid]
N = 16
[dimensional]
alpha = 0.65
g = 0.5
mu = 0.3
sigma = 1.1
H = 1
[run]
schedule = geometric
first = 0.1
count = 4
target_hat = 20000
)");
  const double kappa = 20000 * std::pow(0.3, 4) / std::pow(1.1, 3);
  ASSERT_FALSE(c.kappas.empty());
  EXPECT_NEAR(c.kappas.back(), kappa, 1e-12 * kappa);
  EXPECT_EQ(c.kappas.front(), 0.1);
  EXPECT_EQ(c.kappas.size(), 4u);
  EXPECT_NEAR(c.params().A, 0.65 * 0.027 / 1.21, 1e-15);
}

TEST(Config, BathymetryAndSolverKeys) {
  const RunConfig c = parse_config(with(R"(
[bathymetry]
kind = half_ellipse
amplitude = 2
semi_axis2 = inf
invert = true
[solver]
method = picard
tol_nonlinear = 1e-8
polish_steps = 0
)"));
  EXPECT_EQ(c.bathymetry.kind, BathymetrySpec::Kind::half_ellipse);
  EXPECT_EQ(c.bathymetry.amplitude, 2.0);
  EXPECT_EQ(c.bathymetry.semi_axes[0], 0.5);
  EXPECT_TRUE(std::isinf(c.bathymetry.semi_axes[1]));
  EXPECT_TRUE(c.bathymetry.invert);
  EXPECT_EQ(c.method, RunConfig::Method::picard);
  EXPECT_EQ(c.solver.tol_nonlinear, 1e-8);
  EXPECT_EQ(c.solver.polish_steps, 0);
}

TEST(Config, EnvironmentOverrides) {
  RunConfig c = parse_config(kMinimal);
  ::setenv("STILLWATER_OUT", "/tmp/elsewhere", 1);
  ::setenv("STILLWATER_THREADS", "3", 1);
  apply_environment(c);
  EXPECT_EQ(c.out, std::filesystem::path("/tmp/elsewhere"));
  EXPECT_EQ(c.jobs, 3);
  ::setenv("STILLWATER_THREADS", "zero", 1);
  EXPECT_THROW(apply_environment(c), ConfigError);
  ::unsetenv("STILLWATER_OUT");
  ::unsetenv("STILLWATER_THREADS");
}

TEST(Config, EmitList) {
  RunConfig c = parse_config(kMinimal);
  set_emit(c, "div_u,curl_u");
  EXPECT_TRUE(c.emit_div);
  EXPECT_TRUE(c.emit_curl);
  RunConfig d = parse_config(kMinimal);
  set_emit(d, "curl_u");
  EXPECT_FALSE(d.emit_div);
  EXPECT_TRUE(d.emit_curl);
  EXPECT_THROW(set_emit(d, "vorticity"), ConfigError);
}
