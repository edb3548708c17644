#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stillwater/model.hpp"
#include "stillwater/solver.hpp"

namespace stillwater {

enum class Mode { solve, continue_branch, verify };

/// Everything a run needs, parsed from an INI file:
///
///   [grid]            L1 L2 N1 N2 (or L, N for both axes)
///   [dimensional]     alpha g mu sigma H
///   [nondimensional]  A G                (exactly one of the two blocks)
///   [bathymetry]      kind amplitude center1 center2 semi_axis1 semi_axis2
///                     cutoff invert seed decay max_mode path
///   [forcing]         phi psi tau nu1 nu2 coefficients y_max
///   [solver]          method tol_nonlinear max_picard max_newton fd_epsilon
///                     tol_lin krylov_restart krylov_max dealias polish_steps
///   [run]             kappa kappa_hat schedule first count target target_hat
///                     continuation ds ds_min ds_max max_steps max_halvings
///                     eta_max depth_min kappa_max out seed jobs emit
///
/// Relative paths are resolved against the config file's directory.
struct RunConfig {
  double L1 = 1, L2 = 1;
  int N1 = 64, N2 = 64;

  std::optional<DimensionalParams> dimensional;
  std::optional<std::pair<double, double>> nondimensional;  // (A, G)

  BathymetrySpec bathymetry;
  ForcingSpec forcing;
  std::filesystem::path coefficients;  // SWF1 file with polynomial coefficients

  SolveSettings solver;
  enum class Method { newton, picard };
  Method method = Method::newton;

  // solve: every kappa is an independent point; continue: the schedule
  // (leading 0 added when missing) or, in arclength mode, its last entry.
  std::vector<double> kappas;
  ContinuationSettings continuation;

  std::filesystem::path out = "out";
  std::uint64_t seed = 0;  // verify-mode random data
  int jobs = 1;
  bool emit_div = false;
  bool emit_curl = false;

  [[nodiscard]] Grid grid() const;
  /// Nondimensional constants including the periods.
  [[nodiscard]] Params params() const;
};

/// Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

/// STILLWATER_OUT and STILLWATER_THREADS.
void apply_environment(RunConfig& cfg);

/// Parses "div_u,curl_u"; throws ConfigError on unknown names.
void set_emit(RunConfig& cfg, const std::string& list);

}  // namespace stillwater
