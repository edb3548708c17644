#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stillwater/operators.hpp"

namespace stillwater {

struct SolveSettings {
  double tol_nonlinear = 1e-9;  // on ||x + K(x)|| / max(1, ||x||) in H1 x H2
  int max_picard = 200;
  int max_newton = 30;
  double fd_epsilon = 1e-7;
  double tol_lin = 1e-10;
  int krylov_restart = 30;
  int krylov_max = 500;
  bool dealias = true;
  int polish_steps = 2;  // Newton steps taken after tol_nonlinear is met, while they gain 10x

  /// Throws BadSpec.
  void validate() const;
  /// Linear settings for solves nested inside a nonlinear iteration.
  [[nodiscard]] KrylovSettings inner_krylov() const;
  [[nodiscard]] KrylovSettings krylov() const;
};

struct SolveResult {
  State state;
  int iterations = 0;
  double residual = 0;          // relative fixed-point residual of the returned state
  std::vector<double> history;  // relative residual per iteration
  int krylov_iterations = 0;
};

/// ||x + K(x, kappa)|| in H1 x H2 together with the fixed-point image.
struct FixedPointResidual {
  State g;  // x + K(x, kappa)
  double norm = 0;
  double relative = 0;  // norm / max(1, ||x||)
};
FixedPointResidual fixed_point_residual(const State& x, double kappa, const Problem& prob,
                                        const KrylovSettings& settings);

/// Solves (P + L + D(N - kappa F)(x)) delta = rhs by GMRES, with the
/// derivative taken by directional differences of step
/// fd_epsilon (1 + ||x||) / ||v||. Adds the Krylov count to *iterations.
State solve_jacobian(const State& x, double kappa, const Problem& prob, const RhsPair& rhs,
                     const SolveSettings& settings, double tolerance, int* iterations = nullptr);

/// x <- -K(x); throws NoConvergence, DepthViolation.
SolveResult picard_solve(double kappa, const Problem& prob, const State& init, const SolveSettings& settings = {});
/// Jacobian-free Newton-Krylov on x + K(x, kappa) = 0 with backtracking.
/// Throws NoConvergence, LinearSolveFailure, DepthViolation.
SolveResult newton_solve(double kappa, const Problem& prob, const State& init, const SolveSettings& settings = {});

struct BlowupTriple {
  double eta_max;        // ||eta||_inf
  double inverse_depth;  // 1 / min(1 + beta + eta)
  double kappa_abs;
};
BlowupTriple blowup_monitor(const State& s, const Field& beta, double kappa);

struct BranchPoint {
  State state;
  double kappa;
  BlowupTriple blowup;
  double residual;
  int newton_iterations;
  int halvings;  // step reductions needed to reach this point
  double step;   // kappa increment or arclength step that produced it
};

enum class Termination { target_reached, blowup_threshold, step_failure };
std::string to_string(Termination t);

struct Branch {
  std::vector<BranchPoint> points;
  Termination termination = Termination::target_reached;
  std::string detail;
};

struct ContinuationSettings {
  enum class Mode { natural, arclength };
  Mode mode = Mode::natural;
  // Natural mode: strictly monotone; starts at 0 unless initial is set, in
  // which case initial is taken as the solution at schedule.front().
  std::vector<double> schedule;
  std::optional<State> initial;
  double kappa_target = 0;       // arclength mode stops once kappa passes this
  double ds = 0.1;               // initial arclength step
  double ds_min = 1e-6;
  double ds_max = 100;
  int max_steps = 500;
  int max_halvings = 8;
  double eta_max = 10;
  double depth_min = 1e-3;
  double kappa_max = 1e12;
};

/// Called after every accepted point, e.g. to stream output.
using BranchObserver = std::function<void(const BranchPoint&)>;

Branch continue_branch(const Problem& prob, const ContinuationSettings& cont, const SolveSettings& settings,
                       const BranchObserver& observer = {});

/// kappa_1 .. kappa_n geometric up to target, preceded by 0.
std::vector<double> geometric_schedule(double first, double target, int count);

}  // namespace stillwater
