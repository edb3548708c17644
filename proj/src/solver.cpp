#include "stillwater/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stillwater {

void SolveSettings::validate() const {
  if (!(tol_nonlinear > 0)) throw BadSpec("SolveSettings: tol_nonlinear must be positive");
  if (!(tol_lin > 0)) throw BadSpec("SolveSettings: tol_lin must be positive");
  if (!(fd_epsilon > 0)) throw BadSpec("SolveSettings: fd_epsilon must be positive");
  if (max_picard < 1 || max_newton < 1) throw BadSpec("SolveSettings: iteration limits must be >= 1");
  if (krylov_restart < 1 || krylov_max < 1) throw BadSpec("SolveSettings: Krylov limits must be >= 1");
  if (polish_steps < 0) throw BadSpec("SolveSettings: polish_steps must be >= 0");
}

KrylovSettings SolveSettings::krylov() const { return {krylov_restart, krylov_max, tol_lin}; }

KrylovSettings SolveSettings::inner_krylov() const {
  return {krylov_restart, krylov_max, std::min(tol_lin, 0.01 * tol_nonlinear)};
}

BlowupTriple blowup_monitor(const State& s, const Field& beta, double kappa) {
  Field d = beta + s.eta;
  d += 1.0;
  return {s.eta.max_abs(), 1.0 / d.min(), std::abs(kappa)};
}

FixedPointResidual fixed_point_residual(const State& x, double kappa, const Problem& prob,
                                        const KrylovSettings& settings) {
  FixedPointResidual out{solve_linear(residual_full(x, kappa, prob), prob, settings), 0, 0};
  out.norm = state_norm(out.g);
  out.relative = out.norm / std::max(1.0, state_norm(x));
  return out;
}

namespace {

State with_mean_zero_eta(State s) {
  s.eta = project_mean_zero(s.eta);
  return s;
}

[[noreturn]] void fail(const std::string& what, int iterations, const std::vector<double>& history) {
  std::ostringstream os;
  os << what << " after " << iterations << " iterations";
  if (!history.empty()) os << " (last relative residual " << history.back() << ")";
  throw NoConvergence(os.str(), iterations, history);
}

// N(x) - kappa (0, F(eta)) on the residual modes.
PairSpectrum nonlinear_part(const State& x, double kappa, const Problem& prob) {
  RhsPair r = apply_nonlinearity(x, prob);
  if (kappa != 0) r.phi.axpy(-kappa, forcing_map(x.eta, prob));
  PairSpectrum p = to_spectrum(r);
  strip_nyquist(p);
  return p;
}

}  // namespace

SolveResult picard_solve(double kappa, const Problem& prob, const State& init, const SolveSettings& settings) {
  settings.validate();
  const KrylovSettings ks = settings.inner_krylov();
  State x = with_mean_zero_eta(init);
  std::vector<double> history;
  for (int n = 1; n <= settings.max_picard; ++n) {
    State y = apply_K(x, kappa, prob, ks);
    y.u *= -1.0;
    y.eta = project_mean_zero(-y.eta);
    State diff = x;
    diff.axpy(-1.0, y);
    const double rel = state_norm(diff) / std::max(1.0, state_norm(x));
    history.push_back(rel);
    if (!std::isfinite(rel) || rel > 1e8) fail("picard_solve: iteration diverged", n, history);
    if (rel <= settings.tol_nonlinear) return {std::move(x), n, rel, std::move(history), 0};
    x = std::move(y);
  }
  fail("picard_solve: tolerance not met", settings.max_picard, history);
}

State solve_jacobian(const State& x, double kappa, const Problem& prob, const RhsPair& rhs,
                     const SolveSettings& settings, double tolerance, int* iterations) {
  const Params& p = prob.params();
  const PairSpectrum nx = nonlinear_part(x, kappa, prob);
  PairSpectrum b = to_spectrum(rhs);
  strip_nyquist(b);
  b.c[0](0, 0) = 0.0;
  const double xnorm = state_norm(x);

  // Right preconditioning: J P^-1 y = b, delta = P^-1 y.
  auto jvp = [&](const PairSpectrum& y) {
    const PairSpectrum v = invert_principal(y, p);
    const State vs = state_from_spectrum(v);
    PairSpectrum out = to_spectrum(apply_bathymetric_remainder(vs, prob));
    strip_nyquist(out);
    out.axpy(1.0, y);
    const double vn = state_norm(v);
    if (vn == 0) return out;
    const double h = settings.fd_epsilon * (1.0 + xnorm) / vn;
    State xp = x;
    xp.axpy(h, vs);
    PairSpectrum np = nonlinear_part(xp, kappa, prob);
    np.axpy(-1.0, nx);
    out.axpy(1.0 / h, np);
    return out;
  };
  KrylovSettings ks = settings.krylov();
  ks.tolerance = tolerance;
  const Grid& g = prob.grid();
  PairSpectrum y{{Spectrum(g), Spectrum(g), Spectrum(g)}};
  const KrylovStats st = gmres(jvp, b, y, rhs_inner, ks);
  if (iterations) *iterations += st.iterations;
  if (!st.converged && st.residual > 0.5) {
    std::ostringstream os;
    os << "solve_jacobian: Krylov solve stalled at relative residual " << st.residual;
    throw LinearSolveFailure(os.str(), st.iterations, st.history);
  }
  return state_from_spectrum(invert_principal(y, p));
}

SolveResult newton_solve(double kappa, const Problem& prob, const State& init, const SolveSettings& settings) {
  settings.validate();
  const KrylovSettings ks = settings.inner_krylov();
  State x = with_mean_zero_eta(init);
  std::vector<double> history;
  int krylov_total = 0;

  FixedPointResidual G = fixed_point_residual(x, kappa, prob, ks);
  // One damped Newton step; false if no backtrack reduces ||G||.
  auto step = [&](double forcing_term) {
    RhsPair rhs = residual_full(x, kappa, prob);
    rhs.g *= -1.0;
    rhs.phi *= -1.0;
    const State delta = solve_jacobian(x, kappa, prob, rhs, settings, forcing_term, &krylov_total);
    double t = 1.0;
    for (int k = 0; k <= 8; ++k, t *= 0.5) {
      State trial = x;
      trial.axpy(t, delta);
      trial = with_mean_zero_eta(std::move(trial));
      try {
        FixedPointResidual Gt = fixed_point_residual(trial, kappa, prob, ks);
        if (Gt.norm <= (1.0 - 1e-4 * t) * G.norm) {
          x = std::move(trial);
          G = std::move(Gt);
          return true;
        }
      } catch (const DepthViolation&) {
      } catch (const RangeViolation&) {
      }
    }
    return false;
  };

  for (int it = 0;; ++it) {
    history.push_back(G.relative);
    if (G.relative <= settings.tol_nonlinear) {
      // Polish: extra full steps while they still gain an order of magnitude.
      for (int p = 0; p < settings.polish_steps && it < settings.max_newton; ++p) {
        const State keep = x;
        const FixedPointResidual keepG = G;
        bool ok = false;
        try {
          ok = step(1e-3);
        } catch (const LinearSolveFailure&) {
        }
        if (!ok || G.norm > 0.1 * keepG.norm) {
          if (!ok || G.norm > keepG.norm) {
            x = keep;
            G = keepG;
          }
          break;
        }
        ++it;
        history.push_back(G.relative);
      }
      return {std::move(x), it, G.relative, std::move(history), krylov_total};
    }
    if (it == settings.max_newton) fail("newton_solve: tolerance not met", it, history);
    if (!step(std::clamp(G.relative, ks.tolerance, 1e-3))) fail("newton_solve: line search failed", it + 1, history);
  }
}

}  // namespace stillwater
