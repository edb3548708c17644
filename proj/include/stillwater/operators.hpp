#pragma once

#include "stillwater/krylov.hpp"
#include "stillwater/model.hpp"
#include "stillwater/spectral.hpp"

namespace stillwater {

/// Unknown (u, eta) of the stationary problem; eta has zero mean.
struct State {
  VectorField u;
  Field eta;

  static State zeros(const Grid& grid) { return {VectorField::zeros(grid), Field(grid)}; }
  [[nodiscard]] const Grid& grid() const { return eta.grid(); }
  State& axpy(double a, const State& x);
};

/// Right-hand side (g, phi) of the linear problems; g has zero mean.
struct RhsPair {
  Field g;
  VectorField phi;

  static RhsPair zeros(const Grid& grid) { return {Field(grid), VectorField::zeros(grid)}; }
  [[nodiscard]] const Grid& grid() const { return g.grid(); }
  RhsPair& axpy(double a, const RhsPair& x);
};

/// Three spectra in a fixed order: (u1, u2, eta) for states and
/// (g, phi1, phi2) for right-hand sides. Used as a Krylov vector.
struct PairSpectrum {
  std::array<Spectrum, 3> c;

  PairSpectrum& operator*=(double a);
  PairSpectrum& axpy(double a, const PairSpectrum& x);
};

PairSpectrum to_spectrum(const State& s);
PairSpectrum to_spectrum(const RhsPair& r);
State state_from_spectrum(const PairSpectrum& p);
RhsPair rhs_from_spectrum(const PairSpectrum& p);

/// Zero every Nyquist row and column; discrete states and residuals live on
/// the complement of those modes.
void strip_nyquist(PairSpectrum& p);

/// Inner product of the residual space: H1 on g, L2 on phi.
double rhs_inner(const PairSpectrum& a, const PairSpectrum& b);
double rhs_norm(const RhsPair& r);
/// H^su x H^se norm of a state.
double state_norm(const State& s, int su = 1, int se = 2);
double state_norm(const PairSpectrum& s, int su = 1, int se = 2);

/// Fixed data of one problem: bathymetry, constants, forcing and the
/// bathymetry-only coefficient fields reused by every operator call.
class Problem {
 public:
  Problem(Field beta, Params params, ForcingSpec forcing, bool dealias = true);

  [[nodiscard]] const Grid& grid() const { return beta_.grid(); }
  [[nodiscard]] const Field& beta() const { return beta_; }
  [[nodiscard]] const Params& params() const { return params_; }
  [[nodiscard]] const ForcingSpec& forcing() const { return forcing_; }
  [[nodiscard]] bool dealiasing() const { return dealias_; }
  [[nodiscard]] double depth_epsilon() const { return forcing_.depth_epsilon; }

  /// beta / (1 + beta)
  [[nodiscard]] const Field& base_ratio() const { return base_ratio_; }
  /// 1 + beta
  [[nodiscard]] const Field& base_depth() const { return base_depth_; }
  [[nodiscard]] const VectorField& grad_beta() const { return grad_beta_; }
  /// grad log(1 + beta)
  [[nodiscard]] const VectorField& grad_log_base() const { return grad_log_base_; }

  /// Pointwise product, dealiased when the problem says so.
  [[nodiscard]] Field product(const Field& a, const Field& b) const;
  /// 1 + beta + eta; throws DepthViolation if its minimum is <= depth_epsilon.
  [[nodiscard]] Field depth(const Field& eta) const;

 private:
  Field beta_;
  Params params_;
  ForcingSpec forcing_;
  bool dealias_;
  Field base_ratio_;
  Field base_depth_;
  VectorField grad_beta_;
  VectorField grad_log_base_;
};

/// S u = grad u + grad u^t + 2 (div u) I
SymTensorField viscous_stress(const VectorField& u);

/// P(u, eta) = (div u, A u - div S u + (G - Lap) grad eta)
RhsPair apply_principal(const State& s, const Params& p);
PairSpectrum apply_principal(const PairSpectrum& s, const Params& p);
/// Exact per-mode inverse of P. The mean of r.g is ignored.
State invert_principal(const RhsPair& r, const Params& p);
PairSpectrum invert_principal(const PairSpectrum& r, const Params& p);

/// L(u, eta) = (P0(u . grad log(1+beta)), -A beta/(1+beta) u - S u grad log(1+beta))
RhsPair apply_bathymetric_remainder(const State& s, const Problem& prob);

/// Matrix-free solve of (P + L) x = r by GMRES, right-preconditioned with P^-1.
/// Throws LinearSolveFailure with the residual history.
State solve_linear(const RhsPair& r, const Problem& prob, const KrylovSettings& settings = {},
                   KrylovStats* stats = nullptr);
PairSpectrum solve_linear(const PairSpectrum& r, const Problem& prob, const KrylovSettings& settings,
                          KrylovStats* stats = nullptr);

/// ||(P + L)x - r|| in the residual norm, over the modes solve_linear works
/// on (no Nyquist modes, mean of r.g ignored).
double linear_residual(const State& x, const RhsPair& r, const Problem& prob);

/// N(u, eta) = (P0(u . grad log(1 + eta/(1+beta))),
///              u . grad u - A u eta / ((1+beta)(1+beta+eta)) - S u grad log(1 + eta/(1+beta)))
RhsPair apply_nonlinearity(const State& s, const Problem& prob);

/// F(eta) = (1+beta+eta)^-1 (phi + grad((1+beta+eta) psi) + tau grad eta)
VectorField forcing_map(const Field& eta, const Problem& prob);

/// (P + L + N)(s) - (0, kappa F(eta)).
RhsPair residual_full(const State& s, double kappa, const Problem& prob);
/// Same quantity from the undecomposed operator; kept as an independent check.
RhsPair residual_direct(const State& s, double kappa, const Problem& prob);

/// K(x, kappa) = (P + L)^-1 (N(x) - kappa (0, F(eta))).
State apply_K(const State& s, double kappa, const Problem& prob, const KrylovSettings& settings = {});

}  // namespace stillwater
