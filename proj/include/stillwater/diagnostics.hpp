#pragma once

#include <optional>

#include "stillwater/operators.hpp"

namespace stillwater {

struct PowerBalance {
  double lhs;  // int A|u|^2 + d (|grad u + grad u^t|^2 / 2 + 2 |div u|^2)
  double rhs;  // int Phi . u
  double relerr;
};

/// Phi is the total source (kappa d F for a solution of the problem).
PowerBalance power_balance(const State& s, const Field& beta, const Params& p, const VectorField& Phi);

/// ||div((1 + beta + eta) u)||_L2, the product dealiased before differentiation.
double continuity_residual(const State& s, const Field& beta);

/// mean(u . grad log(1 + beta + eta)).
double divergence_lemma_mean(const State& s, const Field& beta);

struct DiagnosticsReport {
  PowerBalance power{0, 0, 0};
  double continuity = 0;
  double lemma_mean = 0;
  double u_l2 = 0;
  double u_h1 = 0;
  double u_h2 = 0;
  double eta_h2 = 0;
  double eta_h3 = 0;
  double phi_l2 = 0;
  double phi_hm1 = 0;
  double eta_max = 0;
  double depth_min = 0;
  /// ||u, eta||_{H1 x H2} / (||Phi||_{H-1} <||Phi||_{H-1}>); empty when Phi = 0.
  std::optional<double> apriori_ratio;
};

DiagnosticsReport apriori_report(const State& s, const Field& beta, const Params& p, const VectorField& Phi);

/// Total source kappa (1 + beta + eta) F(eta).
VectorField total_source(const State& s, double kappa, const Problem& prob);

/// Report for a point of the problem, with Phi = kappa d F(eta).
DiagnosticsReport diagnose(const State& s, double kappa, const Problem& prob);

/// H^-1 norm via the multiplier (1 + |xi|^2)^(-1/2).
double norm_hminus1(const VectorField& v);

/// ||d_axis u||_L2 + ||d_axis eta||_L2. Throws PreconditionViolation if beta
/// or the forcing coefficients vary along axis (cross modes above 1e-12).
double symmetry_check(const State& s, int axis, const Problem& prob);

/// True if every spectral coefficient with nonzero wavenumber along axis is
/// at most tol times the field's L2 norm (absolute when the field is zero).
bool independent_of(const Field& f, int axis, double tol = 1e-12);

struct IdentityThresholds {
  double power = 1e-8;
  double tol_nonlinear = 1e-9;
  double lemma = 1e-10;
};

struct IdentityCheck {
  bool power_ok;
  bool continuity_ok;
  bool lemma_ok;
  [[nodiscard]] bool ok() const { return power_ok && continuity_ok && lemma_ok; }
};

/// The three solution identities with the acceptance thresholds:
/// power relerr, continuity <= 10 tol (1 + ||u||_H1), |lemma mean| <= 1e-10 ||u||_L2.
IdentityCheck check_identities(const DiagnosticsReport& r, const IdentityThresholds& t = {});

}  // namespace stillwater
