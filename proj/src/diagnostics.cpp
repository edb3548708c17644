#include "stillwater/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stillwater {

PowerBalance power_balance(const State& s, const Field& beta, const Params& p, const VectorField& Phi) {
  const Grid& g = s.grid();
  Field d = beta + s.eta;
  d += 1.0;
  const VectorField g1 = gradient(s.u[0]), g2 = gradient(s.u[1]);
  const Field div = g1[0] + g2[1];
  const Field shear = g1[1] + g2[0];
  std::vector<double> integrand(g.num_points());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double sym2 = 4 * g1[0][i] * g1[0][i] + 4 * g2[1][i] * g2[1][i] + 2 * shear[i] * shear[i];
    const double u2 = s.u[0][i] * s.u[0][i] + s.u[1][i] * s.u[1][i];
    integrand[i] = p.A * u2 + d[i] * (0.5 * sym2 + 2 * div[i] * div[i]);
  }
  const double lhs = integrate(Field(g, std::move(integrand)));
  const double rhs = l2_inner(Phi[0], s.u[0]) + l2_inner(Phi[1], s.u[1]);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
  return {lhs, rhs, std::abs(lhs - rhs) / scale};
}

double continuity_residual(const State& s, const Field& beta) {
  Field d = beta + s.eta;
  d += 1.0;
  return norm_l2(divergence(VectorField(dealiased_product(d, s.u[0]), dealiased_product(d, s.u[1]))));
}

double divergence_lemma_mean(const State& s, const Field& beta) {
  Field d = beta + s.eta;
  d += 1.0;
  const VectorField gs = gradient(beta + s.eta);
  return ((s.u[0] * gs[0] + s.u[1] * gs[1]) / d).mean();
}

double norm_hminus1(const VectorField& v) { return norm_sobolev(v, -1); }

VectorField total_source(const State& s, double kappa, const Problem& prob) {
  if (kappa == 0) return VectorField::zeros(prob.grid());
  const Field d = prob.depth(s.eta);
  const VectorField F = forcing_map(s.eta, prob);
  return {kappa * (d * F[0]), kappa * (d * F[1])};
}

DiagnosticsReport apriori_report(const State& s, const Field& beta, const Params& p, const VectorField& Phi) {
  DiagnosticsReport r;
  r.power = power_balance(s, beta, p, Phi);
  r.continuity = continuity_residual(s, beta);
  r.lemma_mean = divergence_lemma_mean(s, beta);
  r.u_l2 = norm_l2(s.u);
  r.u_h1 = norm_sobolev(s.u, 1);
  r.u_h2 = norm_sobolev(s.u, 2);
  r.eta_h2 = norm_sobolev(s.eta, 2);
  r.eta_h3 = norm_sobolev(s.eta, 3);
  r.phi_l2 = norm_l2(Phi);
  r.phi_hm1 = norm_hminus1(Phi);
  r.eta_max = s.eta.max_abs();
  Field d = beta + s.eta;
  d += 1.0;
  r.depth_min = d.min();
  if (r.phi_hm1 > 0) {
    const double x = std::hypot(r.u_h1, r.eta_h2);
    r.apriori_ratio = x / (r.phi_hm1 * std::sqrt(1 + r.phi_hm1 * r.phi_hm1));
  }
  return r;
}

DiagnosticsReport diagnose(const State& s, double kappa, const Problem& prob) {
  return apriori_report(s, prob.beta(), prob.params(), total_source(s, kappa, prob));
}

bool independent_of(const Field& f, int axis, double tol) {
  const Spectrum s = forward(f);
  const Grid& g = f.grid();
  double cross = 0;
  for (int i1 = 0; i1 < g.size(0); ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      const bool moves = axis == 0 ? g.mode1(i1) != 0 : i2 != 0;
      if (moves) cross += g.multiplicity(i2) * std::norm(s(i1, i2));
    }
  cross = std::sqrt(cross * g.area());
  return cross <= tol * std::max(1.0, norm_l2(f));
}

double symmetry_check(const State& s, int axis, const Problem& prob) {
  if (axis != 0 && axis != 1) throw BadSpec("symmetry_check: axis must be 0 or 1");
  auto need = [&](const Field& f, const char* what) {
    if (!independent_of(f, axis, 1e-12))
      throw PreconditionViolation(std::string("symmetry_check: ") + what + " depends on the chosen coordinate");
  };
  need(prob.beta(), "bathymetry");
  const ForcingSpec& fs = prob.forcing();
  for (const auto& c : fs.phi_coeffs) {
    need(c[0], "phi coefficient");
    need(c[1], "phi coefficient");
  }
  for (const auto& c : fs.psi_coeffs) need(c, "psi coefficient");
  for (const auto& c : fs.tau_coeffs) {
    need(c.xx, "tau coefficient");
    need(c.xy, "tau coefficient");
    need(c.yy, "tau coefficient");
  }
  return std::hypot(norm_l2(derivative(s.u[0], axis)), norm_l2(derivative(s.u[1], axis))) +
         norm_l2(derivative(s.eta, axis));
}

IdentityCheck check_identities(const DiagnosticsReport& r, const IdentityThresholds& t) {
  return {r.power.relerr <= t.power, r.continuity <= 10 * t.tol_nonlinear * (1 + r.u_h1),
          std::abs(r.lemma_mean) <= t.lemma * r.u_l2};
}

}  // namespace stillwater
