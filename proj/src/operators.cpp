#include "stillwater/operators.hpp"

#include <cmath>
#include <sstream>

namespace stillwater {

State& State::axpy(double a, const State& x) {
  u.axpy(a, x.u);
  eta.axpy(a, x.eta);
  return *this;
}

RhsPair& RhsPair::axpy(double a, const RhsPair& x) {
  g.axpy(a, x.g);
  phi.axpy(a, x.phi);
  return *this;
}

PairSpectrum& PairSpectrum::operator*=(double a) {
  for (auto& s : c) s *= a;
  return *this;
}

PairSpectrum& PairSpectrum::axpy(double a, const PairSpectrum& x) {
  for (int i = 0; i < 3; ++i) c[i].axpy(a, x.c[i]);
  return *this;
}

PairSpectrum to_spectrum(const State& s) { return {{forward(s.u[0]), forward(s.u[1]), forward(s.eta)}}; }
PairSpectrum to_spectrum(const RhsPair& r) { return {{forward(r.g), forward(r.phi[0]), forward(r.phi[1])}}; }

State state_from_spectrum(const PairSpectrum& p) {
  return {VectorField(inverse(p.c[0]), inverse(p.c[1])), inverse(p.c[2])};
}

RhsPair rhs_from_spectrum(const PairSpectrum& p) {
  return {inverse(p.c[0]), VectorField(inverse(p.c[1]), inverse(p.c[2]))};
}

void strip_nyquist(PairSpectrum& p) {
  const Grid& g = p.c[0].grid();
  const int n1 = g.size(0) / 2, n2 = g.size(1) / 2;
  for (auto& s : p.c) {
    for (int i2 = 0; i2 < g.num_cols(); ++i2) s(n1, i2) = 0.0;
    for (int i1 = 0; i1 < g.size(0); ++i1) s(i1, n2) = 0.0;
  }
}

double rhs_inner(const PairSpectrum& a, const PairSpectrum& b) {
  return sobolev_inner(a.c[0], b.c[0], 1) + sobolev_inner(a.c[1], b.c[1], 0) + sobolev_inner(a.c[2], b.c[2], 0);
}

double rhs_norm(const RhsPair& r) {
  const PairSpectrum p = to_spectrum(r);
  return std::sqrt(rhs_inner(p, p));
}

double state_norm(const PairSpectrum& s, int su, int se) {
  const double a = norm_sobolev(s.c[0], su), b = norm_sobolev(s.c[1], su), c = norm_sobolev(s.c[2], se);
  return std::sqrt(a * a + b * b + c * c);
}

double state_norm(const State& s, int su, int se) { return state_norm(to_spectrum(s), su, se); }

// ---- Problem ----

Problem::Problem(Field beta, Params params, ForcingSpec forcing, bool dealias)
    : beta_(std::move(beta)),
      params_(params),
      forcing_(std::move(forcing)),
      dealias_(dealias),
      base_ratio_(beta_.grid()),
      base_depth_(beta_.grid()),
      grad_beta_(VectorField::zeros(beta_.grid())),
      grad_log_base_(VectorField::zeros(beta_.grid())) {
  params_.validate();
  forcing_.validate(grid());
  if (params_.L[0] != grid().length(0) || params_.L[1] != grid().length(1))
    throw BadSpec("Problem: parameter periods differ from the grid periods");
  if (beta_.min() < 0) throw BadSpec("Problem: bathymetry must be nonnegative");
  base_depth_ = beta_.map([](double b) { return 1.0 + b; });
  base_ratio_ = beta_ / base_depth_;
  grad_beta_ = gradient(beta_);
  grad_log_base_ = VectorField(grad_beta_[0] / base_depth_, grad_beta_[1] / base_depth_);
}

Field Problem::product(const Field& a, const Field& b) const { return dealias_ ? dealiased_product(a, b) : a * b; }

Field Problem::depth(const Field& eta) const {
  Field d = base_depth_ + eta;
  const double m = d.min();
  if (!(m > depth_epsilon())) {
    std::ostringstream os;
    os << "depth 1 + beta + eta reached " << m << " (floor " << depth_epsilon() << ")";
    throw DepthViolation(os.str());
  }
  return d;
}

// ---- principal part ----

SymTensorField viscous_stress(const VectorField& u) {
  const Spectrum s1 = forward(u[0]), s2 = forward(u[1]);
  const Field d11 = inverse(derivative(s1, 0));
  const Field d22 = inverse(derivative(s2, 1));
  Field off = inverse(derivative(s1, 1) + derivative(s2, 0));
  return {4.0 * d11 + 2.0 * d22, std::move(off), 4.0 * d22 + 2.0 * d11};
}

PairSpectrum apply_principal(const PairSpectrum& s, const Params& p) {
  const Grid& g = s.c[0].grid();
  PairSpectrum out{{Spectrum(g), Spectrum(g), Spectrum(g)}};
  const Complex I(0.0, 1.0);
  for (int i1 = 0; i1 < g.size(0); ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      const double k1 = g.dxi1(i1), k2 = g.dxi2(i2);
      const double q = g.xi1(i1) * g.xi1(i1) + g.xi2(i2) * g.xi2(i2);
      const Complex u1 = s.c[0](i1, i2), u2 = s.c[1](i1, i2), e = s.c[2](i1, i2);
      const Complex ku = k1 * u1 + k2 * u2;
      out.c[0](i1, i2) = I * ku;
      out.c[1](i1, i2) = (p.A + q) * u1 + 3.0 * k1 * ku + (p.G + q) * I * k1 * e;
      out.c[2](i1, i2) = (p.A + q) * u2 + 3.0 * k2 * ku + (p.G + q) * I * k2 * e;
    }
  out.c[0](0, 0) = 0.0;
  return out;
}

RhsPair apply_principal(const State& s, const Params& p) {
  return rhs_from_spectrum(apply_principal(to_spectrum(s), p));
}

PairSpectrum invert_principal(const PairSpectrum& r, const Params& p) {
  const Grid& g = r.c[0].grid();
  PairSpectrum out{{Spectrum(g), Spectrum(g), Spectrum(g)}};
  const Complex I(0.0, 1.0);
  for (int i1 = 0; i1 < g.size(0); ++i1) {
    if (g.nyquist1(i1)) continue;
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      if (g.nyquist2(i2)) continue;
      const Complex f1 = r.c[1](i1, i2), f2 = r.c[2](i1, i2);
      if (i1 == 0 && i2 == 0) {
        out.c[0](0, 0) = f1 / p.A;
        out.c[1](0, 0) = f2 / p.A;
        continue;
      }
      const double k1 = g.xi1(i1), k2 = g.xi2(i2);
      const double q = k1 * k1 + k2 * k2;
      const Complex gg = r.c[0](i1, i2);
      const Complex e = (I * (k1 * f1 + k2 * f2) - (p.A + 4.0 * q) * gg) / (-(p.G + q) * q);
      out.c[2](i1, i2) = e;
      const double inv = 1.0 / (p.A + q);
      out.c[0](i1, i2) = (f1 + 3.0 * I * k1 * gg - (p.G + q) * I * k1 * e) * inv;
      out.c[1](i1, i2) = (f2 + 3.0 * I * k2 * gg - (p.G + q) * I * k2 * e) * inv;
    }
  }
  return out;
}

State invert_principal(const RhsPair& r, const Params& p) {
  return state_from_spectrum(invert_principal(to_spectrum(r), p));
}

// ---- lower-order parts ----

namespace {

// S u w for a stress tensor and a vector field, each product dealiased per the problem.
VectorField stress_times(const SymTensorField& S, const VectorField& w, const Problem& prob) {
  return {prob.product(S.xx, w[0]) + prob.product(S.xy, w[1]), prob.product(S.xy, w[0]) + prob.product(S.yy, w[1])};
}

Field dot(const VectorField& u, const VectorField& w, const Problem& prob) {
  return prob.product(u[0], w[0]) + prob.product(u[1], w[1]);
}

}  // namespace

RhsPair apply_bathymetric_remainder(const State& s, const Problem& prob) {
  const Params& p = prob.params();
  const VectorField& gl = prob.grad_log_base();
  Field scalar = project_mean_zero(dot(s.u, gl, prob));
  const VectorField Sw = stress_times(viscous_stress(s.u), gl, prob);
  VectorField vec(-p.A * prob.product(prob.base_ratio(), s.u[0]) - Sw[0],
                  -p.A * prob.product(prob.base_ratio(), s.u[1]) - Sw[1]);
  return {std::move(scalar), std::move(vec)};
}

RhsPair apply_nonlinearity(const State& s, const Problem& prob) {
  const Params& p = prob.params();
  const Field d = prob.depth(s.eta);
  const Field& b1 = prob.base_depth();
  const VectorField ge = gradient(s.eta);
  const VectorField& gb = prob.grad_beta();
  // grad log(1 + eta/(1+beta)) without forming the logarithm.
  const Field den = b1 * d;
  const VectorField w((b1 * ge[0] - s.eta * gb[0]) / den, (b1 * ge[1] - s.eta * gb[1]) / den);
  const Field c = s.eta / den;

  Field scalar = project_mean_zero(dot(s.u, w, prob));
  const VectorField Sw = stress_times(viscous_stress(s.u), w, prob);
  const VectorField g1 = gradient(s.u[0]), g2 = gradient(s.u[1]);
  VectorField vec(dot(s.u, g1, prob) - p.A * prob.product(s.u[0], c) - Sw[0],
                  dot(s.u, g2, prob) - p.A * prob.product(s.u[1], c) - Sw[1]);
  return {std::move(scalar), std::move(vec)};
}

VectorField forcing_map(const Field& eta, const Problem& prob) {
  const Field d = prob.depth(eta);
  ForcingData data = eval_forcing_data(prob.forcing(), eta, prob.beta());
  VectorField num = std::move(data.phi);
  if (prob.forcing().psi_kind != ForcingSpec::ScalarKind::zero) num += gradient(prob.product(d, data.psi));
  if (prob.forcing().tau_kind != ForcingSpec::TensorKind::zero) num += stress_times(data.tau, gradient(eta), prob);
  return {num[0] / d, num[1] / d};
}

RhsPair residual_full(const State& s, double kappa, const Problem& prob) {
  RhsPair r = apply_principal(s, prob.params());
  const RhsPair l = apply_bathymetric_remainder(s, prob);
  const RhsPair n = apply_nonlinearity(s, prob);
  r.axpy(1.0, l);
  r.axpy(1.0, n);
  if (kappa != 0) r.phi.axpy(-kappa, forcing_map(s.eta, prob));
  return r;
}

RhsPair residual_direct(const State& s, double kappa, const Problem& prob) {
  const Params& p = prob.params();
  const Field d = prob.depth(s.eta);
  const VectorField gs = gradient(prob.beta() + s.eta);
  const VectorField gld(gs[0] / d, gs[1] / d);
  const Field inv_d = d.map([](double v) { return 1.0 / v; });

  Field scalar = divergence(s.u) + project_mean_zero(dot(s.u, gld, prob));

  const SymTensorField S = viscous_stress(s.u);
  const Field div_s1 = derivative(S.xx, 0) + derivative(S.xy, 1);
  const Field div_s2 = derivative(S.xy, 0) + derivative(S.yy, 1);
  const Field h = p.G * s.eta - laplacian(s.eta);
  const VectorField gh = gradient(h);
  const VectorField Sw = stress_times(S, gld, prob);
  const VectorField g1 = gradient(s.u[0]), g2 = gradient(s.u[1]);
  VectorField vec(dot(s.u, g1, prob) + p.A * prob.product(s.u[0], inv_d) - div_s1 - Sw[0] + gh[0],
                  dot(s.u, g2, prob) + p.A * prob.product(s.u[1], inv_d) - div_s2 - Sw[1] + gh[1]);
  if (kappa != 0) vec.axpy(-kappa, forcing_map(s.eta, prob));
  return {std::move(scalar), std::move(vec)};
}

// ---- linear solve and fixed-point map ----

PairSpectrum solve_linear(const PairSpectrum& r, const Problem& prob, const KrylovSettings& settings,
                          KrylovStats* stats) {
  const Params& p = prob.params();
  PairSpectrum rhs = r;
  strip_nyquist(rhs);
  rhs.c[0](0, 0) = 0.0;
  auto op = [&](const PairSpectrum& y) {
    const PairSpectrum x = invert_principal(y, p);
    PairSpectrum ly = to_spectrum(apply_bathymetric_remainder(state_from_spectrum(x), prob));
    strip_nyquist(ly);
    ly.axpy(1.0, y);
    return ly;
  };
  const Grid& g = prob.grid();
  PairSpectrum y{{Spectrum(g), Spectrum(g), Spectrum(g)}};
  const KrylovStats st = gmres(op, rhs, y, rhs_inner, settings);
  if (stats) *stats = st;
  if (!st.converged) {
    std::ostringstream os;
    os << "solve_linear: relative residual " << st.residual << " above " << settings.tolerance << " after "
       << st.iterations << " Krylov iterations";
    throw LinearSolveFailure(os.str(), st.iterations, st.history);
  }
  return invert_principal(y, p);
}

State solve_linear(const RhsPair& r, const Problem& prob, const KrylovSettings& settings, KrylovStats* stats) {
  return state_from_spectrum(solve_linear(to_spectrum(r), prob, settings, stats));
}

double linear_residual(const State& x, const RhsPair& r, const Problem& prob) {
  PairSpectrum res = to_spectrum(apply_principal(x, prob.params()));
  res.axpy(1.0, to_spectrum(apply_bathymetric_remainder(x, prob)));
  res.axpy(-1.0, to_spectrum(r));
  strip_nyquist(res);
  res.c[0](0, 0) = 0.0;
  return std::sqrt(rhs_inner(res, res));
}

State apply_K(const State& s, double kappa, const Problem& prob, const KrylovSettings& settings) {
  RhsPair rhs = apply_nonlinearity(s, prob);
  if (kappa != 0) rhs.phi.axpy(-kappa, forcing_map(s.eta, prob));
  return solve_linear(rhs, prob, settings);
}

}  // namespace stillwater
