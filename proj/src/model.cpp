#include "stillwater/model.hpp"

#include <cmath>
#include <sstream>

namespace stillwater {

void Params::validate() const {
  if (!(A > 0) || !std::isfinite(A)) throw BadSpec("Params: A must be positive");
  if (!(G >= 0) || !std::isfinite(G)) throw BadSpec("Params: G must be nonnegative");
  if (!std::isfinite(kappa)) throw BadSpec("Params: kappa must be finite");
  if (!(L[0] > 0) || !(L[1] > 0)) throw BadSpec("Params: periods must be positive");
}

double Nondimensionalization::kappa(double kappa_hat) const {
  return kappa_hat * std::pow(mu, 4) / std::pow(sigma, 3);
}

Nondimensionalization nondimensionalize(const DimensionalParams& d) {
  if (!(d.mu > 0)) throw NonPositiveScale("nondimensionalize: mu must be positive");
  if (!(d.sigma > 0)) throw NonPositiveScale("nondimensionalize: sigma must be positive");
  if (!(d.H > 0)) throw NonPositiveScale("nondimensionalize: H must be positive");
  if (!(d.alpha > 0)) throw BadSpec("nondimensionalize: alpha must be positive");
  if (!(d.g >= 0)) throw BadSpec("nondimensionalize: g must be nonnegative");
  Nondimensionalization n{};
  n.mu = d.mu;
  n.sigma = d.sigma;
  n.length_scale = d.mu * d.mu / d.sigma;
  n.time_scale = d.mu * d.mu * d.mu / (d.sigma * d.sigma);
  n.A = d.alpha * n.time_scale / d.H;
  n.G = d.g * d.H * d.mu * d.mu / (d.sigma * d.sigma);
  return n;
}

ForcingSpec ForcingSpec::gravity(std::array<double, 2> nu) {
  ForcingSpec s;
  s.phi_kind = VectorKind::gravity_affine;
  s.nu = nu;
  return s;
}

ForcingSpec ForcingSpec::constant(std::array<double, 2> nu) {
  ForcingSpec s;
  s.phi_kind = VectorKind::constant;
  s.nu = nu;
  return s;
}

ForcingSpec ForcingSpec::pressure(Field p) {
  ForcingSpec s;
  s.psi_kind = ScalarKind::polynomial;
  s.psi_coeffs.push_back(std::move(p));
  return s;
}

void ForcingSpec::validate(const Grid& grid) const {
  auto degree_ok = [&](std::size_t n, const char* name) {
    if (n > static_cast<std::size_t>(max_degree) + 1) {
      std::ostringstream os;
      os << "ForcingSpec: " << name << " degree exceeds " << max_degree;
      throw BadSpec(os.str());
    }
  };
  degree_ok(phi_coeffs.size(), "phi");
  degree_ok(psi_coeffs.size(), "psi");
  degree_ok(tau_coeffs.size(), "tau");
  for (const auto& c : phi_coeffs)
    if (!(c.grid() == grid)) throw BadSpec("ForcingSpec: phi coefficient on the wrong grid");
  for (const auto& c : psi_coeffs)
    if (!(c.grid() == grid)) throw BadSpec("ForcingSpec: psi coefficient on the wrong grid");
  for (const auto& c : tau_coeffs)
    if (!(c.xx.grid() == grid) || !(c.xy.grid() == grid) || !(c.yy.grid() == grid))
      throw BadSpec("ForcingSpec: tau coefficient on the wrong grid");
  if (!std::isfinite(nu[0]) || !std::isfinite(nu[1])) throw BadSpec("ForcingSpec: nu must be finite");
  if (!(depth_epsilon > 0)) throw BadSpec("ForcingSpec: depth_epsilon must be positive");
}

namespace {

SymTensorField& operator+=(SymTensorField& a, const SymTensorField& b) {
  a.xx += b.xx;
  a.xy += b.xy;
  a.yy += b.yy;
  return a;
}

// Horner recurrence sum_j c_j y^j with the product dealiased at every stage.
template <class T, class Mul>
T horner(const std::vector<T>& c, const Field& y, Mul mul) {
  T acc = c.back();
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    acc = mul(acc, y);
    acc += c[j];
  }
  return acc;
}

}  // namespace

ForcingData eval_forcing_data(const ForcingSpec& spec, const Field& eta, const Field& beta) {
  const Grid& g = eta.grid();
  require_same_grid(g, beta.grid(), "eval_forcing_data");
  const double lo = -1.0 - beta.max() + spec.depth_epsilon;
  for (double y : eta.samples())
    if (!(y > lo) || !(y <= spec.y_max)) {
      std::ostringstream os;
      os << "eval_forcing_data: free-surface value " << y << " outside working range (" << lo << ", "
         << spec.y_max << "]";
      throw RangeViolation(os.str());
    }

  VectorField phi = VectorField::zeros(g);
  switch (spec.phi_kind) {
    case ForcingSpec::VectorKind::zero:
      break;
    case ForcingSpec::VectorKind::constant:
      phi = VectorField::constant(g, spec.nu[0], spec.nu[1]);
      break;
    case ForcingSpec::VectorKind::gravity_affine: {
      Field depth = eta + beta;
      depth += 1.0;
      phi = VectorField(depth * spec.nu[0], depth * spec.nu[1]);
      break;
    }
    case ForcingSpec::VectorKind::polynomial:
      if (!spec.phi_coeffs.empty())
        phi = horner(spec.phi_coeffs, eta, [](const VectorField& a, const Field& y) {
          return VectorField(dealiased_product(a[0], y), dealiased_product(a[1], y));
        });
      break;
  }

  Field psi(g);
  if (spec.psi_kind == ForcingSpec::ScalarKind::polynomial && !spec.psi_coeffs.empty())
    psi = horner(spec.psi_coeffs, eta, [](const Field& a, const Field& y) { return dealiased_product(a, y); });

  SymTensorField tau{Field(g), Field(g), Field(g)};
  if (spec.tau_kind == ForcingSpec::TensorKind::polynomial && !spec.tau_coeffs.empty())
    tau = horner(spec.tau_coeffs, eta, [](const SymTensorField& a, const Field& y) {
      return SymTensorField{dealiased_product(a.xx, y), dealiased_product(a.xy, y), dealiased_product(a.yy, y)};
    });

  return {std::move(phi), std::move(psi), std::move(tau)};
}

}  // namespace stillwater
