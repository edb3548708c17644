#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stillwater/spectral.hpp"

namespace stillwater {

/// Physical coefficients of the viscous shallow water model.
struct DimensionalParams {
  double alpha = 1;  // laminar drag
  double g = 1;      // gravity
  double mu = 1;     // viscosity
  double sigma = 1;  // surface tension
  double H = 1;      // equilibrium depth
};

/// Nondimensional constants of the stationary problem.
struct Params {
  double A = 1;  // inverse slip coefficient
  double G = 1;  // capillary number
  double kappa = 0;
  std::array<double, 2> L{1, 1};

  /// Throws BadSpec unless A > 0, G >= 0 and both periods are positive.
  void validate() const;
};

struct Nondimensionalization {
  double A;
  double G;
  double length_scale;  // mu^2 / sigma
  double time_scale;    // mu^3 / sigma^2
  double mu;
  double sigma;

  /// kappa = kappa_hat mu^4 / sigma^3
  [[nodiscard]] double kappa(double kappa_hat) const;
};

/// A = alpha T / H, G = g H mu^2 / sigma^2 with T = mu^3 / sigma^2.
/// Throws NonPositiveScale if mu, sigma or H is not positive, BadSpec if
/// alpha <= 0 or g < 0.
Nondimensionalization nondimensionalize(const DimensionalParams& d);

/// Bottom relief beta >= 0 with min beta = 0.
struct BathymetrySpec {
  enum class Kind { flat, half_ellipse, random, samples };
  Kind kind = Kind::flat;
  double amplitude = 0;

  // half_ellipse: a sqrt(1 - q) with q the scaled quadratic form about the
  // center, smoothed by exp(-(|k|/cutoff)^2) in integer wavenumber units.
  // Semi-axes may be infinite, which gives a ridge depending on one coordinate.
  std::optional<std::array<double, 2>> center;  // default: middle of the domain
  std::array<double, 2> semi_axes{0.25, 0.25};
  double cutoff = 4;
  // Use the complement amplitude - bump, i.e. a submerged mound whose top is
  // the shallowest point.
  bool invert = false;

  // random: Gaussian coefficients with standard deviation (1 + |k|)^(-decay)
  // for |k1|, |k2| <= max_mode.
  std::uint64_t seed = 0;
  double decay = 2;
  int max_mode = 8;

  // samples: SWF1 file containing a field named "beta".
  std::string path;

  void validate() const;
};

/// Deterministic for a given (spec, grid). Throws BadSpec.
Field make_bathymetry(const BathymetrySpec& spec, const Grid& grid);

/// Forcing data (phi, psi, tau) as functions of position and the free-surface
/// value y. Polynomial kinds hold Field coefficients g_j for sum_j g_j(x) y^j.
struct ForcingSpec {
  enum class VectorKind { zero, constant, gravity_affine, polynomial };
  enum class ScalarKind { zero, polynomial };
  enum class TensorKind { zero, polynomial };

  VectorKind phi_kind = VectorKind::zero;
  std::array<double, 2> nu{1, 0};  // constant and gravity_affine direction
  std::vector<VectorField> phi_coeffs;
  ScalarKind psi_kind = ScalarKind::zero;
  std::vector<Field> psi_coeffs;
  TensorKind tau_kind = TensorKind::zero;
  std::vector<SymTensorField> tau_coeffs;

  double y_max = std::numeric_limits<double>::infinity();
  double depth_epsilon = 1e-6;
  int max_degree = 16;

  /// phi = (1 + beta + y) nu
  static ForcingSpec gravity(std::array<double, 2> nu);
  static ForcingSpec constant(std::array<double, 2> nu);
  /// psi = p(x)
  static ForcingSpec pressure(Field p);

  /// Throws BadSpec on degree overflow or coefficients on the wrong grid.
  void validate(const Grid& grid) const;
};

struct ForcingData {
  VectorField phi;
  Field psi;
  SymTensorField tau;
};

/// Samplewise evaluation at y = eta(x). Throws RangeViolation if eta leaves
/// (-1 - max beta + depth_epsilon, y_max].
ForcingData eval_forcing_data(const ForcingSpec& spec, const Field& eta, const Field& beta);

}  // namespace stillwater
