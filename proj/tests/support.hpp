#pragma once

#include <cmath>
#include <numbers>

#include "stillwater/operators.hpp"
#include "stillwater/random.hpp"

namespace testing_support {

using namespace stillwater;

inline constexpr double pi = std::numbers::pi;

inline double max_diff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double state_gap(const State& a, const State& b) {
  State d = a;
  d.axpy(-1.0, b);
  return state_norm(d);
}

inline double l2_pair(const RhsPair& r) { return std::hypot(norm_l2(r.g), norm_l2(r.phi)); }

inline State random_state(const Grid& g, Rng& rng, int K, double u_scale, double eta_max) {
  State s{VectorField(random_field(g, rng, K), random_field(g, rng, K)), random_field(g, rng, K)};
  s.u[0] *= u_scale / std::max(1e-300, s.u[0].max_abs());
  s.u[1] *= u_scale / std::max(1e-300, s.u[1].max_abs());
  s.eta *= eta_max / std::max(1e-300, s.eta.max_abs());
  return s;
}

inline RhsPair random_rhs(const Grid& g, Rng& rng, int K) {
  VectorField phi(random_field(g, rng, K), random_field(g, rng, K));
  phi[0] += rng.uniform(-1, 1);
  phi[1] += rng.uniform(-1, 1);
  return {random_field(g, rng, K), std::move(phi)};
}

}  // namespace testing_support
