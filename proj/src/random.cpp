#include "stillwater/random.hpp"

#include <cmath>
#include <numbers>

namespace stillwater {

std::pair<double, double> Rng::gaussian_pair() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

Field random_field(const Grid& grid, Rng& rng, int max_mode, double decay) {
  const int K = max_mode;
  if (K < 0 || 2 * K >= grid.size(0) || 2 * K >= grid.size(1))
    throw BadSpec("random_field: max_mode must be below the grid Nyquist mode");
  Spectrum s(grid);
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = 0; k2 <= K; ++k2) {
      if (k2 == 0 && k1 <= 0) continue;
      const double sd = std::pow(1.0 + std::hypot(k1, k2), -decay);
      const auto [re, im] = rng.gaussian_pair();
      const Complex c(sd * re, sd * im);
      const int i1 = k1 >= 0 ? k1 : k1 + grid.size(0);
      s(i1, k2) = c;
      if (k2 == 0) s(grid.size(0) - k1, 0) = std::conj(c);
    }
  return inverse(s);
}

}  // namespace stillwater
