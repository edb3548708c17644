#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "stillwater/spectral.hpp"

namespace stillwater {

/// mt19937_64 with hand-rolled uniform and normal draws so that sequences are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> gaussian_pair();

 private:
  std::mt19937_64 engine_;
};

/// Real mean-zero field whose modes |k1|, |k2| <= max_mode (integer indices)
/// carry Gaussian coefficients of standard deviation (1 + |k|)^(-decay).
/// Throws BadSpec if 2 max_mode reaches the grid Nyquist index.
Field random_field(const Grid& grid, Rng& rng, int max_mode, double decay = 2);

}  // namespace stillwater
