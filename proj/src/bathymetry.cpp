#include <algorithm>
#include <cmath>

#include "stillwater/io.hpp"
#include "stillwater/model.hpp"
#include "stillwater/random.hpp"

namespace stillwater {

namespace {

constexpr int kReferenceSize = 1024;

double wrap(double d, double period) {
  d = std::fmod(d, period);
  if (d >= period / 2) d -= period;
  if (d < -period / 2) d += period;
  return d;
}

// Shift so the smallest sample is exactly zero and scale the largest to amplitude.
Field normalize(const Field& raw, double amplitude) {
  const double lo = raw.min(), hi = raw.max();
  if (amplitude == 0) return Field(raw.grid());
  if (!(hi > lo)) throw BadSpec("make_bathymetry: generated relief is constant, cannot normalize");
  const double scale = amplitude / (hi - lo);
  return raw.map([&](double v) { return (v - lo) * scale; });
}

Field half_ellipse(const BathymetrySpec& spec, const Grid& grid) {
  const Grid ref(grid.length(0), grid.length(1), std::max(kReferenceSize, grid.size(0)),
                 std::max(kReferenceSize, grid.size(1)));
  const std::array<double, 2> c =
      spec.center.value_or(std::array<double, 2>{grid.length(0) / 2, grid.length(1) / 2});
  const Field raw = Field::from_function(ref, [&](double x1, double x2) {
    const double d1 = wrap(x1 - c[0], grid.length(0)) / spec.semi_axes[0];
    const double d2 = wrap(x2 - c[1], grid.length(1)) / spec.semi_axes[1];
    const double h = std::sqrt(std::max(0.0, 1.0 - d1 * d1 - d2 * d2));
    return spec.invert ? -h : h;
  });
  Spectrum s = forward(raw);
  const double kc2 = spec.cutoff * spec.cutoff;
  for (int i1 = 0; i1 < ref.size(0); ++i1) {
    const double k1 = ref.mode1(i1);
    for (int i2 = 0; i2 < ref.num_cols(); ++i2) {
      const double k2 = i2;
      s(i1, i2) *= std::exp(-(k1 * k1 + k2 * k2) / kc2);
    }
  }
  return normalize(resample(inverse(s), grid), spec.amplitude);
}

Field random_relief(const BathymetrySpec& spec, const Grid& grid) {
  Rng rng(spec.seed);
  return normalize(random_field(grid, rng, spec.max_mode, spec.decay), spec.amplitude);
}

}  // namespace

void BathymetrySpec::validate() const {
  if (!(amplitude >= 0) || !std::isfinite(amplitude)) throw BadSpec("BathymetrySpec: amplitude must be >= 0");
  if (kind == Kind::half_ellipse) {
    if (!(semi_axes[0] > 0) || !(semi_axes[1] > 0))
      throw BadSpec("BathymetrySpec: semi_axes must be positive");
    if (std::isinf(semi_axes[0]) && std::isinf(semi_axes[1]))
      throw BadSpec("BathymetrySpec: at most one semi-axis may be infinite");
    if (!(cutoff > 0)) throw BadSpec("BathymetrySpec: cutoff must be positive");
    if (center && (!std::isfinite((*center)[0]) || !std::isfinite((*center)[1])))
      throw BadSpec("BathymetrySpec: center must be finite");
  }
  if (kind == Kind::random) {
    if (!(decay >= 2)) throw BadSpec("BathymetrySpec: spectral decay exponent must be >= 2");
    if (max_mode < 1) throw BadSpec("BathymetrySpec: max_mode must be >= 1");
  }
  if (kind == Kind::samples && path.empty()) throw BadSpec("BathymetrySpec: samples kind needs a path");
}

Field make_bathymetry(const BathymetrySpec& spec, const Grid& grid) {
  spec.validate();
  switch (spec.kind) {
    case BathymetrySpec::Kind::flat:
      return Field(grid);
    case BathymetrySpec::Kind::half_ellipse:
      return half_ellipse(spec, grid);
    case BathymetrySpec::Kind::random:
      return random_relief(spec, grid);
    case BathymetrySpec::Kind::samples: {
      FieldFile file = [&] {
        try {
          return read_field_file(spec.path);
        } catch (const FormatError& e) {
          throw BadSpec(std::string("make_bathymetry: ") + e.what());
        }
      }();
      if (!(file.grid == grid)) throw BadSpec("make_bathymetry: sample file grid differs from the working grid");
      if (!file.has("beta")) throw BadSpec("make_bathymetry: sample file has no field named \"beta\"");
      const Field& b = file.get("beta");
      const double lo = b.min();
      return b.map([&](double v) { return v - lo; });
    }
  }
  throw BadSpec("make_bathymetry: unknown kind");
}

}  // namespace stillwater
