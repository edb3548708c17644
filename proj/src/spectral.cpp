#include "stillwater/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace stillwater {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// Plans are created once per shape and executed through the new-array
// interface, which FFTW allows concurrently.
const Plans& plans_for(int n1, int n2) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({n1, n2});
  if (it != cache.end()) return it->second;
  std::vector<double> real(static_cast<std::size_t>(n1) * n2);
  std::vector<fftw_complex> cplx(static_cast<std::size_t>(n1) * (n2 / 2 + 1));
  Plans p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.r2c = fftw_plan_dft_r2c_2d(n1, n2, real.data(), cplx.data(), flags);
  p.c2r = fftw_plan_dft_c2r_2d(n1, n2, cplx.data(), real.data(), flags | FFTW_DESTROY_INPUT);
  return cache.emplace(std::pair{n1, n2}, p).first->second;
}

void require_finite(std::span<const double> s, const char* where) {
  for (double v : s)
    if (!std::isfinite(v)) throw NonFiniteValue(std::string(where) + ": samples must be finite");
}

double weight(double q, int s) {
  if (s == 0) return 1.0;
  return std::pow(1.0 + q, s);
}

void check_conjugate_symmetry(const Grid& g, const Symbol& m, SymbolKind kind) {
  // A spread of modes along both axes and the diagonal.
  const int n1 = g.size(0), n2 = g.size(1);
  for (int t = 1; t <= 8; ++t) {
    const int k1s[] = {t % (n1 / 2), 0, t % (n1 / 2), -(t % (n1 / 2))};
    const int k2s[] = {0, t % (n2 / 2), (2 * t) % (n2 / 2), t % (n2 / 2)};
    for (int c = 0; c < 4; ++c) {
      if (k1s[c] == 0 && k2s[c] == 0) continue;
      const double x1 = 2 * std::numbers::pi * k1s[c] / g.length(0);
      const double x2 = 2 * std::numbers::pi * k2s[c] / g.length(1);
      const Complex a = m(x1, x2);
      const Complex b = m(-x1, -x2);
      const double scale = std::max(std::abs(a), std::abs(b));
      if (std::abs(b - std::conj(a)) > 1e-12 * scale)
        throw NonRealSymbol("apply_fourier_multiplier: symbol violates m(-xi) = conj(m(xi))");
    }
  }
  if (kind == SymbolKind::regular) {
    const Complex z = m(0.0, 0.0);
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z)))
      throw NonRealSymbol("apply_fourier_multiplier: symbol is not real at the zero mode");
  }
}

}  // namespace

Grid::Grid(double length1, double length2, int size1, int size2)
    : length_{length1, length2}, size_{size1, size2} {
  if (!(length1 > 0) || !(length2 > 0) || !std::isfinite(length1) || !std::isfinite(length2))
    throw BadSpec("Grid: periods must be positive and finite");
  if (size1 < 8 || size2 < 8 || size1 % 2 != 0 || size2 % 2 != 0)
    throw BadSpec("Grid: resolutions must be even and at least 8");
  auto t = std::make_shared<Tables>();
  const double two_pi = 2 * std::numbers::pi;
  t->xi1.resize(size1);
  t->dxi1.resize(size1);
  t->band1.resize(size1);
  for (int i = 0; i < size1; ++i) {
    const int k = mode1(i);
    t->xi1[i] = two_pi * k / length1;
    t->dxi1[i] = (i == size1 / 2) ? 0.0 : t->xi1[i];
    t->band1[i] = 3 * std::abs(k) <= size1;
  }
  const int cols = size2 / 2 + 1;
  t->xi2.resize(cols);
  t->dxi2.resize(cols);
  t->band2.resize(cols);
  for (int i = 0; i < cols; ++i) {
    t->xi2[i] = two_pi * i / length2;
    t->dxi2[i] = (i == size2 / 2) ? 0.0 : t->xi2[i];
    t->band2[i] = 3 * i <= size2;
  }
  tables_ = std::move(t);
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

// ---- Field ----

Field::Field(const Grid& grid) : grid_(grid), samples_(grid.num_points(), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> samples) : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.num_points()) throw GridMismatch("Field: sample count does not match grid");
  require_finite(samples_, "Field");
}

Field Field::constant(const Grid& grid, double value) {
  return Field(grid, std::vector<double>(grid.num_points(), value));
}

double Field::min() const { return *std::min_element(samples_.begin(), samples_.end()); }
double Field::max() const { return *std::max_element(samples_.begin(), samples_.end()); }

double Field::max_abs() const {
  double m = 0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Field::mean() const {
  double s = 0;
  for (double v : samples_) s += v;
  return s / static_cast<double>(samples_.size());
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field::operator+=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field::operator-=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : samples_) v *= a;
  return *this;
}

Field& Field::operator+=(double a) {
  for (double& v : samples_) v += a;
  return *this;
}

Field& Field::axpy(double a, const Field& x) {
  require_same_grid(grid_, x.grid_, "Field::axpy");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += a * x.samples_[i];
  return *this;
}

Field operator*(const Field& a, const Field& b) {
  require_same_grid(a.grid_, b.grid_, "Field product");
  Field out(a.grid_);
  for (std::size_t i = 0; i < out.samples_.size(); ++i) out.samples_[i] = a.samples_[i] * b.samples_[i];
  return out;
}

Field operator/(const Field& a, const Field& b) {
  require_same_grid(a.grid_, b.grid_, "Field quotient");
  Field out(a.grid_);
  for (std::size_t i = 0; i < out.samples_.size(); ++i) out.samples_[i] = a.samples_[i] / b.samples_[i];
  require_finite(out.samples_, "Field quotient");
  return out;
}

// ---- VectorField / SymTensorField ----

VectorField::VectorField(Field first, Field second) : comp_{std::move(first), std::move(second)} {
  require_same_grid(comp_[0].grid(), comp_[1].grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  comp_[0] += o.comp_[0];
  comp_[1] += o.comp_[1];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  comp_[0] -= o.comp_[0];
  comp_[1] -= o.comp_[1];
  return *this;
}

VectorField& VectorField::operator*=(double a) {
  comp_[0] *= a;
  comp_[1] *= a;
  return *this;
}

VectorField& VectorField::axpy(double a, const VectorField& x) {
  comp_[0].axpy(a, x.comp_[0]);
  comp_[1].axpy(a, x.comp_[1]);
  return *this;
}

VectorField SymTensorField::apply(const VectorField& v) const {
  return {xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]};
}

// ---- Spectrum ----

Spectrum::Spectrum(const Grid& grid) : grid_(grid), c_(grid.num_modes(), Complex(0.0, 0.0)) {}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  require_same_grid(grid_, o.grid_, "Spectrum::operator+=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  require_same_grid(grid_, o.grid_, "Spectrum::operator-=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double a) {
  for (auto& c : c_) c *= a;
  return *this;
}

Spectrum& Spectrum::axpy(double a, const Spectrum& x) {
  require_same_grid(grid_, x.grid_, "Spectrum::axpy");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * x.c_[i];
  return *this;
}

Spectrum forward(const Field& f) {
  const Grid& g = f.grid();
  Spectrum s(g);
  const Plans& p = plans_for(g.size(0), g.size(1));
  auto in = f.samples();
  // r2c does not modify its input; FFTW's signature is simply not const.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(s.coeffs().data()));
  s *= 1.0 / static_cast<double>(g.num_points());
  return s;
}

Field inverse(const Spectrum& s) {
  const Grid& g = s.grid();
  Field f(g);
  const Plans& p = plans_for(g.size(0), g.size(1));
  std::vector<Complex> scratch(s.coeffs().begin(), s.coeffs().end());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), f.raw().data());
  require_finite(f.samples(), "inverse transform");
  return f;
}

// ---- multipliers ----

Spectrum apply_fourier_multiplier(const Spectrum& f, const Symbol& m, SymbolKind kind) {
  const Grid& g = f.grid();
  check_conjugate_symmetry(g, m, kind);
  if (kind == SymbolKind::singular_at_zero) {
    const double mean_part = std::abs(f.mean()) * std::sqrt(g.area());
    if (mean_part > 1e-12 * norm_sobolev(f, 0))
      throw SingularMode("apply_fourier_multiplier: singular symbol applied to a field with nonzero mean");
  }
  Spectrum out(g);
  for (int i1 = 0; i1 < g.size(0); ++i1) {
    const double x1 = g.xi1(i1);
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      if (i1 == 0 && i2 == 0 && kind == SymbolKind::singular_at_zero) continue;
      const double x2 = g.xi2(i2);
      Complex mv;
      const bool n1 = g.nyquist1(i1), n2 = g.nyquist2(i2);
      if (n1 && n2)
        mv = 0.25 * (m(x1, x2) + m(-x1, x2) + m(x1, -x2) + m(-x1, -x2));
      else if (n1)
        mv = 0.5 * (m(x1, x2) + m(-x1, x2));
      else if (n2)
        mv = 0.5 * (m(x1, x2) + m(x1, -x2));
      else
        mv = m(x1, x2);
      out(i1, i2) = mv * f(i1, i2);
    }
  }
  return out;
}

Field apply_fourier_multiplier(const Field& f, const Symbol& m, SymbolKind kind) {
  return inverse(apply_fourier_multiplier(forward(f), m, kind));
}

Spectrum project_mean_zero(Spectrum s) {
  s.coeffs()[0] = Complex(0.0, 0.0);
  return s;
}

Field project_mean_zero(const Field& f) { return inverse(project_mean_zero(forward(f))); }

Spectrum dealias(Spectrum s) {
  const Grid& g = s.grid();
  for (int i1 = 0; i1 < g.size(0); ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2)
      if (!g.in_band(i1, i2)) s(i1, i2) = Complex(0.0, 0.0);
  return s;
}

Field dealias(const Field& f) { return inverse(dealias(forward(f))); }

Field dealiased_product(const Field& a, const Field& b) { return dealias(a * b); }

// ---- norms and quadrature ----

double sobolev_inner(const Spectrum& a, const Spectrum& b, int s) {
  const Grid& g = a.grid();
  require_same_grid(g, b.grid(), "sobolev_inner");
  double sum = 0;
  for (int i1 = 0; i1 < g.size(0); ++i1) {
    const double x1 = g.xi1(i1);
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      const double x2 = g.xi2(i2);
      const Complex p = a(i1, i2) * std::conj(b(i1, i2));
      sum += g.multiplicity(i2) * weight(x1 * x1 + x2 * x2, s) * p.real();
    }
  }
  return sum * g.area();
}

double norm_sobolev(const Spectrum& f, int s) { return std::sqrt(std::max(0.0, sobolev_inner(f, f, s))); }
double norm_sobolev(const Field& f, int s) { return norm_sobolev(forward(f), s); }

double norm_sobolev(const VectorField& v, int s) {
  return std::hypot(norm_sobolev(v[0], s), norm_sobolev(v[1], s));
}

double integrate(const Field& f) { return f.mean() * f.grid().area(); }

double l2_inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "l2_inner");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().area() / static_cast<double>(a.size());
}

double norm_l2(const Field& f) { return std::sqrt(l2_inner(f, f)); }
double norm_l2(const VectorField& v) { return std::hypot(norm_l2(v[0]), norm_l2(v[1])); }

// ---- calculus ----

Spectrum derivative(const Spectrum& s, int dim) {
  const Grid& g = s.grid();
  Spectrum out(g);
  for (int i1 = 0; i1 < g.size(0); ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      const double k = dim == 0 ? g.dxi1(i1) : g.dxi2(i2);
      out(i1, i2) = Complex(0.0, k) * s(i1, i2);
    }
  return out;
}

Field derivative(const Field& f, int dim) { return inverse(derivative(forward(f), dim)); }

VectorField gradient(const Field& f) {
  const Spectrum s = forward(f);
  return {inverse(derivative(s, 0)), inverse(derivative(s, 1))};
}

Field divergence(const VectorField& v) {
  return inverse(derivative(forward(v[0]), 0) + derivative(forward(v[1]), 1));
}

Field curl(const VectorField& v) {
  return inverse(derivative(forward(v[1]), 0) - derivative(forward(v[0]), 1));
}

Field laplacian(const Field& f) {
  Spectrum s = forward(f);
  const Grid& g = s.grid();
  for (int i1 = 0; i1 < g.size(0); ++i1)
    for (int i2 = 0; i2 < g.num_cols(); ++i2) {
      const double q = g.xi1(i1) * g.xi1(i1) + g.xi2(i2) * g.xi2(i2);
      s(i1, i2) *= -q;
    }
  return inverse(s);
}

Field resample(const Field& f, const Grid& target) {
  const Grid& g = f.grid();
  if (g.length(0) != target.length(0) || g.length(1) != target.length(1))
    throw GridMismatch("resample: periods differ");
  const Spectrum s = forward(f);
  Spectrum out(target);
  const int h1 = std::min(g.size(0), target.size(0)) / 2;
  const int h2 = std::min(g.size(1), target.size(1)) / 2;
  for (int k1 = -h1 + 1; k1 < h1; ++k1) {
    const int src = k1 >= 0 ? k1 : k1 + g.size(0);
    const int dst = k1 >= 0 ? k1 : k1 + target.size(0);
    for (int k2 = 0; k2 < h2; ++k2) out(dst, k2) = s(src, k2);
  }
  return inverse(out);
}

}  // namespace stillwater
