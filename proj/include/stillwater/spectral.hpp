#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "stillwater/errors.hpp"

namespace stillwater {

using Complex = std::complex<double>;

/// Uniform periodic grid on the torus [0, L1) x [0, L2).
///
/// Samples are stored row-major with the second index fastest. Spectral
/// coefficients use the real-to-complex half layout: N1 rows (signed index
/// k1 in [-N1/2, N1/2)) by N2/2 + 1 columns (k2 in [0, N2/2]).
class Grid {
 public:
  Grid(double length1, double length2, int size1, int size2);

  [[nodiscard]] double length(int dim) const { return length_[dim]; }
  [[nodiscard]] int size(int dim) const { return size_[dim]; }
  [[nodiscard]] std::size_t num_points() const {
    return static_cast<std::size_t>(size_[0]) * static_cast<std::size_t>(size_[1]);
  }
  [[nodiscard]] int num_cols() const { return size_[1] / 2 + 1; }
  [[nodiscard]] std::size_t num_modes() const {
    return static_cast<std::size_t>(size_[0]) * static_cast<std::size_t>(num_cols());
  }
  [[nodiscard]] double area() const { return length_[0] * length_[1]; }
  [[nodiscard]] double spacing(int dim) const { return length_[dim] / size_[dim]; }
  [[nodiscard]] double coordinate(int dim, int j) const { return j * spacing(dim); }

  /// Signed integer wavenumber of storage row i1 / column i2.
  [[nodiscard]] int mode1(int i1) const { return i1 < size_[0] / 2 ? i1 : i1 - size_[0]; }
  [[nodiscard]] int mode2(int i2) const { return i2; }

  /// Physical wavenumber 2 pi k / L of a storage row / column.
  [[nodiscard]] double xi1(int i1) const { return tables_->xi1[i1]; }
  [[nodiscard]] double xi2(int i2) const { return tables_->xi2[i2]; }
  /// Wavenumber used by odd (derivative) symbols: zero on the Nyquist mode.
  [[nodiscard]] double dxi1(int i1) const { return tables_->dxi1[i1]; }
  [[nodiscard]] double dxi2(int i2) const { return tables_->dxi2[i2]; }
  [[nodiscard]] bool nyquist1(int i1) const { return i1 == size_[0] / 2; }
  [[nodiscard]] bool nyquist2(int i2) const { return i2 == size_[1] / 2; }
  /// 2/3-rule pass band: |k1| <= N1/3 and |k2| <= N2/3.
  [[nodiscard]] bool in_band(int i1, int i2) const { return tables_->band1[i1] && tables_->band2[i2]; }
  /// Number of conjugate copies a stored coefficient stands for in a full sum.
  [[nodiscard]] double multiplicity(int i2) const {
    return (i2 == 0 || i2 == size_[1] / 2) ? 1.0 : 2.0;
  }

  [[nodiscard]] std::size_t point_index(int j1, int j2) const {
    return static_cast<std::size_t>(j1) * static_cast<std::size_t>(size_[1]) + static_cast<std::size_t>(j2);
  }
  [[nodiscard]] std::size_t mode_index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * static_cast<std::size_t>(num_cols()) + static_cast<std::size_t>(i2);
  }

  bool operator==(const Grid& other) const { return length_ == other.length_ && size_ == other.size_; }

 private:
  struct Tables {
    std::vector<double> xi1, xi2, dxi1, dxi2;
    std::vector<bool> band1, band2;
  };
  std::array<double, 2> length_;
  std::array<int, 2> size_;
  std::shared_ptr<const Tables> tables_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

class Spectrum;

/// Real samples on a Grid. Value type; operations return new fields.
class Field {
 public:
  explicit Field(const Grid& grid);
  /// Throws NonFiniteValue if any sample is NaN or infinite.
  Field(const Grid& grid, std::vector<double> samples);

  static Field constant(const Grid& grid, double value);
  template <class Fn>
  static Field from_function(const Grid& grid, Fn&& fn) {
    std::vector<double> s(grid.num_points());
    for (int j1 = 0; j1 < grid.size(0); ++j1)
      for (int j2 = 0; j2 < grid.size(1); ++j2)
        s[grid.point_index(j1, j2)] = fn(grid.coordinate(0, j1), grid.coordinate(1, j2));
    return Field(grid, std::move(s));
  }

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::span<const double> samples() const { return samples_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double operator()(int j1, int j2) const { return samples_[grid_.point_index(j1, j2)]; }

  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;
  [[nodiscard]] double max_abs() const;
  /// Average over the torus (trapezoid rule).
  [[nodiscard]] double mean() const;

  /// Samplewise map.
  template <class Fn>
  [[nodiscard]] Field map(Fn&& fn) const {
    Field out(grid_);
    for (std::size_t i = 0; i < samples_.size(); ++i) out.samples_[i] = fn(samples_[i]);
    return out;
  }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);
  Field& operator+=(double a);
  /// y += a * x
  Field& axpy(double a, const Field& x);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator-(Field a) { return a *= -1.0; }
  /// Samplewise (aliasing) product; see dealiased_product.
  friend Field operator*(const Field& a, const Field& b);
  /// Samplewise quotient.
  friend Field operator/(const Field& a, const Field& b);

 private:
  friend class Spectrum;
  friend Field inverse(const Spectrum&);
  std::vector<double>& raw() { return samples_; }

  Grid grid_;
  std::vector<double> samples_;
};

/// Two scalar fields on a shared grid.
class VectorField {
 public:
  VectorField(Field first, Field second);
  static VectorField zeros(const Grid& grid) { return {Field(grid), Field(grid)}; }
  static VectorField constant(const Grid& grid, double c1, double c2) {
    return {Field::constant(grid, c1), Field::constant(grid, c2)};
  }

  [[nodiscard]] const Grid& grid() const { return comp_[0].grid(); }
  const Field& operator[](int i) const { return comp_[i]; }
  Field& operator[](int i) { return comp_[i]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);
  VectorField& axpy(double a, const VectorField& x);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }

 private:
  std::array<Field, 2> comp_;
};

/// Symmetric 2x2 tensor field, stored as (xx, xy, yy).
struct SymTensorField {
  Field xx, xy, yy;
  /// Matrix-vector product S v, samplewise.
  [[nodiscard]] VectorField apply(const VectorField& v) const;
};

/// Spectral coefficients in the half layout, normalized so that
/// f(x) = sum_k c_k exp(i xi_k . x).
class Spectrum {
 public:
  explicit Spectrum(const Grid& grid);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::span<const Complex> coeffs() const { return c_; }
  [[nodiscard]] std::span<Complex> coeffs() { return c_; }
  Complex& operator()(int i1, int i2) { return c_[grid_.mode_index(i1, i2)]; }
  const Complex& operator()(int i1, int i2) const { return c_[grid_.mode_index(i1, i2)]; }
  [[nodiscard]] Complex mean() const { return c_[0]; }

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(double a);
  Spectrum& axpy(double a, const Spectrum& x);
  friend Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
  friend Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
  friend Spectrum operator*(double s, Spectrum a) { return a *= s; }

 private:
  Grid grid_;
  std::vector<Complex> c_;
};

Spectrum forward(const Field& f);
Field inverse(const Spectrum& s);

/// Fourier symbol m(xi1, xi2).
using Symbol = std::function<Complex(double, double)>;

enum class SymbolKind { regular, singular_at_zero };

/// Multiplies every coefficient by m(xi_k). On Nyquist modes the symbol is
/// averaged over the sign of the ambiguous wavenumber component so the output
/// stays real; odd symbols therefore vanish there.
///
/// For singular_at_zero symbols the input mean must vanish to 1e-12 of its
/// L2 norm (SingularMode otherwise) and the output mean is set to zero.
/// Throws NonRealSymbol when m(-xi) != conj(m(xi)) on a sample of modes.
Field apply_fourier_multiplier(const Field& f, const Symbol& m, SymbolKind kind = SymbolKind::regular);
Spectrum apply_fourier_multiplier(const Spectrum& f, const Symbol& m, SymbolKind kind = SymbolKind::regular);

/// f minus its mean; the zero mode of the result is exactly 0.
Field project_mean_zero(const Field& f);
Spectrum project_mean_zero(Spectrum s);

/// 2/3 rule: zero every mode with |k1| > N1/3 or |k2| > N2/3.
Field dealias(const Field& f);
Spectrum dealias(Spectrum s);
/// dealias(a * b).
Field dealiased_product(const Field& a, const Field& b);

/// (sum_k (1 + |xi_k|^2)^s |c_k|^2)^(1/2), scaled so s = 0 gives the
/// continuum L2 norm over the torus.
double norm_sobolev(const Field& f, int s);
double norm_sobolev(const Spectrum& f, int s);
/// Real inner product matching norm_sobolev (negative s allowed).
double sobolev_inner(const Spectrum& a, const Spectrum& b, int s);

/// Trapezoid-rule integral over the torus.
double integrate(const Field& f);
/// Trapezoid-rule L2 inner product.
double l2_inner(const Field& a, const Field& b);
double norm_l2(const Field& f);
double norm_l2(const VectorField& v);
double norm_sobolev(const VectorField& v, int s);

/// Partial derivative along dimension dim (0 or 1).
Spectrum derivative(const Spectrum& s, int dim);
Field derivative(const Field& f, int dim);
VectorField gradient(const Field& f);
Field divergence(const VectorField& v);
/// Scalar curl d1 v2 - d2 v1.
Field curl(const VectorField& v);
Field laplacian(const Field& f);

/// Spectral interpolation onto another grid with the same periods
/// (zero padding or truncation). Nyquist modes are dropped.
Field resample(const Field& f, const Grid& target);

}  // namespace stillwater
