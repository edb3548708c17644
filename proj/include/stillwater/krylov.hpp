#pragma once

#include <cmath>
#include <vector>

namespace stillwater {

struct KrylovSettings {
  int restart = 30;
  int max_iterations = 500;
  double tolerance = 1e-10;  // relative to the right-hand side norm
};

struct KrylovStats {
  int iterations = 0;
  double residual = 0;  // final relative residual
  std::vector<double> history;
  bool converged = false;
};

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
///
/// V needs copy construction, operator*=(double) and axpy(double, const V&);
/// dot(a, b) supplies the inner product that defines the residual norm.
/// x holds the initial guess on entry.
template <class V, class Op, class Dot>
KrylovStats gmres(const Op& apply, const V& b, V& x, const Dot& dot, const KrylovSettings& settings) {
  KrylovStats stats;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0) {
    x *= 0.0;
    stats.converged = true;
    return stats;
  }
  const int m = settings.restart;
  std::vector<V> basis;
  basis.reserve(m + 1);
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1);

  while (true) {
    V r = b;
    r.axpy(-1.0, apply(x));
    double beta = std::sqrt(dot(r, r));
    stats.residual = beta / bnorm;
    stats.history.push_back(stats.residual);
    if (stats.residual <= settings.tolerance) {
      stats.converged = true;
      return stats;
    }
    if (stats.iterations >= settings.max_iterations) return stats;

    basis.clear();
    r *= 1.0 / beta;
    basis.push_back(std::move(r));
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    for (; j < m && stats.iterations < settings.max_iterations; ++j) {
      ++stats.iterations;
      V w = apply(basis[j]);
      for (int i = 0; i <= j; ++i) {
        h[i][j] = dot(w, basis[i]);
        w.axpy(-h[i][j], basis[i]);
      }
      const double hn = std::sqrt(dot(w, w));
      h[j + 1][j] = hn;
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double den = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = den == 0 ? 1.0 : h[j][j] / den;
      sn[j] = den == 0 ? 0.0 : h[j + 1][j] / den;
      h[j][j] = den;
      h[j + 1][j] = 0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      const bool breakdown = den == 0 || hn <= 1e-300;
      if (std::abs(g[j + 1]) / bnorm <= settings.tolerance || breakdown) {
        ++j;
        break;
      }
      w *= 1.0 / hn;
      basis.push_back(std::move(w));
    }
    // Back substitution for the least-squares coefficients.
    std::vector<double> y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= h[i][k] * y[k];
      y[i] = h[i][i] == 0 ? 0.0 : s / h[i][i];
    }
    for (int i = 0; i < j; ++i) x.axpy(y[i], basis[i]);
  }
}

}  // namespace stillwater
