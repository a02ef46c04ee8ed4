#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/matrix.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// Best-fit quadric x'Ax + b.x + c = 0 over a sample set, with the
// coefficient vector (upper triangle of A, b, c) normalized to unit
// Euclidean length. residual is the largest |algebraic value| over the
// samples under that normalization.
struct EllipsoidFit {
  Matrix quad_coeffs;   // symmetric A
  Vec lin_coeffs;       // b
  double const_coeff;   // c
  double residual;
  bool is_ellipsoid;
};

namespace detail {

inline int quadric_coeff_count(int m) { return (m + 1) * (m + 2) / 2; }

// Design row in the fixed coefficient order: A(0,0), A(0,1), ..., A(m-1,m-1)
// (upper triangle, off-diagonal entries weighted by 2), then b, then c.
inline Vec quadric_design_row(const Vec& y) {
  const int m = y.dim();
  Vec row(quadric_coeff_count(m));
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) row[k++] = (i == j) ? y[i] * y[i] : 2.0 * y[i] * y[j];
  for (int i = 0; i < m; ++i) row[k++] = y[i];
  row[k] = 1.0;
  return row;
}

inline double quadric_value(const Matrix& A, const Vec& b, double c, const Vec& y) {
  double s = c + dot(b, y);
  for (int i = 0; i < y.dim(); ++i) {
    double r = 0.0;
    for (int j = 0; j < y.dim(); ++j) r += A(i, j) * y[j];
    s += y[i] * r;
  }
  return s;
}

}  // namespace detail

// Least-squares quadric through the points: the unit coefficient vector
// minimizing the sum of squared algebraic residuals is the smallest-
// eigenvalue direction of the design Gram matrix. The fit runs in a
// centered/rescaled frame for conditioning; reported coefficients are
// mapped back to the input frame and renormalized.
inline EllipsoidFit fit_ellipsoid(const std::vector<Vec>& points,
                                  double residual_threshold = 1e-6) {
  if (points.empty()) throw InvalidInput("fit_ellipsoid: empty sample set");
  const int m = points[0].dim();
  if (m < 1) throw InvalidInput("fit_ellipsoid: zero-dimensional samples");
  const int ncoef = detail::quadric_coeff_count(m);
  if (static_cast<int>(points.size()) < ncoef)
    throw InvalidInput("fit_ellipsoid: need at least " + std::to_string(ncoef) + " points");
  for (const Vec& p : points) {
    if (p.dim() != m) throw InvalidInput("fit_ellipsoid: mixed dimensions");
    if (!is_finite(p)) throw InvalidInput("fit_ellipsoid: non-finite point");
  }

  Vec mean(m);
  for (const Vec& p : points) mean += p;
  mean *= 1.0 / static_cast<double>(points.size());
  double rms = 0.0;
  for (const Vec& p : points) rms += norm_sq(p - mean);
  rms = std::sqrt(rms / static_cast<double>(points.size()));
  if (rms == 0.0) throw InvalidInput("fit_ellipsoid: all samples coincide (zero design)");

  Matrix gram(ncoef, ncoef);
  for (const Vec& p : points) {
    Vec row = detail::quadric_design_row((1.0 / rms) * (p - mean));
    for (int i = 0; i < ncoef; ++i)
      for (int j = 0; j < ncoef; ++j) gram(i, j) += row[i] * row[j];
  }
  EigenDecomposition eig = symmetric_eigen(gram);
  const Vec& theta = eig.eigenvectors[ncoef - 1];  // smallest eigenvalue

  // Unpack in the centered frame y = (x - mean)/rms ...
  Matrix Ay(m, m);
  Vec by(m);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Ay(i, j) = theta[k];
      Ay(j, i) = theta[k];
      ++k;
    }
  for (int i = 0; i < m; ++i) by[i] = theta[k++];
  double cy = theta[k];

  // ... and push forward to the input frame.
  double s2 = rms * rms;
  Matrix Ax = (1.0 / s2) * Ay;
  Vec ay_mean = Ay * mean;
  Vec bx = (1.0 / rms) * by - (2.0 / s2) * ay_mean;
  double cx = dot(mean, ay_mean) / s2 - dot(by, mean) / rms + cy;

  double len = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) len += Ax(i, j) * Ax(i, j);
  len += norm_sq(bx) + cx * cx;
  len = std::sqrt(len);
  if (len == 0.0) throw InvalidInput("fit_ellipsoid: degenerate zero fit");
  Ax = (1.0 / len) * Ax;
  bx = (1.0 / len) * bx;
  cx /= len;

  EllipsoidFit fit;
  fit.residual = 0.0;
  for (const Vec& p : points)
    fit.residual = std::max(fit.residual, std::abs(detail::quadric_value(Ax, bx, cx, p)));

  // Sign-normalize so a definite quadratic part has positive trace, then
  // decide definiteness by the eigenvalues of A (relative threshold 1e-8).
  double trace = 0.0;
  for (int i = 0; i < m; ++i) trace += Ax(i, i);
  if (trace < 0.0) {
    Ax = -1.0 * Ax;
    bx = -bx;
    cx = -cx;
  }
  EigenDecomposition eA = symmetric_eigen(Ax);
  double lmax = 0.0;
  for (double l : eA.eigenvalues) lmax = std::max(lmax, std::abs(l));
  bool definite = lmax > 0.0;
  for (double l : eA.eigenvalues)
    if (l <= 1e-8 * lmax) definite = false;

  fit.quad_coeffs = Ax;
  fit.lin_coeffs = bx;
  fit.const_coeff = cx;
  fit.is_ellipsoid = definite && fit.residual <= residual_threshold;
  return fit;
}

}  // namespace conelab
