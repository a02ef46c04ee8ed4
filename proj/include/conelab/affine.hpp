#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/matrix.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// Hyperplane {x : normal . x = offset} with the normal kept at unit length.
// The constructor accepts any nonzero normal and rescales both fields.
struct Hyperplane {
  Vec normal;
  double offset;

  // Placeholder state (1-dimensional axis plane) so aggregates holding a
  // Hyperplane stay default-constructible; real planes come from the
  // validating constructor below.
  Hyperplane() : normal{1.0}, offset(0.0) {}

  Hyperplane(const Vec& n, double off) {
    if (!is_finite(n) || !std::isfinite(off))
      throw InvalidInput("Hyperplane: non-finite data");
    double len = norm(n);
    if (len == 0.0) throw InvalidInput("Hyperplane: zero normal");
    normal = (1.0 / len) * n;
    offset = off / len;
  }

  double signed_distance(const Vec& x) const { return dot(normal, x) - offset; }
};

// Extends a set of orthonormal vectors to a full basis of R^ambient and
// returns the new vectors. Deterministic: axis candidates are tried in
// index order with two re-orthogonalization passes.
inline std::vector<Vec> orthonormal_complement(const std::vector<Vec>& span, int ambient) {
  std::vector<Vec> basis = span;
  std::vector<Vec> added;
  for (int axis = 0; axis < ambient && static_cast<int>(basis.size()) < ambient; ++axis) {
    Vec v = unit_axis(ambient, axis);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) v -= dot(v, b) * b;
    double len = norm(v);
    if (len < 1e-6) continue;  // axis (nearly) inside current span
    v *= 1.0 / len;
    basis.push_back(v);
    added.push_back(v);
  }
  if (static_cast<int>(basis.size()) != ambient)
    throw InvalidInput("orthonormal_complement: could not complete basis");
  return added;
}

// Orthonormal basis of the hyperplane through the origin with this normal.
inline std::vector<Vec> plane_basis(const Vec& unit_normal) {
  return orthonormal_complement({normalized(unit_normal)}, unit_normal.dim());
}

struct AffineRank {
  int dim = 0;                   // affine dimension of the point set
  std::vector<double> spectrum;  // singular values of the centered points, descending
};

// Affine dimension via the eigenvalues of the centered scatter matrix.
// The cut is applied in the variance domain (scatter eigenvalues below
// rel_tol * lambda_max count as zero): assembling the scatter and
// diagonalizing it both leave noise of order eps * lambda_max there, so a
// variance-domain threshold separates true rank deficiency from that floor,
// which a threshold on the singular values themselves (~sqrt(eps) * sigma_max
// after the square root) would not.
inline AffineRank affine_rank(const std::vector<Vec>& points, double rel_tol = 1e-8) {
  if (points.empty()) throw InvalidInput("affine_rank: empty point set");
  const int d = points[0].dim();
  for (const Vec& p : points) {
    if (p.dim() != d) throw InvalidInput("affine_rank: mixed dimensions");
    if (!is_finite(p)) throw InvalidInput("affine_rank: non-finite point");
  }
  if (!(rel_tol > 0.0)) throw InvalidInput("affine_rank: rel_tol must be positive");

  Vec mean(d);
  for (const Vec& p : points) mean += p;
  mean *= 1.0 / static_cast<double>(points.size());

  Matrix scatter(d, d);
  for (const Vec& p : points) {
    Vec q = p - mean;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) scatter(i, j) += q[i] * q[j];
  }

  EigenDecomposition eig = symmetric_eigen(scatter);
  AffineRank out;
  out.spectrum.resize(d);
  for (int i = 0; i < d; ++i) out.spectrum[i] = std::sqrt(std::max(0.0, eig.eigenvalues[i]));
  double lmax = std::max(0.0, eig.eigenvalues[0]);
  if (lmax == 0.0) {
    out.dim = 0;
    return out;
  }
  for (int i = 0; i < d; ++i)
    if (eig.eigenvalues[i] > rel_tol * lmax) ++out.dim;
  return out;
}

struct HyperplaneFit {
  Hyperplane plane;
  double max_distance;  // worst absolute point-to-plane distance
};

// Least-squares hyperplane through the centroid: its normal is the scatter
// eigenvector with the smallest eigenvalue. Requires the points to span at
// least dim-1 affine dimensions so the normal is determined.
inline HyperplaneFit fit_hyperplane(const std::vector<Vec>& points) {
  if (points.empty()) throw InvalidInput("fit_hyperplane: empty point set");
  const int d = points[0].dim();
  if (static_cast<int>(points.size()) < d)
    throw InvalidInput("fit_hyperplane: need at least dim points");
  AffineRank rank = affine_rank(points);
  if (rank.dim < d - 1)
    throw InvalidInput("fit_hyperplane: points span fewer than dim-1 dimensions; normal is ambiguous");

  Vec mean(d);
  for (const Vec& p : points) mean += p;
  mean *= 1.0 / static_cast<double>(points.size());

  Matrix scatter(d, d);
  for (const Vec& p : points) {
    Vec q = p - mean;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) scatter(i, j) += q[i] * q[j];
  }
  EigenDecomposition eig = symmetric_eigen(scatter);
  Vec n = eig.eigenvectors[d - 1];  // smallest eigenvalue direction

  Hyperplane plane(n, dot(n, mean));
  double worst = 0.0;
  for (const Vec& p : points)
    worst = std::max(worst, std::abs(plane.signed_distance(p)));
  return HyperplaneFit{plane, worst};
}

}  // namespace conelab
