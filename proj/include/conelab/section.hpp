#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "conelab/affine.hpp"
#include "conelab/cone.hpp"
#include "conelab/directions.hpp"
#include "conelab/errors.hpp"
#include "conelab/matrix.hpp"
#include "conelab/rng.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// Step length t such that anchor + t*dir lies on the cone boundary. The
// anchor must be inside (or on) the cone; the bisection uses the exact sign
// of the membership functions (classification tolerance 0), so the returned
// point carries a boundary defect at rounding level, far below the 1e-9
// verification tolerances used downstream.
inline double boundary_ray_length(const ConeSpec& cone, const Vec& anchor, const Vec& dir,
                                  double scale_hint = 1.0) {
  if (!(scale_hint > 0.0)) throw InvalidInput("boundary_ray_length: bad scale hint");
  if (cone.classify(anchor) == Classification::Outside)
    throw InvalidInput("boundary_ray_length: anchor lies outside the cone");
  double lo = 0.0, hi = scale_hint;
  int guard = 0;
  while (cone.classify(anchor + hi * dir, 0.0) != Classification::Outside) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 80)
      throw InvalidInput("boundary_ray_length: ray never leaves the cone (unbounded direction)");
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (cone.classify(anchor + mid * dir, 0.0) == Classification::Outside)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Bounded slice of a cone: the cutting hyperplane (normal oriented into the
// dual interior), an orthonormal in-plane basis, boundary samples, and the
// section body's centroid with an error bound.
struct Section {
  std::shared_ptr<const ConeSpec> cone;
  Hyperplane plane;
  std::vector<Vec> basis;
  Vec interior_point;
  std::vector<Vec> boundary_samples;
  Vec centroid;
  double centroid_error = 0.0;
  double diameter_hint = 0.0;

  int section_dim() const { return static_cast<int>(basis.size()); }

  // Plane coordinates relative to the interior anchor point.
  Vec to_plane(const Vec& x) const {
    Vec y(section_dim());
    Vec q = x - interior_point;
    for (int k = 0; k < section_dim(); ++k) y[k] = dot(q, basis[k]);
    return y;
  }
  Vec from_plane(const Vec& y) const {
    Vec x = interior_point;
    for (int k = 0; k < section_dim(); ++k) x += y[k] * basis[k];
    return x;
  }
};

namespace detail {

inline double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

// Andrew monotone chain; returns the hull in counter-clockwise order with
// collinear points dropped.
inline std::vector<Vec> convex_hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) { return a.c == b.c; }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) return pts;
  std::vector<Vec> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline double det3(const Vec& a, const Vec& b, const Vec& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// Section polytope vertices for generator-based cones: each ray meets the
// cutting plane once (normals are strictly dual-interior, so n.r > 0).
inline std::vector<Vec> section_polytope_vertices(const ConeSpec& cone, const Hyperplane& plane) {
  std::vector<Vec> verts;
  verts.reserve(cone.rays().size());
  for (const Vec& r : cone.rays()) {
    double den = dot(plane.normal, r);
    if (den <= 0.0)
      throw InvalidInput("section polytope: a generator is parallel to or behind the cutting plane");
    verts.push_back((plane.offset / den) * r);
  }
  return verts;
}

// Centroid of the section body cut by `plane`, in ambient coordinates, with
// an error bound. Exact closed forms are used whenever the representation
// allows; otherwise a radial quadrature estimate with a doubled-resolution
// error estimate.
//   quality >= 1 scales the quadrature resolution (exact paths ignore it).
inline std::pair<Vec, double> compute_section_centroid(const ConeSpec& cone,
                                                       const Hyperplane& plane,
                                                       const Vec& anchor,
                                                       const std::vector<Vec>& basis,
                                                       int quality,
                                                       std::uint64_t seed) {
  const int m = static_cast<int>(basis.size());
  auto to_plane = [&](const Vec& x) {
    Vec y(m);
    Vec q = x - anchor;
    for (int k = 0; k < m; ++k) y[k] = dot(q, basis[k]);
    return y;
  };
  auto from_plane = [&](const Vec& y) {
    Vec x = anchor;
    for (int k = 0; k < m; ++k) x += y[k] * basis[k];
    return x;
  };

  if (cone.variant() == ConeVariant::Quadratic) {
    // The section of {x'Qx >= 0} is the ellipsoid z'(-B'QB)z - 2(Qp).Bz <=
    // p'Qp in plane coordinates z about the anchor p; its centroid is the
    // center of that ellipsoid.
    const Matrix& Q = cone.Q();
    Matrix A(m, m);
    Vec rhs(m);
    std::vector<Vec> qb(m);
    for (int k = 0; k < m; ++k) qb[k] = Q * basis[k];
    Vec qp = Q * anchor;
    for (int i = 0; i < m; ++i) {
      rhs[i] = dot(basis[i], qp);
      for (int j = 0; j < m; ++j) A(i, j) = -dot(basis[i], qb[j]);
    }
    Vec z = solve_linear(A, rhs);
    Vec c = from_plane(z);
    if (cone.classify(c) != Classification::Interior)
      throw ConsistencyError("section centroid: analytic ellipsoid center not interior");
    return {c, 1e-13 * std::max(1.0, norm(c))};
  }

  std::vector<Vec> verts = section_polytope_vertices(cone, plane);

  if (m == 1) {
    // Segment: midpoint of the extreme plane coordinates.
    double lo = 0.0, hi = 0.0;
    for (const Vec& w : verts) {
      double y = to_plane(w)[0];
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    Vec c = from_plane(Vec{0.5 * (lo + hi)});
    return {c, 1e-14 * std::max(1.0, norm(c))};
  }

  if (m == 2) {
    // Polygon: convex hull in plane coordinates, then a signed-area fan.
    std::vector<Vec> flat;
    flat.reserve(verts.size());
    for (const Vec& w : verts) flat.push_back(to_plane(w));
    std::vector<Vec> hull = convex_hull_2d(flat);
    if (hull.size() < 3)
      throw InvalidInput("section centroid: polygon section is degenerate");
    double area2 = 0.0;
    Vec acc(2);
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec& a = hull[i];
      const Vec& b = hull[(i + 1) % hull.size()];
      double w = cross2(a, b);
      area2 += w;
      acc += w * (a + b);
    }
    if (std::abs(area2) < 1e-300)
      throw InvalidInput("section centroid: polygon section has zero area");
    Vec c = from_plane((1.0 / (3.0 * area2)) * acc);
    return {c, 1e-13 * std::max(1.0, norm(c))};
  }

  // Simplex section: d linearly independent generators cut the plane in an
  // m-simplex whose centroid is the vertex average.
  if (static_cast<int>(verts.size()) == m + 1) {
    AffineRank rank = affine_rank(verts);
    if (rank.dim == m) {
      Vec c(cone.dim());
      for (const Vec& w : verts) c += w;
      c *= 1.0 / static_cast<double>(verts.size());
      return {c, 1e-13 * std::max(1.0, norm(c))};
    }
  }

  const double scale = std::max(1.0, norm(anchor));
  auto radial = [&](const Vec& u_plane) {
    Vec dir(cone.dim());
    for (int k = 0; k < m; ++k) dir += u_plane[k] * basis[k];
    return boundary_ray_length(cone, anchor, dir, scale);
  };

  if (m == 3) {
    // Volume fan over an icosphere mesh; the error bound compares two
    // subdivision levels.
    Vec prev(3);
    Vec out(cone.dim());
    double err = 0.0;
    int base_level = 3 + (quality > 1 ? 1 : 0);
    for (int level = base_level; level <= base_level + 1; ++level) {
      TriMesh mesh = icosphere(level);
      std::vector<Vec> w(mesh.vertices.size());
      for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        w[i] = radial(mesh.vertices[i]) * mesh.vertices[i];
      double vol = 0.0;
      Vec acc(3);
      for (const auto& f : mesh.faces) {
        double v = det3(w[f[0]], w[f[1]], w[f[2]]) / 6.0;
        vol += v;
        acc += (v / 4.0) * (w[f[0]] + w[f[1]] + w[f[2]]);
      }
      Vec c = (1.0 / vol) * acc;
      if (level > base_level) err = distance(c, prev);
      prev = c;
      out = from_plane(c);
    }
    return {out, std::max(err, 1e-13 * std::max(1.0, norm(out)))};
  }

  // m >= 4: radial moment quadrature over seeded directions; the error bound
  // compares the half-set estimate against the full set.
  int n_dirs = 8192 * std::max(1, quality);
  std::vector<Vec> dirs = sphere_directions(m, n_dirs, derive_seed(seed, 0xced0));
  Vec num(m), num_half(m);
  double den = 0.0, den_half = 0.0;
  for (int i = 0; i < n_dirs; ++i) {
    double rho = radial(dirs[i]);
    double rm = std::pow(rho, m);
    double w_num = rm * rho / static_cast<double>(m + 1);
    double w_den = rm / static_cast<double>(m);
    num += w_num * dirs[i];
    den += w_den;
    if (i < n_dirs / 2) {
      num_half += w_num * dirs[i];
      den_half += w_den;
    }
  }
  Vec c_full = (1.0 / den) * num;
  Vec c_half = (1.0 / den_half) * num_half;
  Vec out = from_plane(c_full);
  double err = 0.0;
  for (int k = 0; k < m; ++k) err += (c_full[k] - c_half[k]) * (c_full[k] - c_half[k]);
  return {out, std::max(std::sqrt(err), 1e-13 * std::max(1.0, norm(out)))};
}

}  // namespace detail

// Cuts the cone with a hyperplane and assembles the bounded section:
// boundary samples in deterministic directions, the interior anchor on the
// cone's deep ray, and the section centroid. Throws InvalidInput when the
// hyperplane normal is not strictly dual-interior (unbounded slice) or the
// plane misses the cone's interior.
inline Section section_of(const ConeSpec& cone, const Hyperplane& plane_in, int num_samples,
                          std::uint64_t seed = 0) {
  if (num_samples < 2) throw InvalidInput("section_of: need at least 2 boundary samples");
  Hyperplane plane = plane_in;
  if (!cone.dual_interior_contains(plane.normal)) {
    if (cone.dual_interior_contains(-plane.normal))
      plane = Hyperplane(-plane.normal, -plane.offset);
    else
      throw InvalidInput(
          "section_of: hyperplane normal is not strictly inside the dual cone; the slice is "
          "unbounded or degenerate");
  }
  if (!(plane.offset > 0.0))
    throw InvalidInput("section_of: hyperplane does not cut the cone's interior");

  Section s;
  s.cone = std::make_shared<ConeSpec>(cone);
  s.basis = plane_basis(plane.normal);

  const Vec& deep = cone.deep_direction();
  double den = dot(plane.normal, deep);
  if (den <= 0.0)
    throw ConsistencyError("section_of: deep direction does not cross the cutting plane");
  s.interior_point = (plane.offset / den) * deep;
  if (cone.classify(s.interior_point) != Classification::Interior)
    throw ConsistencyError("section_of: anchor point failed the interior check");

  const int m = static_cast<int>(s.basis.size());
  const double scale = std::max(1.0, norm(s.interior_point));
  std::vector<Vec> dirs = sphere_directions(m, num_samples, derive_seed(seed, 0x5ec7));
  s.boundary_samples.reserve(dirs.size());
  for (const Vec& u : dirs) {
    Vec dir(cone.dim());
    for (int k = 0; k < m; ++k) dir += u[k] * s.basis[k];
    double t = boundary_ray_length(cone, s.interior_point, dir, scale);
    Vec p = s.interior_point + t * dir;
    if (cone.boundary_defect(p) > 1e-8)
      throw ConsistencyError("section_of: boundary sample failed verification");
    s.boundary_samples.push_back(p);
  }

  // Diameter hint: max pairwise distance over (a subset of) the samples.
  std::size_t stride = std::max<std::size_t>(1, s.boundary_samples.size() / 512);
  for (std::size_t i = 0; i < s.boundary_samples.size(); i += stride)
    for (std::size_t j = i + stride; j < s.boundary_samples.size(); j += stride)
      s.diameter_hint =
          std::max(s.diameter_hint, distance(s.boundary_samples[i], s.boundary_samples[j]));

  auto [c, err] = detail::compute_section_centroid(cone, plane, s.interior_point, s.basis,
                                                   /*quality=*/1, seed);
  s.plane = plane;
  s.centroid = c;
  s.centroid_error = err;
  return s;
}

// Recomputes the section centroid from the stored geometry. `quality`
// scales the quadrature resolution; exact representation paths are
// unaffected by it.
inline std::pair<Vec, double> centroid_of_section(const Section& s, int quality = 1) {
  return detail::compute_section_centroid(*s.cone, s.plane, s.interior_point, s.basis, quality,
                                          /*seed=*/1);
}

// Boundary point of the section body reached from `from` (inside or on the
// boundary) along an in-plane direction.
inline Vec section_boundary_point(const Section& s, const Vec& from, const Vec& dir_ambient) {
  double t = boundary_ray_length(*s.cone, from, dir_ambient,
                                 std::max(1.0, norm(s.interior_point)));
  return from + t * dir_ambient;
}

}  // namespace conelab
