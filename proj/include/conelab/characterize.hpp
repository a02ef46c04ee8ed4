#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "conelab/affine.hpp"
#include "conelab/cone.hpp"
#include "conelab/directions.hpp"
#include "conelab/errors.hpp"
#include "conelab/gamma.hpp"
#include "conelab/quadric.hpp"
#include "conelab/rng.hpp"
#include "conelab/section.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// Flat-boundary-intersection measurement for one interior point a: how
// close the sampled curve bd(C) intersect bd(a-C) comes to lying in a
// single hyperplane. flatness_defect is scale-free (normalized by the
// curve's diameter).
struct FBIReport {
  Vec a;
  int affine_dim = 0;
  double flatness_defect = 0.0;
  std::vector<double> spectrum;
  Hyperplane hyperplane;
};

inline double diameter_of(const std::vector<Vec>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d = std::max(d, distance(pts[i], pts[j]));
  return d;
}

inline FBIReport fbi_defect(const ConeSpec& cone, const Vec& a, int num_samples,
                            double rel_tol = 1e-8, std::uint64_t seed = 0) {
  GammaCurve curve = gamma_curve(cone, a, num_samples, seed);
  std::vector<Vec> pts;
  pts.reserve(curve.samples.size());
  for (const GammaSample& g : curve.samples) pts.push_back(g.gamma_point);

  AffineRank rank = affine_rank(pts, rel_tol);
  HyperplaneFit fit = fit_hyperplane(pts);
  double diam = diameter_of(pts);
  if (diam == 0.0) throw ConsistencyError("fbi_defect: gamma samples collapsed to a point");

  FBIReport rep;
  rep.a = a;
  rep.affine_dim = rank.dim;
  rep.spectrum = rank.spectrum;
  rep.hyperplane = fit.plane;
  rep.flatness_defect = fit.max_distance / diam;
  return rep;
}

// Closed form of the flat carrying the gamma curve of a quadratic-form
// cone: x'Qx = 0 and (a-x)'Q(a-x) = 0 subtract to the plane
// (Qa).x = a'Qa / 2. Only defined for the Quadratic variant. The
// constructor rescales both sides by |Qa|.
inline Hyperplane analytic_fbi_hyperplane(const ConeSpec& cone, const Vec& a) {
  if (cone.variant() != ConeVariant::Quadratic)
    throw InvalidInput("analytic_fbi_hyperplane: cone is not in quadratic form");
  if (cone.classify(a) != Classification::Interior)
    throw InvalidInput("analytic_fbi_hyperplane: point a must be interior");
  Vec qa = cone.Q() * a;
  return Hyperplane(qa, 0.5 * dot(a, qa));
}

// Radial asymmetry of the section body about its centroid:
// max over directions of |rho(u) - rho(-u)| / (rho(u) + rho(-u)).
inline double symmetry_defect(const Section& s, int num_directions) {
  if (num_directions < 1) throw InvalidInput("symmetry_defect: need at least one direction");
  const Vec& c = s.centroid;
  if (s.cone->classify(c) != Classification::Interior)
    throw ConsistencyError("symmetry_defect: section centroid is not interior (upstream bug)");
  const int m = s.section_dim();
  const double scale = std::max(1.0, norm(s.interior_point));
  double worst = 0.0;
  for (const Vec& u : sphere_directions(m, num_directions, /*seed=*/0)) {
    Vec w(s.cone->dim());
    for (int k = 0; k < m; ++k) w += u[k] * s.basis[k];
    double fwd = boundary_ray_length(*s.cone, c, w, scale);
    double bwd = boundary_ray_length(*s.cone, c, -w, scale);
    worst = std::max(worst, std::abs(fwd - bwd) / (fwd + bwd));
  }
  return worst;
}

struct CSSReport {
  int sections_tested = 0;
  double max_symmetry_defect = 0.0;
  Hyperplane worst_hyperplane;
};

// Draws a strictly-dual-interior unit normal near the cone's deep dual
// direction; tilt strength shrinks until the margin requirement holds.
inline Vec sample_dual_normal(const ConeSpec& cone, Rng& rng, double margin = 1e-3) {
  const Vec& center = cone.deep_dual_normal();
  double tilt = rng.uniform(0.1, 0.9);
  for (int attempt = 0; attempt < 60; ++attempt) {
    Vec cand = normalized(center + tilt * rng.unit_vec(cone.dim()));
    if (cone.dual_interior_contains(cand, margin)) return cand;
    tilt *= 0.7;
  }
  return center;
}

// Sweeps seeded bounded sections and records the worst symmetry defect.
inline CSSReport css_sweep(const ConeSpec& cone, int num_hyperplanes, std::uint64_t seed,
                           int num_directions = 128, int section_samples = 32) {
  if (num_hyperplanes < 1) throw InvalidInput("css_sweep: need at least one hyperplane");
  CSSReport rep;
  rep.worst_hyperplane = Hyperplane(cone.deep_dual_normal(), 1.0);
  for (int j = 0; j < num_hyperplanes; ++j) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    Vec n = sample_dual_normal(cone, rng);
    Hyperplane plane(n, dot(n, cone.deep_direction()));
    Section s = section_of(cone, plane, section_samples, derive_seed(seed, 4096 + j));
    double defect = symmetry_defect(s, num_directions);
    ++rep.sections_tested;
    if (defect > rep.max_symmetry_defect) {
      rep.max_symmetry_defect = defect;
      rep.worst_hyperplane = s.plane;
    }
  }
  return rep;
}

// Worst conic-fit residual over hyperplane slices of the section body
// (slices are taken through the centroid in seeded in-plane normal
// directions). For 2-dimensional sections the direct boundary fit residual
// is returned.
inline double ellipsoid_section_scan(const Section& s, int num_subsections,
                                     std::uint64_t seed = 0) {
  const int m = s.section_dim();
  const double scale = std::max(1.0, norm(s.interior_point));
  const Vec& c = s.centroid;

  auto sample_and_fit = [&](const std::vector<Vec>& frame, int count,
                            std::uint64_t dir_seed) {
    const int k = static_cast<int>(frame.size());
    std::vector<Vec> coords;
    coords.reserve(count);
    for (const Vec& u : sphere_directions(k, count, dir_seed)) {
      Vec w(s.cone->dim());
      for (int i = 0; i < k; ++i) w += u[i] * frame[i];
      double t = boundary_ray_length(*s.cone, c, w, scale);
      Vec q = c + t * w;
      Vec z(k);
      for (int i = 0; i < k; ++i) z[i] = dot(q - c, frame[i]);
      coords.push_back(z);
    }
    return fit_ellipsoid(coords).residual;
  };

  if (m < 2) throw InvalidInput("ellipsoid_section_scan: section dimension must be >= 2");
  if (m == 2) {
    int count = std::max(64, 4 * detail::quadric_coeff_count(2));
    return sample_and_fit(s.basis, count, derive_seed(seed, 7));
  }

  if (num_subsections < 1)
    throw InvalidInput("ellipsoid_section_scan: need at least one sub-slice");
  double worst = 0.0;
  std::vector<Vec> slice_normals = sphere_directions(m, num_subsections, derive_seed(seed, 11));
  for (int j = 0; j < num_subsections && j < static_cast<int>(slice_normals.size()); ++j) {
    Vec w(s.cone->dim());
    for (int i = 0; i < m; ++i) w += slice_normals[j][i] * s.basis[i];
    std::vector<Vec> frame = orthonormal_complement({s.plane.normal, normalized(w)},
                                                    s.cone->dim());
    int count = std::max(64, 4 * detail::quadric_coeff_count(m - 1));
    worst = std::max(worst, sample_and_fit(frame, count, derive_seed(seed, 100 + j)));
  }
  return worst;
}

// Four boundary points of a 2-dimensional section forming a parallelogram:
// two chords perpendicular to a fixed (approximate) diameter, placed on the
// rising and falling branches of the concave chord-length profile at equal
// lengths, found by bisecting the length difference.
inline std::array<Vec, 4> inscribed_parallelogram(const Section& s) {
  if (s.section_dim() != 2)
    throw InvalidInput("inscribed_parallelogram: section dimension must be 2");

  // Approximate diameter from boundary samples (fresh ones if too few).
  std::vector<Vec> pts = s.boundary_samples;
  if (pts.size() < 64) {
    const double scale0 = std::max(1.0, norm(s.interior_point));
    pts.clear();
    for (const Vec& u : sphere_directions(2, 128, 0)) {
      Vec w(s.cone->dim());
      for (int k = 0; k < 2; ++k) w += u[k] * s.basis[k];
      double t = boundary_ray_length(*s.cone, s.interior_point, w, scale0);
      pts.push_back(s.interior_point + t * w);
    }
  }
  std::size_t bi = 0, bj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d2 = norm_sq(pts[i] - pts[j]);
      if (d2 > best) {
        best = d2;
        bi = i;
        bj = j;
      }
    }
  Vec yp = s.to_plane(pts[bi]);
  Vec yq = s.to_plane(pts[bj]);
  double span = distance(yp, yq);
  if (span <= 0.0) throw InvalidInput("inscribed_parallelogram: degenerate section");
  Vec e = (1.0 / span) * (yq - yp);       // diameter direction (plane coords)
  Vec u{-e[1], e[0]};                     // chord direction, perpendicular
  Vec u_amb(s.cone->dim());
  for (int k = 0; k < 2; ++k) u_amb += u[k] * s.basis[k];
  const double scale = std::max(1.0, norm(s.interior_point));

  struct Chord {
    Vec lo, hi;   // ambient endpoints along -u / +u
    double len;
  };
  auto chord_at = [&](double t) {
    Vec anchor = s.from_plane(yp + t * e);
    double fwd = boundary_ray_length(*s.cone, anchor, u_amb, scale);
    double bwd = boundary_ray_length(*s.cone, anchor, -u_amb, scale);
    return Chord{anchor - bwd * u_amb, anchor + fwd * u_amb, fwd + bwd};
  };

  // Chord length along the diameter is concave (1-dimensional sections of a
  // convex body), so a golden-section scan finds its single peak.
  const double delta = 1e-7 * span;
  double lo = delta, hi = span - delta;
  const double gr = 0.6180339887498948482;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = chord_at(x1).len, f2 = chord_at(x2).len;
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = chord_at(x2).len;
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = chord_at(x1).len;
    }
  }
  double t_peak = 0.5 * (lo + hi);
  double len_peak = chord_at(t_peak).len;
  double len_lo = chord_at(delta).len;
  double len_hi = chord_at(span - delta).len;
  if (len_peak <= 1e-9 * span)
    throw InvalidInput("inscribed_parallelogram: degenerate (segment-like) section");
  double target = 0.5 * (len_peak + std::max(len_lo, len_hi));

  // Bisect the length difference on the rising branch ...
  auto solve_branch = [&](double a, double b, bool rising) {
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (a + b);
      bool below = chord_at(mid).len < target;
      if (below == rising)
        a = mid;
      else
        b = mid;
    }
    return 0.5 * (a + b);
  };
  double t1 = solve_branch(delta, t_peak, /*rising=*/true);
  double t2 = solve_branch(t_peak, span - delta, /*rising=*/false);

  Chord c1 = chord_at(t1);
  Chord c2 = chord_at(t2);
  std::array<Vec, 4> verts = {c1.lo, c1.hi, c2.hi, c2.lo};  // cyclic order

  double diam_hint = std::max(span, 1e-300);
  for (const Vec& v : verts)
    if (s.cone->boundary_defect(v) > kBoundaryVerifyTol)
      throw ConsistencyError("inscribed_parallelogram: vertex failed the boundary check");
  Vec mid_ac = 0.5 * (verts[0] + verts[2]);
  Vec mid_bd = 0.5 * (verts[1] + verts[3]);
  if (distance(mid_ac, mid_bd) > 1e-9 * diam_hint)
    throw ConsistencyError("inscribed_parallelogram: diagonal midpoints do not coincide");
  return verts;
}

// Deterministic interior test points: the deep axis point first, then
// seeded tilts at several depths. Every point is strictly interior with a
// comfortable margin.
inline std::vector<Vec> sample_interior_points(const ConeSpec& cone, int count,
                                               std::uint64_t seed) {
  if (count < 1) throw InvalidInput("sample_interior_points: count must be >= 1");
  std::vector<Vec> out;
  out.reserve(count);
  out.push_back(cone.deep_direction());
  const double depths[3] = {0.5, 1.0, 2.0};
  for (int i = 1; i < count; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    double depth = depths[i % 3];
    double tilt = 0.5;
    Vec cand = depth * cone.deep_direction();
    for (int attempt = 0; attempt < 60; ++attempt) {
      Vec trial = depth * normalized(cone.deep_direction() + tilt * rng.unit_vec(cone.dim()));
      if (cone.classify(trial, 1e-3) == Classification::Interior) {
        cand = trial;
        break;
      }
      tilt *= 0.7;
    }
    out.push_back(cand);
  }
  return out;
}

}  // namespace conelab
