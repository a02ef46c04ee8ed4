#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "conelab/cone.hpp"
#include "conelab/errors.hpp"
#include "conelab/section.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// Verification tolerance for constructed boundary points (the construction
// itself lands at rounding level; see boundary_ray_length).
inline constexpr double kBoundaryVerifyTol = 1e-9;

// One point of the curve G = bd(C) intersect bd(a - C), produced by the
// chord construction: for x on the section boundary, the chord from x
// through lambda*a exits the section at r, and the unique scale
//   mu = |lambda*a - r| / (lambda |x - r|)  in (0, 1/lambda)
// places mu*x on both boundaries.
struct GammaSample {
  Vec base_point;      // x on the section boundary
  Vec opposite_point;  // r: far end of the chord from x through lambda*a
  double scale;        // mu
  Vec gamma_point;     // mu * x
  double lambda;       // lambda with lambda*a inside the section
};

struct GammaCurve {
  Vec a;  // translate point, interior to the cone
  std::vector<GammaSample> samples;
  Section section_used;
};

// Far endpoint of the section chord that starts at boundary point x and
// passes through the interior point `through`.
inline Vec chord_opposite_endpoint(const Section& s, const Vec& x, const Vec& through) {
  const double scale = std::max(1.0, norm(s.interior_point));
  if (std::abs(s.plane.signed_distance(through)) > 1e-9 * scale)
    throw InvalidInput("chord_opposite_endpoint: interior point is off the section plane");
  if (s.cone->classify(through) != Classification::Interior)
    throw InvalidInput("chord_opposite_endpoint: chord anchor is not interior to the cone");
  if (std::abs(s.plane.signed_distance(x)) > 1e-9 * scale)
    throw InvalidInput("chord_opposite_endpoint: chord start is off the section plane");
  if (s.cone->boundary_defect(x) > 1e-6)
    throw InvalidInput("chord_opposite_endpoint: chord start is not on the cone boundary");
  Vec dir = through - x;
  double len = norm(dir);
  if (len <= 1e-14 * scale)
    throw InvalidInput("chord_opposite_endpoint: chord start coincides with the anchor");
  dir *= 1.0 / len;
  return section_boundary_point(s, through, dir);
}

// Solves lambda*a = (lambda*mu) x + (1 - lambda*mu) r for mu and verifies
// the defining equation to 1e-10 * max(1, |a|).
inline double gamma_scale(const Vec& x, const Vec& r, const Vec& a, double lambda) {
  check_same_dim(x, r, "gamma_scale");
  check_same_dim(x, a, "gamma_scale");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidInput("gamma_scale: lambda must be positive");
  const double tol = 1e-10 * std::max(1.0, norm(a));
  Vec p = lambda * a;
  Vec v = r - x;
  double v2 = norm_sq(v);
  if (v2 == 0.0) throw InvalidInput("gamma_scale: chord endpoints coincide");
  double t = dot(p - x, v) / v2;
  if (!(t > 0.0 && t < 1.0))
    throw InvalidInput("gamma_scale: lambda*a does not lie strictly between the chord endpoints");
  if (distance(p, x + t * v) > tol)
    throw InvalidInput("gamma_scale: lambda*a does not lie on the chord");

  double mu = distance(p, r) / (lambda * distance(x, r));
  if (!(mu > 0.0 && mu < 1.0 / lambda))
    throw ConsistencyError("gamma_scale: scale escaped (0, 1/lambda)");
  Vec recon = (lambda * mu) * x + (1.0 - lambda * mu) * r;
  if (distance(p, recon) > tol)
    throw ConsistencyError("gamma_scale: defining equation residual too large");
  return mu;
}

// Samples G = bd(C) intersect bd(a - C) through the canonical bounded
// section whose plane passes through a (so lambda = 1). Every emitted point
// is re-verified against both boundary memberships.
inline GammaCurve gamma_curve(const ConeSpec& cone, const Vec& a, int num_samples,
                              std::uint64_t seed = 0) {
  if (cone.classify(a) != Classification::Interior)
    throw InvalidInput("gamma_curve: point a must be interior to the cone");
  const Vec& n = cone.deep_dual_normal();
  double offset = dot(n, a);
  Section s = section_of(cone, Hyperplane(n, offset), num_samples, seed);
  const double lambda = s.plane.offset / dot(s.plane.normal, a);  // 1 by construction

  GammaCurve curve;
  curve.a = a;
  curve.samples.reserve(s.boundary_samples.size());
  Vec p = lambda * a;
  for (const Vec& x : s.boundary_samples) {
    GammaSample g;
    g.base_point = x;
    g.opposite_point = chord_opposite_endpoint(s, x, p);
    g.lambda = lambda;
    g.scale = gamma_scale(x, g.opposite_point, a, lambda);
    g.gamma_point = g.scale * x;
    if (cone.boundary_defect(g.gamma_point) > kBoundaryVerifyTol)
      throw ConsistencyError("gamma_curve: gamma point failed the C boundary check");
    if (cone.boundary_defect(a - g.gamma_point) > kBoundaryVerifyTol)
      throw ConsistencyError("gamma_curve: gamma point failed the a - C boundary check");
    curve.samples.push_back(std::move(g));
  }
  curve.section_used = std::move(s);
  return curve;
}

// Maximum boundary defect of the reflected points a - g for both membership
// checks (g in bd(a-C) and a-g in bd(a-C)); the reflection must land back
// on the curve's carrier set.
inline double gamma_central_symmetry_check(const ConeSpec& cone, const GammaCurve& curve,
                                           double tol = kBoundaryVerifyTol) {
  if (!(tol > 0.0)) throw InvalidInput("gamma_central_symmetry_check: tol must be positive");
  if (!cone.same_cone(*curve.section_used.cone))
    throw InvalidInput("gamma_central_symmetry_check: curve was built for a different cone");
  double worst = 0.0;
  for (const GammaSample& g : curve.samples) {
    Vec reflected = curve.a - g.gamma_point;
    // reflected on bd(C), and reflected on bd(a - C), i.e. a - reflected on bd(C)
    worst = std::max(worst, cone.boundary_defect(reflected));
    worst = std::max(worst, cone.boundary_defect(curve.a - reflected));
  }
  return worst;
}

}  // namespace conelab
