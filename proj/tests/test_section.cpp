#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "conelab/families.hpp"
#include "conelab/section.hpp"

using namespace conelab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// --- Independent centroid oracle -------------------------------------------
// Shoelace centroid of a CCW polygon given in 2D plane coordinates; textbook
// formula, no shared code with the hull-fan path under test.
Vec shoelace_centroid(const std::vector<Vec>& poly) {
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& a = poly[i];
    const Vec& b = poly[(i + 1) % n];
    double w = a[0] * b[1] - b[0] * a[1];
    area2 += w;
    cx += (a[0] + b[0]) * w;
    cy += (a[1] + b[1]) * w;
  }
  return Vec{cx / (3.0 * area2), cy / (3.0 * area2)};
}

// Ambient polygon vertices of the slice plane ∩ polyhedral cone: each ray is
// scaled until it meets the plane.
std::vector<Vec> slice_vertices(const ConeSpec& cone, const Hyperplane& plane) {
  std::vector<Vec> out;
  for (const Vec& r : cone.rays()) out.push_back((plane.offset / dot(plane.normal, r)) * r);
  return out;
}

}  // namespace

TEST_CASE("boundary ray length worked examples") {
  ConeSpec lorentz = make_lorentz(3);
  REQUIRE(std::abs(boundary_ray_length(lorentz, Vec{1.0, 0.0, 0.0}, Vec{0.0, 1.0, 0.0}) - 1.0) <
          1e-12);
  REQUIRE(std::abs(boundary_ray_length(lorentz, Vec{2.0, 0.5, 0.0}, Vec{0.0, 1.0, 0.0}) - 1.5) <
          1e-12);
  REQUIRE(std::abs(boundary_ray_length(lorentz, Vec{2.0, 0.5, 0.0}, Vec{0.0, -1.0, 0.0}) - 2.5) <
          1e-12);

  ConeSpec square = make_kgon(4);
  REQUIRE(std::abs(boundary_ray_length(square, Vec{1.0, 0.0, 0.0}, Vec{0.0, 0.0, 1.0}) - 1.0) <
          1e-12);

  // The hit point is on the boundary to machine precision, not just 1e-9.
  double t = boundary_ray_length(lorentz, Vec{1.0, 0.2, -0.1}, normalized(Vec{0.0, 1.0, 2.0}));
  Vec hit = Vec{1.0, 0.2, -0.1} + t * normalized(Vec{0.0, 1.0, 2.0});
  REQUIRE(lorentz.boundary_defect(hit) < 1e-13);

  REQUIRE_THROWS_AS(boundary_ray_length(lorentz, Vec{0.0, 2.0, 0.0}, Vec{1.0, 0.0, 0.0}),
                    InvalidInput);
  // Direction that never leaves the cone: rejected as unbounded.
  REQUIRE_THROWS_AS(boundary_ray_length(lorentz, Vec{1.0, 0.0, 0.0}, Vec{1.0, 0.0, 0.0}),
                    InvalidInput);
}

TEST_CASE("lorentz disk section") {
  ConeSpec lorentz = make_lorentz(3);
  Section s = section_of(lorentz, Hyperplane(Vec{1.0, 0.0, 0.0}, 1.0), 64, 3);
  REQUIRE(s.section_dim() == 2);
  REQUIRE(distance(s.interior_point, Vec{1.0, 0.0, 0.0}) < 1e-12);
  REQUIRE(s.boundary_samples.size() == 64);
  for (const Vec& b : s.boundary_samples) {
    REQUIRE(std::abs(b[0] - 1.0) < 1e-12);
    REQUIRE(std::abs(std::hypot(b[1], b[2]) - 1.0) < 1e-9);
  }
  // Analytic ellipse-center path: exact centroid, zero reported error.
  REQUIRE(distance(s.centroid, Vec{1.0, 0.0, 0.0}) < 1e-12);
  REQUIRE(s.centroid_error < 1e-12);
  REQUIRE(std::abs(s.diameter_hint - 2.0) < 0.01);

  // Plane coordinate round trip.
  Vec q{0.25, -0.125};
  REQUIRE(distance(s.to_plane(s.from_plane(q)), q) < 1e-12);
}

TEST_CASE("tilted lorentz section centroid matches dense shoelace oracle") {
  ConeSpec lorentz = make_lorentz(3);
  Hyperplane plane(normalized(Vec{1.0, 0.35, -0.15}), 1.0);
  Section s = section_of(lorentz, plane, 48, 9);

  // Oracle: walk the boundary ellipse densely in plane coordinates and take
  // the polygon centroid.
  std::vector<Vec> dense;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    double ang = kTwoPi * (k + 0.5) / n;
    Vec dir = std::cos(ang) * s.basis[0] + std::sin(ang) * s.basis[1];
    double t = boundary_ray_length(lorentz, s.interior_point, dir);
    dense.push_back(s.to_plane(s.interior_point + t * dir));
  }
  Vec oracle = shoelace_centroid(dense);
  Vec lib = s.to_plane(s.centroid);
  REQUIRE(distance(lib, oracle) < 1e-6);
  REQUIRE(s.centroid_error < 1e-10);
  REQUIRE(lorentz.classify(s.centroid) == Classification::Interior);
}

TEST_CASE("polygonal section centroids match shoelace oracle") {
  // Square cone, base-parallel slice: vertices (c, ±c, ±c).
  ConeSpec square = make_kgon(4);
  Hyperplane base(Vec{1.0, 0.0, 0.0}, 1.5);
  Section s = section_of(square, base, 32, 1);
  std::vector<Vec> verts;
  for (const Vec& v : slice_vertices(square, base)) verts.push_back(s.to_plane(v));
  // CCW-order the square's plane coordinates by angle for the shoelace.
  std::sort(verts.begin(), verts.end(), [](const Vec& a, const Vec& b) {
    return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
  });
  Vec oracle = s.from_plane(shoelace_centroid(verts));
  REQUIRE(distance(s.centroid, oracle) < 1e-9);
  REQUIRE(distance(s.centroid, Vec{1.5, 0.0, 0.0}) < 1e-9);
  // Sampled diameter: at least the side length, at most corner-to-corner.
  REQUIRE(s.diameter_hint > 3.0);
  REQUIRE(s.diameter_hint <= 3.0 * std::sqrt(2.0) + 1e-9);

  // Tilted slice of a random polygon cone: hull-fan centroid vs shoelace.
  ConeSpec poly = make_random_polygon(7, 44);
  Hyperplane tilted(normalized(Vec{1.0, 0.12, -0.2}), 0.8);
  Section t = section_of(poly, tilted, 32, 2);
  std::vector<Vec> tverts;
  for (const Vec& v : slice_vertices(poly, tilted)) tverts.push_back(t.to_plane(v));
  std::sort(tverts.begin(), tverts.end(), [](const Vec& a, const Vec& b) {
    return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
  });
  Vec toracle = t.from_plane(shoelace_centroid(tverts));
  REQUIRE(distance(t.centroid, toracle) < 1e-9);
  REQUIRE(poly.classify(t.centroid) == Classification::Interior);
}

TEST_CASE("simplex sections use the exact vertex average") {
  ConeSpec tri = make_kgon(3);
  Hyperplane base(Vec{1.0, 0.0, 0.0}, 1.0);
  Section s = section_of(tri, base, 24, 5);
  Vec avg(3);
  for (const Vec& v : slice_vertices(tri, base)) avg += v;
  avg *= 1.0 / 3.0;
  REQUIRE(distance(s.centroid, avg) < 1e-10);
  REQUIRE(s.centroid_error < 1e-10);

  // 4D simplicial cone: tetrahedron section, still the vertex average.
  ConeSpec simp = make_simplicial(4, 8);
  const Vec& n = simp.deep_dual_normal();
  Section t = section_of(simp, Hyperplane(n, dot(n, simp.deep_direction())), 24, 6);
  Vec avg4(4);
  for (const Vec& v : slice_vertices(simp, t.plane)) avg4 += v;
  avg4 *= 0.25;
  REQUIRE(distance(t.centroid, avg4) < 1e-9);
}

TEST_CASE("2D section is a segment with midpoint centroid") {
  ConeSpec lorentz2 = make_lorentz(2);
  Section s = section_of(lorentz2, Hyperplane(Vec{1.0, 0.0}, 2.0), 8, 0);
  REQUIRE(s.section_dim() == 1);
  // Segment endpoints (2, ±2), centroid at the midpoint (2, 0).
  REQUIRE(distance(s.centroid, Vec{2.0, 0.0}) < 1e-9);
  REQUIRE(std::abs(s.diameter_hint - 4.0) < 1e-6);
}

TEST_CASE("4D lorentz ball section via the analytic center") {
  ConeSpec lorentz = make_lorentz(4);
  Section s = section_of(lorentz, Hyperplane(normalized(Vec{1.0, 0.2, 0.1, -0.1}), 1.0), 40, 4);
  REQUIRE(s.section_dim() == 3);
  for (const Vec& b : s.boundary_samples) REQUIRE(lorentz.boundary_defect(b) < 1e-9);
  REQUIRE(lorentz.classify(s.centroid) == Classification::Interior);
  REQUIRE(s.centroid_error < 1e-10);
  REQUIRE(std::abs(s.plane.signed_distance(s.centroid)) < 1e-10);
}

TEST_CASE("non-simplex 4D polyhedral section falls back to fan quadrature") {
  // Cone over the 3D cross-polytope: octahedron section at x0 = 1.
  std::vector<Vec> rays;
  for (int axis = 1; axis < 4; ++axis)
    for (double sgn : {1.0, -1.0}) {
      Vec r(4);
      r[0] = 1.0;
      r[axis] = sgn;
      rays.push_back(normalized(r));
    }
  ConeSpec cross = ConeSpec::polyhedral(rays);
  Section s = section_of(cross, Hyperplane(Vec{1.0, 0.0, 0.0, 0.0}, 1.0), 32, 11);
  REQUIRE(s.section_dim() == 3);
  // Symmetric body: centroid at the center, up to quadrature error.
  REQUIRE(distance(s.centroid, Vec{1.0, 0.0, 0.0, 0.0}) < 1e-2);
  REQUIRE(s.centroid_error < 1e-2);
  REQUIRE(cross.classify(s.centroid) == Classification::Interior);
}

TEST_CASE("section_of input validation") {
  ConeSpec lorentz = make_lorentz(3);
  // Normal outside the dual interior: the slice would be unbounded.
  REQUIRE_THROWS_AS(section_of(lorentz, Hyperplane(Vec{0.0, 1.0, 0.0}, 1.0), 16, 0),
                    InvalidInput);
  // Plane through the apex has no bounded positive-offset section.
  REQUIRE_THROWS_AS(section_of(lorentz, Hyperplane(Vec{1.0, 0.0, 0.0}, 0.0), 16, 0),
                    InvalidInput);
  REQUIRE_THROWS_AS(section_of(lorentz, Hyperplane(Vec{1.0, 0.0, 0.0}, 1.0), 1, 0),
                    InvalidInput);
  // A negative-offset plane (normal flipped) is re-oriented, not rejected.
  Section s = section_of(lorentz, Hyperplane(Vec{-1.0, 0.0, 0.0}, -1.0), 16, 0);
  REQUIRE(std::abs(s.plane.offset - 1.0) < 1e-12);
}

TEST_CASE("section boundary point helper") {
  ConeSpec square = make_kgon(4);
  Section s = section_of(square, Hyperplane(Vec{1.0, 0.0, 0.0}, 1.0), 16, 0);
  Vec b = section_boundary_point(s, s.interior_point, Vec{0.0, 1.0, 0.0});
  REQUIRE(square.boundary_defect(b) < 1e-12);
  REQUIRE(std::abs(s.plane.signed_distance(b)) < 1e-12);
  REQUIRE(distance(b, Vec{1.0, 1.0, 0.0}) < 1e-9);
}
