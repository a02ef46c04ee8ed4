#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "conelab/affine.hpp"
#include "conelab/cone.hpp"
#include "conelab/errors.hpp"
#include "conelab/matrix.hpp"
#include "conelab/rng.hpp"
#include "conelab/vec.hpp"

namespace conelab {

inline Matrix lorentz_Q(int dim) {
  Matrix Q(dim, dim);
  Q(0, 0) = 1.0;
  for (int i = 1; i < dim; ++i) Q(i, i) = -1.0;
  return Q;
}

// Normal-form second-order cone x0 >= |(x1..x_{d-1})|.
inline ConeSpec make_lorentz(int dim) {
  if (dim < 2) throw InvalidInput("make_lorentz: dim must be >= 2");
  return ConeSpec::quadratic(lorentz_Q(dim), unit_axis(dim, 0));
}

// Random rotation via Gram-Schmidt of a gaussian matrix.
inline Matrix random_orthogonal(int dim, Rng& rng) {
  Matrix M(dim, dim);
  for (int col = 0; col < dim; ++col) {
    Vec v = rng.gauss_vec(dim);
    for (int prev = 0; prev < col; ++prev) {
      Vec u = M.col(prev);
      v -= dot(v, u) * u;
    }
    double len = norm(v);
    if (len < 1e-8) {
      --col;  // essentially-dependent draw; redo this column
      continue;
    }
    v *= 1.0 / len;
    for (int row = 0; row < dim; ++row) M(row, col) = v[row];
  }
  return M;
}

// Random invertible map U diag(s) V' with condition number capped.
inline Matrix random_invertible(int dim, Rng& rng, double cond_cap) {
  if (!(cond_cap >= 1.0)) throw InvalidInput("random_invertible: condition cap must be >= 1");
  Matrix U = random_orthogonal(dim, rng);
  Matrix V = random_orthogonal(dim, rng);
  double half_log = 0.5 * std::log(cond_cap);
  Matrix S(dim, dim);
  for (int i = 0; i < dim; ++i) S(i, i) = std::exp(rng.uniform(-half_log, half_log));
  return U * (S * transpose(V));
}

// Generic ellipsoidal cone: Q = M' diag(1,-1,...,-1) M for a seeded
// invertible M (condition number capped at 50), time axis M^{-1} e0.
inline ConeSpec make_affine_ellipsoidal(int dim, std::uint64_t seed, double cond_cap = 50.0) {
  if (dim < 2) throw InvalidInput("make_affine_ellipsoidal: dim must be >= 2");
  Rng rng(derive_seed(seed, 0xae));
  Matrix M = random_invertible(dim, rng, cond_cap);
  Matrix Q = transpose(M) * (lorentz_Q(dim) * M);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double v = 0.5 * (Q(i, j) + Q(j, i));
      Q(i, j) = v;
      Q(j, i) = v;
    }
  Vec t = gauss_inverse(M) * unit_axis(dim, 0);
  return ConeSpec::quadratic(Q, t);
}

// Cone over a regular k-gon of circumradius sqrt(2) at height 1 (k = 4
// gives the rays (1, +-1, +-1) up to normalization).
inline ConeSpec make_kgon(int k) {
  if (k < 3) throw InvalidInput("make_kgon: k must be >= 3");
  const double two_pi = 6.283185307179586476925286766559;
  std::vector<Vec> rays;
  rays.reserve(k);
  for (int j = 0; j < k; ++j) {
    double a = two_pi * j / k + two_pi / (2.0 * k);
    rays.push_back(Vec{1.0, std::sqrt(2.0) * std::cos(a), std::sqrt(2.0) * std::sin(a)});
  }
  return ConeSpec::polyhedral(rays);
}

// Cone over a sampled l_p unit circle (|y|^p + |z|^p = 1) at height 1.
inline ConeSpec make_lp_ball(double p, int vertices) {
  if (!(p > 0.0)) throw InvalidInput("make_lp_ball: p must be positive");
  if (vertices < 4) throw InvalidInput("make_lp_ball: need at least 4 vertices");
  const double two_pi = 6.283185307179586476925286766559;
  auto signed_pow = [](double v, double e) {
    return (v >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(v), e);
  };
  std::vector<Vec> verts;
  verts.reserve(vertices);
  for (int j = 0; j < vertices; ++j) {
    double a = two_pi * (j + 0.5) / vertices;
    verts.push_back(
        Vec{1.0, signed_pow(std::cos(a), 2.0 / p), signed_pow(std::sin(a), 2.0 / p)});
  }
  return ConeSpec::base_body(Hyperplane(unit_axis(3, 0), 1.0), verts);
}

// Noisy ellipse cone. With eta = 0 the base is an exact ellipse and the
// cone is represented in quadratic form (so it is ellipsoidal by
// construction); with eta > 0 the base is a polygon of radially perturbed
// ellipse samples.
inline ConeSpec make_perturbed_ellipsoidal(double eta, int vertices, std::uint64_t seed) {
  if (eta < 0.0) throw InvalidInput("make_perturbed_ellipsoidal: eta must be >= 0");
  if (vertices < 8) throw InvalidInput("make_perturbed_ellipsoidal: need at least 8 vertices");
  const double ax = 1.2, bx = 0.8;  // fixed mild anisotropy
  if (eta == 0.0) {
    Matrix Q(3, 3);
    Q(0, 0) = 1.0;
    Q(1, 1) = -1.0 / (ax * ax);
    Q(2, 2) = -1.0 / (bx * bx);
    return ConeSpec::quadratic(Q, unit_axis(3, 0));
  }
  const double two_pi = 6.283185307179586476925286766559;
  Rng rng(derive_seed(seed, 0xbead));
  std::vector<Vec> verts;
  verts.reserve(vertices);
  for (int j = 0; j < vertices; ++j) {
    double a = two_pi * (j + 0.5) / vertices;
    double r = 1.0 + eta * rng.uniform(-1.0, 1.0);
    verts.push_back(Vec{1.0, ax * r * std::cos(a), bx * r * std::sin(a)});
  }
  return ConeSpec::base_body(Hyperplane(unit_axis(3, 0), 1.0), verts);
}

// Simplicial cone: regular simplex directions in the hyperplane x0 = 1,
// randomly rotated, then mildly warped. Sections are simplices, so the
// exact centroid path applies.
inline ConeSpec make_simplicial(int dim, std::uint64_t seed) {
  if (dim < 2) throw InvalidInput("make_simplicial: dim must be >= 2");
  const int m = dim - 1;
  // Regular simplex directions: images of the d standard basis vectors of
  // R^d, centered and projected onto the orthogonal complement of (1..1).
  Vec ones(dim);
  for (int i = 0; i < dim; ++i) ones[i] = 1.0;
  std::vector<Vec> basis = orthonormal_complement({normalized(ones)}, dim);
  Rng rng(derive_seed(seed, 0x51));
  Matrix R = random_orthogonal(m, rng);
  // Embed the rotated simplex directions in the x0 = 1 slice.
  std::vector<Vec> slice = orthonormal_complement({unit_axis(dim, 0)}, dim);
  std::vector<Vec> rays;
  rays.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    Vec centered = unit_axis(dim, i) - (1.0 / dim) * ones;
    Vec flat(m);
    for (int k = 0; k < m; ++k) flat[k] = dot(centered, basis[k]);
    flat = R * normalized(flat);
    Vec ray(dim);
    ray[0] = 1.0;
    for (int k = 0; k < m; ++k) ray += (0.7 * flat[k]) * slice[k];
    rays.push_back(ray);
  }
  ConeSpec cone = ConeSpec::polyhedral(rays);
  return cone.transformed(random_invertible(dim, rng, 3.0));
}

// Cone over the convex hull of seeded random points around a circle.
inline ConeSpec make_random_polygon(int vertices, std::uint64_t seed) {
  if (vertices < 3) throw InvalidInput("make_random_polygon: need at least 3 vertices");
  const double two_pi = 6.283185307179586476925286766559;
  Rng rng(derive_seed(seed, 0x9017));
  std::vector<Vec> verts;
  verts.reserve(vertices);
  for (int j = 0; j < vertices; ++j) {
    double a = two_pi * (j + rng.uniform(0.1, 0.9)) / vertices;
    double r = rng.uniform(0.6, 1.0);
    verts.push_back(Vec{1.0, r * std::cos(a), r * std::sin(a)});
  }
  return ConeSpec::base_body(Hyperplane(unit_axis(3, 0), 1.0), verts);
}

enum class FamilyKind {
  Lorentz,
  AffineEllipsoidal,
  Kgon,
  LpBall,
  PerturbedEllipsoidal,
  Simplicial,
};

struct FamilyParams {
  int count = 1;      // cones generated per family spec
  int k = 4;          // kgon vertex count
  double p = 4.0;     // lp exponent
  double eta = 0.0;   // perturbation amplitude
  int vertices = 32;  // sampled base vertices
};

inline std::vector<ConeSpec> generate_family(FamilyKind kind, int dim,
                                             const FamilyParams& params, std::uint64_t seed) {
  if (dim < 2) throw InvalidInput("generate_family: dim must be >= 2");
  if (params.count < 1) throw InvalidInput("generate_family: count must be >= 1");
  auto planar_only = [&](const char* what) {
    if (dim != 3)
      throw InvalidInput(std::string("generate_family: ") + what + " families are 3-dimensional");
  };
  std::vector<ConeSpec> out;
  out.reserve(params.count);
  for (int i = 0; i < params.count; ++i) {
    std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    switch (kind) {
      case FamilyKind::Lorentz:
        out.push_back(make_lorentz(dim));
        break;
      case FamilyKind::AffineEllipsoidal:
        out.push_back(make_affine_ellipsoidal(dim, s));
        break;
      case FamilyKind::Kgon:
        planar_only("kgon");
        out.push_back(make_kgon(params.k));
        break;
      case FamilyKind::LpBall:
        planar_only("lp-ball");
        out.push_back(make_lp_ball(params.p, params.vertices));
        break;
      case FamilyKind::PerturbedEllipsoidal:
        planar_only("perturbed-ellipsoidal");
        out.push_back(make_perturbed_ellipsoidal(params.eta, params.vertices, s));
        break;
      case FamilyKind::Simplicial:
        out.push_back(make_simplicial(dim, s));
        break;
    }
  }
  return out;
}

struct FamilySpec {
  FamilyKind kind = FamilyKind::Lorentz;
  int dim = 3;
  FamilyParams params;
  std::string text;  // the spec string as given
};

// Parses "kind:dim[:key=value,...]" with keys count, k, p, eta, n.
inline FamilySpec parse_family_spec(const std::string& text) {
  FamilySpec spec;
  spec.text = text;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3)
    throw InvalidInput("family spec '" + text + "': expected kind:dim[:params]");

  static const std::map<std::string, FamilyKind> kinds = {
      {"lorentz", FamilyKind::Lorentz},
      {"affine-ellipsoidal", FamilyKind::AffineEllipsoidal},
      {"kgon", FamilyKind::Kgon},
      {"lp-ball", FamilyKind::LpBall},
      {"perturbed-ellipsoidal", FamilyKind::PerturbedEllipsoidal},
      {"simplicial", FamilyKind::Simplicial},
  };
  auto it = kinds.find(parts[0]);
  if (it == kinds.end()) throw InvalidInput("family spec '" + text + "': unknown kind");
  spec.kind = it->second;

  try {
    std::size_t used = 0;
    spec.dim = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvalidInput("family spec '" + text + "': bad dimension");
  }

  if (parts.size() == 3 && !parts[2].empty()) {
    std::stringstream ps(parts[2]);
    std::string kv;
    while (std::getline(ps, kv, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw InvalidInput("family spec '" + text + "': expected key=value, got '" + kv + "'");
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      try {
        if (key == "count")
          spec.params.count = std::stoi(val);
        else if (key == "k")
          spec.params.k = std::stoi(val);
        else if (key == "p")
          spec.params.p = std::stod(val);
        else if (key == "eta")
          spec.params.eta = std::stod(val);
        else if (key == "n")
          spec.params.vertices = std::stoi(val);
        else
          throw InvalidInput("family spec '" + text + "': unknown key '" + key + "'");
      } catch (const InvalidInput&) {
        throw;
      } catch (const std::exception&) {
        throw InvalidInput("family spec '" + text + "': bad value for '" + key + "'");
      }
    }
  }
  return spec;
}

}  // namespace conelab
