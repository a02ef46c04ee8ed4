#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/rng.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// Deterministic, well-spread unit directions in R^d:
//   d == 1 : {+1, -1}
//   d == 2 : uniform angles
//   d == 3 : Fibonacci sphere
//   d >= 4 : seeded gaussian directions (reproducible for a fixed seed)
inline std::vector<Vec> sphere_directions(int d, int count, std::uint64_t seed = 0) {
  if (d < 1) throw InvalidInput("sphere_directions: dimension must be >= 1");
  if (count < 1) throw InvalidInput("sphere_directions: count must be >= 1");
  std::vector<Vec> dirs;
  if (d == 1) {
    dirs.push_back(Vec{1.0});
    dirs.push_back(Vec{-1.0});
    return dirs;
  }
  dirs.reserve(static_cast<std::size_t>(count));
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      double a = 6.283185307179586476925286766559 * (static_cast<double>(k) + 0.5) /
                 static_cast<double>(count);
      dirs.push_back(Vec{std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  if (d == 3) {
    const double golden_angle = 2.3999632297286533222315555066336;
    for (int k = 0; k < count; ++k) {
      double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = golden_angle * static_cast<double>(k);
      dirs.push_back(Vec{r * std::cos(a), r * std::sin(a), z});
    }
    return dirs;
  }
  Rng rng(derive_seed(seed, 0x5d1aUL ^ static_cast<std::uint64_t>(d)));
  for (int k = 0; k < count; ++k) dirs.push_back(rng.unit_vec(d));
  return dirs;
}

// Triangulated unit sphere: icosahedron refined by midpoint subdivision.
// Used as a fixed quadrature mesh for 3-dimensional section bodies.
struct TriMesh {
  std::vector<Vec> vertices;             // unit vectors
  std::vector<std::array<int, 3>> faces;
};

inline TriMesh icosphere(int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh mesh;
  auto add = [&](double x, double y, double z) {
    mesh.vertices.push_back(normalized(Vec{x, y, z}));
  };
  add(-1, phi, 0); add(1, phi, 0); add(-1, -phi, 0); add(1, -phi, 0);
  add(0, -1, phi); add(0, 1, phi); add(0, -1, -phi); add(0, 1, -phi);
  add(phi, 0, -1); add(phi, 0, 1); add(-phi, 0, -1); add(-phi, 0, 1);
  mesh.faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec m = normalized(mesh.vertices[i] + mesh.vertices[j]);
      mesh.vertices.push_back(m);
      int idx = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    mesh.faces = std::move(next);
  }
  return mesh;
}

}  // namespace conelab
