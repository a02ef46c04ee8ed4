#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "conelab/errors.hpp"

namespace conelab {

// Dense vector for low-dimensional geometry (everything here lives in
// dimension 2..8). Plain double storage, bounds handled by callers.
struct Vec {
  std::vector<double> c;

  Vec() = default;
  explicit Vec(int n) : c(static_cast<std::size_t>(n), 0.0) {}
  Vec(std::initializer_list<double> v) : c(v) {}
  explicit Vec(std::vector<double> v) : c(std::move(v)) {}

  int dim() const { return static_cast<int>(c.size()); }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim(); ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim(); ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (double& x : c) x *= s;
    return *this;
  }
};

inline void check_same_dim(const Vec& a, const Vec& b, const char* where) {
  if (a.dim() != b.dim())
    throw InvalidInput(std::string(where) + ": dimension mismatch (" +
                       std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

inline Vec operator+(Vec a, const Vec& b) {
  check_same_dim(a, b, "operator+");
  a += b;
  return a;
}

inline Vec operator-(Vec a, const Vec& b) {
  check_same_dim(a, b, "operator-");
  a -= b;
  return a;
}

inline Vec operator*(double s, Vec a) {
  a *= s;
  return a;
}

inline Vec operator-(Vec a) {
  a *= -1.0;
  return a;
}

inline double dot(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "dot");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

inline bool is_finite(const Vec& a) {
  for (double x : a.c)
    if (!std::isfinite(x)) return false;
  return true;
}

// Unit vector in the direction of a; rejects zero and non-finite input.
inline Vec normalized(const Vec& a) {
  if (!is_finite(a)) throw InvalidInput("normalized: non-finite vector");
  double n = norm(a);
  if (n == 0.0) throw InvalidInput("normalized: zero vector");
  return (1.0 / n) * a;
}

inline Vec unit_axis(int dim, int axis) {
  Vec e(dim);
  e[axis] = 1.0;
  return e;
}

}  // namespace conelab
