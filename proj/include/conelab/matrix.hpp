#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// Row-major dense matrix. Sizes stay tiny (at most ~21x21 for quadric
// fitting Grams), so no blocking or pivG tricks beyond partial pivoting.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  Vec row(int i) const {
    Vec r(cols);
    for (int j = 0; j < cols; ++j) r[j] = (*this)(i, j);
    return r;
  }
  Vec col(int j) const {
    Vec c(rows);
    for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
  }
};

inline bool is_finite(const Matrix& m) {
  for (double x : m.a)
    if (!std::isfinite(x)) return false;
  return true;
}

inline double max_abs(const Matrix& m) {
  double r = 0.0;
  for (double x : m.a) r = std::max(r, std::abs(x));
  return r;
}

inline Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw InvalidInput("matrix product: inner dimension mismatch");
  Matrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

inline Vec operator*(const Matrix& m, const Vec& v) {
  if (m.cols != v.dim()) throw InvalidInput("matrix*vector: dimension mismatch");
  Vec r(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

inline Matrix operator+(Matrix x, const Matrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw InvalidInput("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
  return x;
}

inline Matrix operator*(double s, Matrix m) {
  for (double& x : m.a) x *= s;
  return m;
}

inline Matrix outer(const Vec& u, const Vec& v) {
  Matrix m(u.dim(), v.dim());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

inline bool is_symmetric(const Matrix& m, double rel_tol = 1e-12) {
  if (m.rows != m.cols) return false;
  double scale = std::max(1e-300, max_abs(m));
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j)
      if (std::abs(m(i, j) - m(j, i)) > rel_tol * scale) return false;
  return true;
}

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  std::vector<Vec> eigenvectors;    // orthonormal; eigenvectors[k] pairs eigenvalues[k]
};

// Cyclic Jacobi for symmetric matrices. Quadratically convergent once the
// off-diagonal mass is small; a few dozen sweeps are plenty at these sizes.
inline EigenDecomposition symmetric_eigen(const Matrix& m_in) {
  if (m_in.rows != m_in.cols) throw InvalidInput("symmetric_eigen: matrix not square");
  if (!is_finite(m_in)) throw InvalidInput("symmetric_eigen: non-finite entries");
  if (!is_symmetric(m_in)) throw InvalidInput("symmetric_eigen: matrix not symmetric");
  const int n = m_in.rows;
  Matrix A = m_in;
  Matrix V = Matrix::identity(n);
  const double scale = std::max(1e-300, max_abs(A));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(off) <= 1e-15 * scale * n) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return A(i, i) > A(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = A(order[k], order[k]);
    Vec v = V.col(order[k]);
    // Deterministic sign: largest-magnitude component positive.
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0) v *= -1.0;
    out.eigenvectors[k] = v;
  }
  return out;
}

// Inverse by Gauss-Jordan with partial pivoting. Throws on (near-)singular
// input; all uses here are small well-conditioned matrices.
inline Matrix gauss_inverse(const Matrix& m_in) {
  if (m_in.rows != m_in.cols) throw InvalidInput("gauss_inverse: matrix not square");
  if (!is_finite(m_in)) throw InvalidInput("gauss_inverse: non-finite entries");
  const int n = m_in.rows;
  Matrix A = m_in;
  Matrix B = Matrix::identity(n);
  const double scale = std::max(1e-300, max_abs(A));

  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    if (std::abs(A(piv, col)) <= 1e-13 * scale)
      throw InvalidInput("gauss_inverse: matrix is singular or near-singular");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(A(piv, j), A(col, j));
        std::swap(B(piv, j), B(col, j));
      }
    }
    double inv = 1.0 / A(col, col);
    for (int j = 0; j < n; ++j) {
      A(col, j) *= inv;
      B(col, j) *= inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        A(r, j) -= f * A(col, j);
        B(r, j) -= f * B(col, j);
      }
    }
  }
  return B;
}

// Solves M x = b for small square M (Gauss elimination, partial pivoting).
inline Vec solve_linear(const Matrix& m_in, const Vec& b_in) {
  if (m_in.rows != m_in.cols || m_in.rows != b_in.dim())
    throw InvalidInput("solve_linear: shape mismatch");
  const int n = m_in.rows;
  Matrix A = m_in;
  Vec b = b_in;
  const double scale = std::max(1e-300, max_abs(A));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    if (std::abs(A(piv, col)) <= 1e-13 * scale)
      throw InvalidInput("solve_linear: singular system");
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(A(piv, j), A(col, j));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = A(r, col) / A(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) A(r, j) -= f * A(col, j);
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

}  // namespace conelab
