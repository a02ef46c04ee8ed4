#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "conelab/affine.hpp"
#include "conelab/errors.hpp"
#include "conelab/matrix.hpp"
#include "conelab/vec.hpp"

namespace conelab {

enum class Classification { Interior, Boundary, Outside };

enum class ConeVariant { Quadratic, Polyhedral, BaseBody };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Interior: return "interior";
    case Classification::Boundary: return "boundary";
    default: return "outside";
  }
}

// Scale-relative tolerance for the interior/boundary/outside trichotomy.
inline constexpr double kClassifyTol = 1e-9;
// Default strictness margin for "strictly inside the dual cone" tests;
// hyperplanes closer than this to tangency are treated as unbounded cuts.
inline constexpr double kDualStrictness = 1e-6;

namespace detail {

// Visits every size-k index subset of {0..m-1}. Used for facet enumeration;
// callers cap m so the subset count stays small.
template <typename Fn>
void for_each_subset(int m, int k, Fn&& fn) {
  if (k < 0 || k > m) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline double binomial_capped(int m, int k, double cap) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) {
    v *= static_cast<double>(m - i) / static_cast<double>(i + 1);
    if (v > cap) return cap + 1.0;
  }
  return v;
}

}  // namespace detail

// A closed pointed full-dimensional convex cone in one of three
// representations:
//   Quadratic  : {x : x'Qx >= 0, (Q t).x >= 0} for Q of signature (1, d-1)
//                and an interior time axis t. Q is stored rescaled to unit
//                spectral norm; t is stored unit length.
//   Polyhedral : conic hull of finitely many generator rays (stored unit
//                length). Membership uses the full facet list, enumerated
//                from (d-1)-subsets of generators.
//   BaseBody   : cone over a convex polytope base given by a hyperplane not
//                through the origin plus its vertex list. Shares the facet
//                machinery with Polyhedral (vertex directions = generators).
class ConeSpec {
 public:
  static ConeSpec quadratic(const Matrix& Q, const Vec& time_axis) {
    ConeSpec c;
    c.variant_ = ConeVariant::Quadratic;
    c.dim_ = time_axis.dim();
    c.init_quadratic(Q, time_axis);
    return c;
  }

  static ConeSpec polyhedral(const std::vector<Vec>& rays) {
    ConeSpec c;
    c.variant_ = ConeVariant::Polyhedral;
    if (rays.empty()) throw InvalidInput("polyhedral cone: no rays");
    c.dim_ = rays[0].dim();
    c.init_generators(rays, "polyhedral cone");
    c.deep_dir_ = c.witness_;
    c.deep_dual_ = c.witness_;
    return c;
  }

  static ConeSpec base_body(const Hyperplane& base, const std::vector<Vec>& vertices) {
    ConeSpec c;
    c.variant_ = ConeVariant::BaseBody;
    if (vertices.empty()) throw InvalidInput("base-body cone: no vertices");
    c.dim_ = vertices[0].dim();
    c.init_base_body(base, vertices);
    return c;
  }

  ConeVariant variant() const { return variant_; }
  int dim() const { return dim_; }

  // Trichotomy with a scale-relative band of width `tol` around the boundary.
  Classification classify(const Vec& x, double tol = kClassifyTol) const {
    if (x.dim() != dim_) throw InvalidInput("classify: dimension mismatch");
    if (!is_finite(x)) throw InvalidInput("classify: non-finite point");
    double s2 = norm_sq(x);
    if (s2 == 0.0) return Classification::Boundary;  // apex
    if (variant_ == ConeVariant::Quadratic) {
      double qs = quad_form(x) / s2;
      double tau = dot(q_time_, x) / std::sqrt(s2);
      if (tau < -tol) return Classification::Outside;  // wrong sheet
      if (qs > tol) return Classification::Interior;
      if (qs < -tol) return Classification::Outside;
      return Classification::Boundary;
    }
    double m = facet_margin(x) / std::sqrt(s2);
    if (m > tol) return Classification::Interior;
    if (m < -tol) return Classification::Outside;
    return Classification::Boundary;
  }

  // Scale-free distance-like defect; ~0 exactly on the boundary, grows on
  // both sides. Used to verify constructed boundary points.
  double boundary_defect(const Vec& x) const {
    if (x.dim() != dim_) throw InvalidInput("boundary_defect: dimension mismatch");
    double s2 = norm_sq(x);
    if (s2 == 0.0) return 0.0;
    if (variant_ == ConeVariant::Quadratic) {
      double qs = quad_form(x) / s2;
      double tau = dot(q_time_, x) / std::sqrt(s2);
      return std::abs(qs) + std::max(0.0, -tau);
    }
    return std::abs(facet_margin(x)) / std::sqrt(s2);
  }

  // True when the unit vector along u lies strictly inside the dual cone,
  // with the given margin. Hyperplanes with such normals cut bounded
  // sections.
  bool dual_interior_contains(const Vec& u, double margin = kDualStrictness) const {
    if (u.dim() != dim_) throw InvalidInput("dual_interior_contains: dimension mismatch");
    if (!is_finite(u)) throw InvalidInput("dual_interior_contains: non-finite direction");
    double len = norm(u);
    if (len == 0.0) return false;
    Vec uh = (1.0 / len) * u;
    if (variant_ == ConeVariant::Quadratic) {
      // Dual of {x'Qx >= 0} is Q applied to the cone, so test Q^{ -1} u.
      Vec y = q_inv_ * uh;
      double s2 = norm_sq(y);
      if (s2 == 0.0) return false;
      double qs = quad_form(y) / s2;
      double tau = dot(q_time_, y) / std::sqrt(s2);
      return tau > 0.0 && qs > margin;
    }
    double worst = 1.0;
    for (const Vec& r : rays_) worst = std::min(worst, dot(uh, r));
    return worst > margin;
  }

  // Fixed unit interior direction used as the anchor ray for sections.
  const Vec& deep_direction() const { return deep_dir_; }
  // Fixed unit direction strictly inside the dual cone.
  const Vec& deep_dual_normal() const { return deep_dual_; }

  // Image of the cone under an invertible linear map.
  ConeSpec transformed(const Matrix& T) const {
    if (T.rows != dim_ || T.cols != dim_)
      throw InvalidInput("transformed: map has wrong shape");
    Matrix T_inv = gauss_inverse(T);
    switch (variant_) {
      case ConeVariant::Quadratic: {
        Matrix Qp = transpose(T_inv) * Q_ * T_inv;
        // Clean up rounding asymmetry before the signature check.
        for (int i = 0; i < dim_; ++i)
          for (int j = i + 1; j < dim_; ++j) {
            double v = 0.5 * (Qp(i, j) + Qp(j, i));
            Qp(i, j) = v;
            Qp(j, i) = v;
          }
        return quadratic(Qp, T * time_axis_);
      }
      case ConeVariant::Polyhedral: {
        std::vector<Vec> rays;
        rays.reserve(rays_.size());
        for (const Vec& r : rays_) rays.push_back(T * r);
        return polyhedral(rays);
      }
      default: {
        std::vector<Vec> verts;
        verts.reserve(base_vertices_.size());
        for (const Vec& v : base_vertices_) verts.push_back(T * v);
        Vec n = transpose(T_inv) * base_plane_->normal;
        return base_body(Hyperplane(n, base_plane_->offset), verts);
      }
    }
  }

  // Representation accessors. Quadratic-only / generator-only accessors
  // throw when called on the wrong variant.
  const Matrix& Q() const {
    require(ConeVariant::Quadratic, "Q");
    return Q_;
  }
  const Vec& time_axis() const {
    require(ConeVariant::Quadratic, "time_axis");
    return time_axis_;
  }
  const std::vector<Vec>& rays() const {
    if (variant_ == ConeVariant::Quadratic)
      throw InvalidInput("rays: not a generator-based cone");
    return rays_;
  }
  const std::vector<Vec>& facet_normals() const {
    if (variant_ == ConeVariant::Quadratic)
      throw InvalidInput("facet_normals: not a generator-based cone");
    return facet_normals_;
  }
  const Hyperplane& base_plane() const {
    require(ConeVariant::BaseBody, "base_plane");
    return *base_plane_;
  }
  const std::vector<Vec>& base_vertices() const {
    require(ConeVariant::BaseBody, "base_vertices");
    return base_vertices_;
  }

  // Data-level equality; used to detect curve/cone mix-ups across calls.
  bool same_cone(const ConeSpec& o) const {
    if (variant_ != o.variant_ || dim_ != o.dim_) return false;
    if (variant_ == ConeVariant::Quadratic)
      return Q_.a == o.Q_.a && time_axis_.c == o.time_axis_.c;
    if (rays_.size() != o.rays_.size()) return false;
    for (std::size_t i = 0; i < rays_.size(); ++i)
      if (rays_[i].c != o.rays_[i].c) return false;
    return true;
  }

  double quad_form(const Vec& x) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double row = 0.0;
      for (int j = 0; j < dim_; ++j) row += Q_(i, j) * x[j];
      s += x[i] * row;
    }
    return s;
  }

 private:
  ConeSpec() = default;

  void require(ConeVariant v, const char* what) const {
    if (variant_ != v) throw InvalidInput(std::string(what) + ": wrong cone variant");
  }

  double facet_margin(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (const Vec& n : facet_normals_) m = std::min(m, dot(n, x));
    return m;
  }

  // Unit-length canonicalization that is a fixed point on already-unit input,
  // so a serialized cone reloads with bit-identical data.
  static Vec canonical_unit(const Vec& v) {
    return std::abs(norm(v) - 1.0) < 1e-12 ? v : normalized(v);
  }

  void init_quadratic(const Matrix& Q, const Vec& t) {
    if (dim_ < 2) throw InvalidInput("quadratic cone: dimension must be >= 2");
    if (Q.rows != dim_ || Q.cols != dim_)
      throw InvalidInput("quadratic cone: Q shape does not match time axis");
    if (!is_finite(Q) || !is_finite(t))
      throw InvalidInput("quadratic cone: non-finite data");
    if (!is_symmetric(Q, 1e-10)) throw InvalidInput("quadratic cone: Q not symmetric");

    EigenDecomposition eig = symmetric_eigen(Q);
    double lmax = 0.0;
    for (double l : eig.eigenvalues) lmax = std::max(lmax, std::abs(l));
    if (lmax == 0.0) throw InvalidInput("quadratic cone: Q is zero");
    int pos = 0, neg = 0;
    for (double l : eig.eigenvalues) {
      if (l > 1e-10 * lmax) ++pos;
      else if (l < -1e-10 * lmax) ++neg;
    }
    if (pos != 1 || neg != dim_ - 1)
      throw InvalidInput("quadratic cone: Q must have exactly one positive and dim-1 negative eigenvalues");

    Q_ = std::abs(lmax - 1.0) < 1e-12 ? Q : (1.0 / lmax) * Q;
    time_axis_ = canonical_unit(t);
    if (quad_form(time_axis_) <= 0.0)
      throw InvalidInput("quadratic cone: time axis is not interior (t'Qt <= 0)");

    q_time_ = Q_ * time_axis_;
    // Invert through the (rescaled) eigendecomposition.
    Matrix inv(dim_, dim_);
    for (int k = 0; k < dim_; ++k) {
      double lk = eig.eigenvalues[k] / lmax;
      Matrix o = outer(eig.eigenvectors[k], eig.eigenvectors[k]);
      inv = inv + (1.0 / lk) * o;
    }
    q_inv_ = inv;
    deep_dir_ = time_axis_;
    deep_dual_ = normalized(q_time_);
  }

  void init_generators(const std::vector<Vec>& raw, const char* what) {
    if (dim_ < 2) throw InvalidInput(std::string(what) + ": dimension must be >= 2");
    if (static_cast<int>(raw.size()) < dim_)
      throw InvalidInput(std::string(what) + ": need at least dim generators");
    rays_.clear();
    rays_.reserve(raw.size());
    for (const Vec& r : raw) {
      if (r.dim() != dim_) throw InvalidInput(std::string(what) + ": mixed dimensions");
      rays_.push_back(canonical_unit(r));
    }

    // Full-dimensional span check.
    Matrix scatter(dim_, dim_);
    for (const Vec& r : rays_)
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) scatter(i, j) += r[i] * r[j];
    EigenDecomposition span = symmetric_eigen(scatter);
    if (span.eigenvalues[dim_ - 1] <= 1e-12 * span.eigenvalues[0])
      throw InvalidInput(std::string(what) + ": generators do not span the ambient space");

    // Pointedness witness: the normalized ray sum must see every generator
    // strictly. Fails for cones containing a line (or numerically flat ones).
    Vec sum(dim_);
    for (const Vec& r : rays_) sum += r;
    if (norm(sum) < 1e-12)
      throw InvalidInput(std::string(what) + ": cone is not pointed (ray sum vanishes)");
    witness_ = normalized(sum);
    for (const Vec& r : rays_)
      if (dot(witness_, r) <= 1e-10)
        throw InvalidInput(std::string(what) + ": cone is not pointed (witness check failed)");

    enumerate_facets(what);
  }

  void init_base_body(const Hyperplane& base, const std::vector<Vec>& vertices) {
    const char* what = "base-body cone";
    Hyperplane plane = base;
    if (std::abs(plane.offset) < 1e-12)
      throw InvalidInput(std::string(what) + ": base hyperplane passes through the apex");
    if (plane.offset < 0.0) plane = Hyperplane(-plane.normal, -plane.offset);

    double vmax = 1.0;
    for (const Vec& v : vertices) vmax = std::max(vmax, norm(v));
    for (const Vec& v : vertices) {
      if (v.dim() != dim_) throw InvalidInput(std::string(what) + ": mixed dimensions");
      if (std::abs(plane.signed_distance(v)) > 1e-9 * vmax)
        throw InvalidInput(std::string(what) + ": vertex off the base hyperplane");
    }
    if (static_cast<int>(vertices.size()) < dim_)
      throw InvalidInput(std::string(what) + ": need at least dim base vertices");
    AffineRank rank = affine_rank(vertices);
    if (rank.dim != dim_ - 1)
      throw InvalidInput(std::string(what) + ": base polytope is not full-dimensional in its hyperplane");

    base_plane_ = plane;
    base_vertices_ = vertices;
    init_generators(vertices, what);
    Vec centroid(dim_);
    for (const Vec& v : vertices) centroid += v;
    deep_dir_ = normalized(centroid);
    deep_dual_ = plane.normal;
  }

  // Every facet of a full-dimensional pointed cone is spanned by at least
  // dim-1 generators, so enumerating (dim-1)-subsets, solving for the normal
  // of their span, and keeping the normals that support all generators
  // recovers the complete facet list.
  void enumerate_facets(const char* what) {
    const int d = dim_;
    const int m = static_cast<int>(rays_.size());
    if (detail::binomial_capped(m, d - 1, 2e5) > 2e5)
      throw InvalidInput(std::string(what) + ": too many generators for facet enumeration");

    facet_normals_.clear();
    detail::for_each_subset(m, d - 1, [&](const std::vector<int>& idx) {
      Matrix scatter(d, d);
      for (int i : idx)
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) scatter(r, c) += rays_[i][r] * rays_[i][c];
      EigenDecomposition eig = symmetric_eigen(scatter);
      // Subset must span exactly d-1 dimensions for a unique normal.
      if (eig.eigenvalues[d - 2] <= 1e-10 * std::max(eig.eigenvalues[0], 1e-300)) return;
      Vec n = eig.eigenvectors[d - 1];
      double side = 0.0;
      for (const Vec& r : rays_) side += dot(n, r);
      if (side < 0.0) n *= -1.0;
      double worst = 0.0;
      for (const Vec& r : rays_) worst = std::min(worst, dot(n, r));
      if (worst < -1e-10) return;  // generators on both sides: not a facet
      for (const Vec& seen : facet_normals_)
        if (dot(seen, n) > 1.0 - 1e-9) return;  // duplicate facet
      facet_normals_.push_back(n);
    });

    if (static_cast<int>(facet_normals_.size()) < d)
      throw InvalidInput(std::string(what) + ": facet enumeration found fewer than dim facets");
  }

  ConeVariant variant_ = ConeVariant::Polyhedral;
  int dim_ = 0;

  // Quadratic data (Q_ rescaled to unit spectral norm, time_axis_ unit).
  Matrix Q_;
  Vec time_axis_;
  Vec q_time_;  // Q * time_axis: the linear functional picking the sheet
  Matrix q_inv_;

  // Generator data (Polyhedral and BaseBody).
  std::vector<Vec> rays_;           // unit generators
  std::vector<Vec> facet_normals_;  // unit inward normals: n.x >= 0 on the cone

  // BaseBody extras.
  std::optional<Hyperplane> base_plane_;
  std::vector<Vec> base_vertices_;

  Vec witness_;    // unit, strictly positive on all generators
  Vec deep_dir_;   // unit interior anchor direction
  Vec deep_dual_;  // unit strictly-dual-interior normal
};

}  // namespace conelab
