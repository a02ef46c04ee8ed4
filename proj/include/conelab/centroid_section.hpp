#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "conelab/characterize.hpp"
#include "conelab/cone.hpp"
#include "conelab/directions.hpp"
#include "conelab/errors.hpp"
#include "conelab/gamma.hpp"
#include "conelab/optimize.hpp"
#include "conelab/rng.hpp"
#include "conelab/section.hpp"
#include "conelab/vec.hpp"

namespace conelab {

// One chord of the section body through a fixed point p, with the convex
// combination weight mu such that p = (1 - mu) x + mu y.
struct ChordRatio {
  Vec x;
  Vec y;
  double mu = 0.0;
};

struct HammerReport {
  double min_mu = 1.0;
  double max_mu = 0.0;
  int violations = 0;
  int chords = 0;
  std::vector<ChordRatio> ratios;
};

// Chord-ratio bounds at the centroid: for an n-dimensional convex body the
// centroid divides every chord through it with mu in [1/(n+1), n/(n+1)].
// Directions come from the deterministic low-discrepancy set, optionally
// extended by caller-supplied in-plane directions (e.g. exact medians).
inline HammerReport hammer_check(const Section& s, int num_chords, double tol = 1e-6,
                                 std::uint64_t seed = 0,
                                 const std::vector<Vec>* extra_plane_dirs = nullptr) {
  if (num_chords < 1) throw InvalidInput("hammer_check: need at least one chord");
  if (!(tol >= 0.0)) throw InvalidInput("hammer_check: tol must be nonnegative");
  const int n = s.section_dim();
  const Vec& c = s.centroid;
  if (s.cone->classify(c) != Classification::Interior)
    throw ConsistencyError("hammer_check: section centroid is not interior");
  const double scale = std::max(1.0, norm(s.interior_point));
  const double lo_bound = 1.0 / static_cast<double>(n + 1) - tol;
  const double hi_bound = static_cast<double>(n) / static_cast<double>(n + 1) + tol;

  std::vector<Vec> dirs = sphere_directions(n, num_chords, derive_seed(seed, 0x4a11));
  if (extra_plane_dirs)
    for (const Vec& u : *extra_plane_dirs) dirs.push_back(normalized(u));

  HammerReport rep;
  for (const Vec& u : dirs) {
    Vec w(s.cone->dim());
    for (int k = 0; k < n; ++k) w += u[k] * s.basis[k];
    double fwd = boundary_ray_length(*s.cone, c, w, scale);
    double bwd = boundary_ray_length(*s.cone, c, -w, scale);
    ChordRatio chord;
    chord.x = c + fwd * w;
    chord.y = c - bwd * w;
    chord.mu = fwd / (fwd + bwd);  // p = (1-mu) x + mu y along the chord
    rep.min_mu = std::min(rep.min_mu, chord.mu);
    rep.max_mu = std::max(rep.max_mu, chord.mu);
    if (chord.mu < lo_bound || chord.mu > hi_bound) ++rep.violations;
    ++rep.chords;
    rep.ratios.push_back(std::move(chord));
  }
  return rep;
}

struct CentroidSearchOptions {
  int restarts = 8;
  int max_iters = 200;      // per start
  int search_samples = 32;  // boundary samples while optimizing
  int final_samples = 128;  // boundary samples of the returned section
  std::uint64_t seed = 1;
  bool record_trace = false;
};

struct CentroidSearchTracePoint {
  Vec normal;
  double f = 0.0;
};

struct CentroidSearchResult {
  Section section;
  double residual = 0.0;  // |centroid - p| / |p|
  int starts_used = 0;
  bool cap_warning = false;  // section reached past the (n+2)p - C cap region
  std::vector<std::vector<CentroidSearchTracePoint>> trace;  // per start
};

// Searches for a bounded section through p whose centroid is p, by
// minimizing f(u) = |centroid(S(u)) - p| / |p| over unit normals u strictly
// inside the dual cone (hyperplane always constrained through p).
// Derivative-free simplex descent on a local chart of the normal sphere,
// with multistart: the deep dual normal first, then seeded tilts around the
// best normal found so far. Throws SearchBudgetExhausted when no start
// reaches `tol`.
inline CentroidSearchResult find_centroid_section(const ConeSpec& cone, const Vec& p, double tol,
                                                  CentroidSearchOptions opts = {}) {
  if (cone.classify(p) != Classification::Interior)
    throw InvalidInput("find_centroid_section: target point is not interior");
  if (!(tol > 0.0)) throw InvalidInput("find_centroid_section: tol must be positive");
  if (opts.restarts < 1 || opts.max_iters < 1)
    throw InvalidInput("find_centroid_section: bad search budget");
  const int d = cone.dim();
  const double pnorm = norm(p);

  auto evaluate = [&](const Vec& u_raw, int samples) -> double {
    double len = norm(u_raw);
    if (len == 0.0) return 1e3;
    Vec u = (1.0 / len) * u_raw;
    if (!cone.dual_interior_contains(u, kDualStrictness)) return 10.0;
    try {
      Section s = section_of(cone, Hyperplane(u, dot(u, p)), samples,
                             derive_seed(opts.seed, 0xf00d));
      return distance(s.centroid, p) / pnorm;
    } catch (const std::runtime_error&) {
      return 20.0;  // treat pathological slices as a soft penalty
    }
  };

  CentroidSearchResult out;
  Vec best_u = cone.deep_dual_normal();
  double best_f = evaluate(best_u, opts.search_samples);
  bool accepted = best_f <= tol;

  for (int start = 0; start < opts.restarts && !accepted; ++start) {
    Vec u0 = best_u;
    double step = start == 0 ? 0.08 : 0.04;
    if (start > 0 && best_f <= 1e-2) {
      // Polish stage: the incumbent is already close, so shrink the simplex
      // around it instead of tilting away. The chart step tracks the
      // residual scale (f is roughly linear in the normal perturbation).
      step = std::max(4.0 * best_f, 1e-9);
    } else if (start > 0) {
      // Seeded tilt around the incumbent, shrinking across restarts.
      Rng rng(derive_seed(opts.seed, 900 + static_cast<std::uint64_t>(start)));
      double tilt = 0.4 * std::pow(0.5, (start - 1) / 2);
      for (int attempt = 0; attempt < 40; ++attempt) {
        Vec cand = normalized(best_u + tilt * rng.unit_vec(d));
        if (cone.dual_interior_contains(cand, kDualStrictness)) {
          u0 = cand;
          break;
        }
        tilt *= 0.7;
      }
    }

    std::vector<Vec> chart = plane_basis(u0);
    auto objective = [&](const Vec& z) {
      Vec u = u0;
      for (int k = 0; k < d - 1; ++k) u += z[k] * chart[k];
      return evaluate(u, opts.search_samples);
    };

    NelderMeadOptions nm;
    nm.max_iters = opts.max_iters;
    nm.step = step;
    nm.record_trace = opts.record_trace;
    NelderMeadResult r = nelder_mead(objective, Vec(d - 1), nm);
    out.starts_used = start + 1;

    Vec u_star = u0;
    for (int k = 0; k < d - 1; ++k) u_star += r.best_x[k] * chart[k];
    u_star = normalized(u_star);
    if (opts.record_trace) {
      std::vector<CentroidSearchTracePoint> tr;
      tr.reserve(r.trace.size());
      for (const auto& [z, fz] : r.trace) {
        Vec u = u0;
        for (int k = 0; k < d - 1; ++k) u += z[k] * chart[k];
        tr.push_back({normalized(u), fz});
      }
      out.trace.push_back(std::move(tr));
    }

    if (r.best_f < best_f) {
      best_f = r.best_f;
      best_u = u_star;
    }
    // Accept only if an independent recomputation at doubled sampling holds.
    if (r.best_f <= tol && evaluate(u_star, 2 * opts.search_samples) <= tol) {
      best_u = u_star;
      accepted = true;
    }
  }

  if (!accepted)
    throw SearchBudgetExhausted(
        "find_centroid_section: residual " + std::to_string(best_f) +
            " did not reach tolerance within the restart budget",
        best_f);

  Section s = section_of(cone, Hyperplane(best_u, dot(best_u, p)), opts.final_samples,
                         derive_seed(opts.seed, 0xf00d));
  out.residual = distance(s.centroid, p) / pnorm;
  auto [c2, err2] = centroid_of_section(s, /*quality=*/2);
  if (distance(c2, p) / pnorm > 2.0 * tol)
    throw ConsistencyError("find_centroid_section: doubled-sampling verification failed");

  // Sanity check from the existence argument: with lambda = n + 2 > n + 1,
  // the section should stay inside the reflected cone lambda*p - C. A
  // boundary sample escaping it flags a suspicious (cap-touching) section.
  double lambda = static_cast<double>(d - 1) + 2.0;
  for (const Vec& b : s.boundary_samples)
    if (cone.classify(lambda * p - b) == Classification::Outside) {
      out.cap_warning = true;
      break;
    }
  out.section = std::move(s);
  return out;
}

// Two-sided containment proxy for the boundary identity
// bd(S) = bd(C) intersect bd(2p - C) satisfied by centrally symmetric
// sections with center p: gamma points of a = 2p must lie on the section
// plane, and section boundary samples must lie on bd(2p - C).
inline double section_boundary_equality(const ConeSpec& cone, const Section& section,
                                        double tol) {
  if (!(tol > 0.0)) throw InvalidInput("section_boundary_equality: tol must be positive");
  if (!cone.same_cone(*section.cone))
    throw InvalidInput("section_boundary_equality: section was built for a different cone");
  double sym = symmetry_defect(section, 64);
  if (sym > tol)
    throw InvalidInput("section_boundary_equality: section is not centrally symmetric (defect " +
                       std::to_string(sym) + ")");

  const Vec& p = section.centroid;
  Vec a = 2.0 * p;
  int samples = std::max<int>(64, static_cast<int>(section.boundary_samples.size()));
  GammaCurve curve = gamma_curve(cone, a, samples);

  double worst = 0.0;
  for (const GammaSample& g : curve.samples)
    worst = std::max(worst, std::abs(section.plane.signed_distance(g.gamma_point)));
  for (const Vec& b : section.boundary_samples)
    worst = std::max(worst, cone.boundary_defect(a - b));
  return worst;
}

}  // namespace conelab
