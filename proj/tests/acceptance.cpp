// Acceptance gate: ten numbered end-to-end checks, one printed line each.
// Exit code 0 iff every criterion passes.
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "conelab/conelab.hpp"

#ifndef CONE_LAB_BIN
#error "CONE_LAB_BIN must point at the cone-lab executable"
#endif

using namespace conelab;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// 1. For seeded quadratic cones, every boundary-intersection sample lies on
//    the closed-form hyperplane within 1e-8 of the curve diameter.
bool criterion1(std::string& detail) {
  const int n = 20;
  std::vector<double> worst(n, 0.0);
  parallel_for(n, [&](int i) {
    int dim = 3 + i % 4;  // five cones in each of dims 3..6
    ConeSpec cone = make_affine_ellipsoidal(dim, 7000 + i);
    std::vector<Vec> as = sample_interior_points(cone, 10, 7100 + i);
    double w = 0.0;
    for (std::size_t k = 0; k < as.size(); ++k) {
      GammaCurve curve = gamma_curve(cone, as[k], 64, derive_seed(7200 + i, k));
      Hyperplane h = analytic_fbi_hyperplane(cone, curve.a);
      std::vector<Vec> pts;
      pts.reserve(curve.samples.size());
      for (const GammaSample& s : curve.samples) pts.push_back(s.gamma_point);
      double diam = diameter_of(pts);
      for (const Vec& g : pts) w = std::max(w, std::abs(h.signed_distance(g)) / diam);
    }
    worst[i] = w;
  });
  double w = *std::max_element(worst.begin(), worst.end());
  if (w <= 1e-8) return true;
  detail = "max |signed distance| / diameter = " + fmt(w);
  return false;
}

std::vector<ConeSpec> all_family_cones() {
  return {make_lorentz(3),
          make_lorentz(5),
          make_affine_ellipsoidal(4, 41),
          make_kgon(3),
          make_kgon(6),
          make_lp_ball(1.0, 24),
          make_lp_ball(4.0, 24),
          make_perturbed_ellipsoidal(0.0, 32, 11),
          make_perturbed_ellipsoidal(0.3, 32, 11),
          make_simplicial(4, 17)};
}

// ---------------------------------------------------------------------------
// 2. Central symmetry of the boundary-intersection curve holds on every
//    family, ellipsoidal and polyhedral alike.
bool criterion2(std::string& detail) {
  std::vector<ConeSpec> cones = all_family_cones();
  const int n = static_cast<int>(cones.size());
  std::vector<double> worst(n, 0.0);
  parallel_for(n, [&](int i) {
    std::vector<Vec> as = sample_interior_points(cones[i], 10, 7300 + i);
    double w = 0.0;
    for (std::size_t k = 0; k < as.size(); ++k) {
      GammaCurve curve = gamma_curve(cones[i], as[k], 64, derive_seed(7400 + i, k));
      w = std::max(w, gamma_central_symmetry_check(cones[i], curve, 1e-8));
    }
    worst[i] = w;
  });
  double w = *std::max_element(worst.begin(), worst.end());
  if (w <= 1e-8) return true;
  detail = "max symmetry defect = " + fmt(w);
  return false;
}

// ---------------------------------------------------------------------------
// 3. Chord scales are strictly inside (0, 1/lambda), every curve point lies
//    on both cone boundaries at 1e-8, and the 2D case gives scale 1/2.
bool criterion3(std::string& detail) {
  std::vector<ConeSpec> cones = all_family_cones();
  const int n = static_cast<int>(cones.size());
  std::vector<std::string> errs(n);
  parallel_for(n, [&](int i) {
    std::vector<Vec> as = sample_interior_points(cones[i], 10, 7500 + i);
    for (std::size_t k = 0; k < as.size(); ++k) {
      GammaCurve curve = gamma_curve(cones[i], as[k], 64, derive_seed(7600 + i, k));
      for (const GammaSample& s : curve.samples) {
        if (!(s.scale > 0.0) || !(s.scale * s.lambda < 1.0)) {
          errs[i] = "scale " + fmt(s.scale) + " outside (0, 1/lambda)";
          return;
        }
        double d1 = cones[i].boundary_defect(s.gamma_point);
        double d2 = cones[i].boundary_defect(curve.a - s.gamma_point);
        if (d1 > 1e-8 || d2 > 1e-8) {
          errs[i] = "boundary defects " + fmt(d1) + ", " + fmt(d2);
          return;
        }
      }
    }
  });
  for (int i = 0; i < n; ++i)
    if (!errs[i].empty()) {
      detail = "cone " + std::to_string(i) + ": " + errs[i];
      return false;
    }

  GammaCurve flat = gamma_curve(make_lorentz(2), Vec{1.0, 0.0}, 2, 1);
  if (flat.samples.size() != 2) {
    detail = "2D curve has " + std::to_string(flat.samples.size()) + " samples";
    return false;
  }
  for (const GammaSample& s : flat.samples)
    if (std::abs(s.scale - 0.5) > 1e-12) {
      detail = "2D scale = " + fmt(s.scale);
      return false;
    }
  return true;
}

// Shared 13-cone equivalence run used by criteria 4 and 5.
const ExperimentResult& matrix_result() {
  static std::optional<ExperimentResult> cached;
  if (!cached) {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::EquivalenceMatrix;
    cfg.family_specs = {"affine-ellipsoidal:3:count=2",
                        "affine-ellipsoidal:4",
                        "affine-ellipsoidal:5",
                        "affine-ellipsoidal:6",
                        "kgon:3:k=3",
                        "kgon:3:k=4",
                        "kgon:3:k=5",
                        "kgon:3:k=6",
                        "kgon:3:k=7",
                        "kgon:3:k=8",
                        "lp-ball:3:p=1",
                        "lp-ball:3:p=4"};
    cfg.seed = 2026;
    cfg.samples = 64;
    cfg.interior_points = 5;
    cached = run_experiment(cfg);
  }
  return *cached;
}

// ---------------------------------------------------------------------------
// 4. Equivalence matrix: the flat-intersection predicate agrees with the
//    ellipsoid fit on all 13 cones; on the square cone the axis point is
//    flat while a generic point is not.
bool criterion4(std::string& detail) {
  const ExperimentResult& res = matrix_result();
  if (res.exit_code != 0) {
    detail = "matrix exit code " + std::to_string(res.exit_code);
    return false;
  }
  const json& rows = res.report["rows"];
  if (rows.size() != 13) {
    detail = "expected 13 rows, got " + std::to_string(rows.size());
    return false;
  }
  for (const auto& row : rows)
    if (row["fbi_pass"].get<bool>() != row["is_ellipsoidal_fit"].get<bool>()) {
      detail = "fbi/fit mismatch on " + row["cone_id"].get<std::string>();
      return false;
    }

  ConeSpec square = make_kgon(4);
  double axis = fbi_defect(square, square.deep_direction(), 64, 1e-8, 5).flatness_defect;
  double generic = fbi_defect(square, Vec{1.0, 0.3, 0.1}, 64, 1e-8, 5).flatness_defect;
  if (axis > 1e-8) {
    detail = "axis-point flatness defect = " + fmt(axis);
    return false;
  }
  if (generic < 1e-3) {
    detail = "generic-point flatness defect = " + fmt(generic);
    return false;
  }
  return true;
}

// Independent radial oracle for the equilateral-triangle section: exact
// ray/segment intersections against the polygon, dense in angle.
double triangle_defect_oracle(const ConeSpec& tri, double offset, int angles) {
  std::vector<std::array<double, 2>> verts;
  for (const Vec& r : tri.rays())
    verts.push_back({offset * r[1] / r[0], offset * r[2] / r[0]});
  double cx = 0.0, cy = 0.0;
  for (const auto& v : verts) {
    cx += v[0] / verts.size();
    cy += v[1] / verts.size();
  }
  auto radial = [&](double ux, double uy) {
    double best = 0.0;
    for (std::size_t j = 0; j < verts.size(); ++j) {
      const auto& p = verts[j];
      const auto& q = verts[(j + 1) % verts.size()];
      double ex = q[0] - p[0], ey = q[1] - p[1];
      double det = ux * (-ey) - uy * (-ex);
      if (std::abs(det) < 1e-14) continue;
      double bx = p[0] - cx, by = p[1] - cy;
      double s = (bx * (-ey) - by * (-ex)) / det;
      double w = (ux * by - uy * bx) / det;
      if (s > 0.0 && w >= -1e-12 && w <= 1.0 + 1e-12) best = std::max(best, s);
    }
    return best;
  };
  double worst = 0.0;
  for (int k = 0; k < angles; ++k) {
    double th = 2.0 * M_PI * k / angles;
    double f = radial(std::cos(th), std::sin(th));
    double b = radial(-std::cos(th), -std::sin(th));
    worst = std::max(worst, std::abs(f - b) / (f + b));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// 5. Equivalence matrix: the symmetric-section predicate agrees with the
//    ellipsoid fit; the equilateral-triangle defect is 1/3 on base-parallel
//    sections, confirmed by dense independent sampling.
bool criterion5(std::string& detail) {
  const ExperimentResult& res = matrix_result();
  for (const auto& row : res.report["rows"])
    if (row["css_pass"].get<bool>() != row["is_ellipsoidal_fit"].get<bool>()) {
      detail = "css/fit mismatch on " + row["cone_id"].get<std::string>();
      return false;
    }

  ConeSpec tri = make_kgon(3);
  double lib_max = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    Section s = section_of(tri, Hyperplane(Vec{1.0, 0.0, 0.0}, t), 64, 9);
    lib_max = std::max(lib_max, symmetry_defect(s, 256));
  }
  double oracle = triangle_defect_oracle(tri, 1.0, 4096);
  if (std::abs(oracle - 1.0 / 3.0) > 1e-3) {
    detail = "oracle defect = " + fmt(oracle);
    return false;
  }
  if (lib_max < 0.2 || std::abs(lib_max - 1.0 / 3.0) > 1e-2) {
    detail = "triangle defect = " + fmt(lib_max);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Chord ratios through section centroids stay inside [1/(n+1), n/(n+1)]
//    on 50 random polygon/polytope sections; triangle medians attain both
//    endpoints.
bool criterion6(std::string& detail) {
  struct Job {
    ConeSpec cone;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int i = 0; i < 20; ++i) jobs.push_back({make_random_polygon(5 + i % 6, 300 + i), 400u + i});
  for (int i = 0; i < 15; ++i) jobs.push_back({make_simplicial(4, 500 + i), 600u + i});
  for (int i = 0; i < 15; ++i) jobs.push_back({make_simplicial(5, 700 + i), 800u + i});
  const int n = static_cast<int>(jobs.size());
  std::vector<int> violations(n, 0);
  std::vector<double> lo(n, 1.0), hi(n, 0.0);
  parallel_for(n, [&](int i) {
    Rng rng(jobs[i].seed);
    Vec normal = sample_dual_normal(jobs[i].cone, rng);
    Section s = section_of(jobs[i].cone,
                           Hyperplane(normal, dot(normal, jobs[i].cone.deep_direction())), 32,
                           jobs[i].seed + 1);
    HammerReport rep = hammer_check(s, 256, 1e-6, jobs[i].seed + 2);
    violations[i] = rep.violations;
    lo[i] = rep.min_mu;
    hi[i] = rep.max_mu;
  });
  int total = 0;
  for (int v : violations) total += v;
  if (total != 0) {
    detail = std::to_string(total) + " chord-ratio violations";
    return false;
  }

  ConeSpec tri = make_kgon(3);
  Section s = section_of(tri, Hyperplane(Vec{1.0, 0.0, 0.0}, 1.0), 64, 4);
  Vec c2 = s.to_plane(s.centroid);
  std::vector<Vec> medians;
  for (const Vec& r : tri.rays()) {
    Vec vertex = (s.plane.offset / dot(s.plane.normal, r)) * r;
    Vec toward = normalized(s.to_plane(vertex) - c2);
    medians.push_back(toward);         // centroid -> vertex: mu = 2/3
    medians.push_back(-1.0 * toward);  // centroid -> edge midpoint: mu = 1/3
  }
  HammerReport rep = hammer_check(s, 64, 1e-6, 3, &medians);
  if (rep.violations != 0 || std::abs(rep.min_mu - 1.0 / 3.0) > 1e-6 ||
      std::abs(rep.max_mu - 2.0 / 3.0) > 1e-6) {
    detail = "median ratios [" + fmt(rep.min_mu) + ", " + fmt(rep.max_mu) + "]";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 7. The centroid-section search converges (relative residual <= 1e-6) on 30
//    seeded targets across ellipsoidal and polyhedral cones in dims 3..5;
//    an axis target returns the axis-normal plane.
bool criterion7(std::string& detail) {
  struct Target {
    ConeSpec cone;
    Vec p;
  };
  std::vector<Target> targets;
  auto add = [&](const ConeSpec& cone, std::uint64_t seed) {
    for (const Vec& p : sample_interior_points(cone, 5, seed)) targets.push_back({cone, p});
  };
  add(make_affine_ellipsoidal(3, 901), 911);
  add(make_affine_ellipsoidal(4, 902), 912);
  add(make_affine_ellipsoidal(5, 903), 913);
  add(make_kgon(5), 914);
  add(make_simplicial(4, 904), 915);
  add(make_simplicial(5, 905), 916);
  const int n = static_cast<int>(targets.size());
  std::vector<double> residuals(n, std::numeric_limits<double>::infinity());
  parallel_for(n, [&](int i) {
    CentroidSearchOptions opts;
    opts.seed = derive_seed(920, i);
    try {
      residuals[i] = find_centroid_section(targets[i].cone, targets[i].p, 1e-6, opts).residual;
    } catch (const SearchBudgetExhausted& e) {
      residuals[i] = e.best_residual;
    }
  });
  for (int i = 0; i < n; ++i)
    if (!(residuals[i] <= 1e-6)) {
      detail = "target " + std::to_string(i) + " residual = " + fmt(residuals[i]);
      return false;
    }
  if (n != 30) {
    detail = "expected 30 targets, got " + std::to_string(n);
    return false;
  }

  CentroidSearchOptions opts;
  opts.seed = 921;
  CentroidSearchResult axis = find_centroid_section(make_lorentz(3), Vec{2.0, 0.0, 0.0}, 1e-6, opts);
  double c = std::min(1.0, std::abs(axis.section.plane.normal[0]));
  double angle = std::acos(c);
  if (angle > 1e-6) {
    detail = "axis-normal angle = " + fmt(angle) + " rad";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. Symmetric sections reproduce the two-cone intersection boundary within
//    1e-7: 20 ellipsoidal cases plus the square-cone parallel section.
bool criterion8(std::string& detail) {
  std::vector<double> defects(21, 0.0);
  parallel_for(20, [&](int i) {
    int dim = 3 + i % 3;
    ConeSpec cone = make_affine_ellipsoidal(dim, 1200 + i);
    Vec p = sample_interior_points(cone, 2, 1300 + i)[i % 2];
    Vec qp = cone.Q() * p;  // sections with this normal are symmetric about p
    Section s = section_of(cone, Hyperplane(qp, dot(qp, p)), 64, 1400 + i);
    defects[i] = section_boundary_equality(cone, s, 1e-6);
  });
  ConeSpec square = make_kgon(4);
  Section sq = section_of(square, Hyperplane(Vec{1.0, 0.0, 0.0}, 1.0), 64, 5);
  defects[20] = section_boundary_equality(square, sq, 1e-6);
  double w = *std::max_element(defects.begin(), defects.end());
  if (w <= 1e-7) return true;
  detail = "max boundary-equality defect = " + fmt(w);
  return false;
}

// ---------------------------------------------------------------------------
// 9. Inscribed parallelograms on 20 seeded 2D sections: all four vertices on
//    the section boundary within 1e-9, diagonal midpoints within 1e-9.
bool criterion9(std::string& detail) {
  struct Job {
    ConeSpec cone;
    Hyperplane plane;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  ConeSpec lorentz = make_lorentz(3);
  jobs.push_back({lorentz, Hyperplane(Vec{1.0, 0.0, 0.0}, 1.0), 21});
  jobs.push_back({lorentz, Hyperplane(Vec{1.0, 0.0, 0.0}, 2.0), 22});
  for (int i = 0; i < 2; ++i) {
    Rng rng(23u + i);
    Vec normal = sample_dual_normal(lorentz, rng);
    jobs.push_back({lorentz, Hyperplane(normal, dot(normal, lorentz.deep_direction())), 25u + i});
  }
  for (int i = 0; i < 6; ++i) {
    ConeSpec cone = make_affine_ellipsoidal(3, 1500 + i);
    Rng rng(1510u + i);
    Vec normal = sample_dual_normal(cone, rng);
    jobs.push_back({cone, Hyperplane(normal, dot(normal, cone.deep_direction())), 1520u + i});
  }
  ConeSpec tri = make_kgon(3);
  jobs.push_back({tri, Hyperplane(Vec{1.0, 0.0, 0.0}, 1.0), 27});
  jobs.push_back({tri, Hyperplane(Vec{1.0, 0.0, 0.0}, 2.0), 28});
  for (int i = 0; i < 8; ++i) {
    ConeSpec cone = make_random_polygon(5 + i % 5, 1600 + i);
    Rng rng(1610u + i);
    Vec normal = sample_dual_normal(cone, rng);
    jobs.push_back({cone, Hyperplane(normal, dot(normal, cone.deep_direction())), 1620u + i});
  }

  const int n = static_cast<int>(jobs.size());
  std::vector<std::string> errs(n);
  parallel_for(n, [&](int i) {
    Section s = section_of(jobs[i].cone, jobs[i].plane, 64, jobs[i].seed);
    std::array<Vec, 4> q = inscribed_parallelogram(s);
    for (const Vec& v : q) {
      double bd = jobs[i].cone.boundary_defect(v);
      double pd = std::abs(s.plane.signed_distance(v));
      if (bd > 1e-9 || pd > 1e-9) {
        errs[i] = "vertex off boundary: cone defect " + fmt(bd) + ", plane " + fmt(pd);
        return;
      }
    }
    Vec m1 = 0.5 * (q[0] + q[2]);
    Vec m2 = 0.5 * (q[1] + q[3]);
    if (distance(m1, m2) > 1e-9)
      errs[i] = "diagonal midpoints differ by " + fmt(distance(m1, m2));
  });
  if (n != 20) {
    detail = "expected 20 sections, got " + std::to_string(n);
    return false;
  }
  for (int i = 0; i < n; ++i)
    if (!errs[i].empty()) {
      detail = "section " + std::to_string(i) + ": " + errs[i];
      return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// 10. Rerunning every experiment with an identical config writes
//     byte-identical JSON/CSV (and trace), verified by bytes and hash.
bool criterion10(std::string& detail) {
  struct Cmd {
    std::string name;
    std::string args;
    bool trace;
  };
  const std::vector<Cmd> cmds = {
      {"equivalence-matrix", "--family affine-ellipsoidal:3 --family kgon:3:k=4", false},
      {"fbi-sweep", "--family lorentz:3", false},
      {"css-sweep", "--family kgon:3:k=5", false},
      {"gamma-dump", "--family lorentz:4", false},
      {"hammer-stress", "--family simplicial:4", false},
      {"centroid-search", "--family lorentz:3", true},
  };
  for (const Cmd& cmd : cmds) {
    std::array<std::string, 2> reports, csvs, traces;
    std::array<int, 2> codes{};
    for (int r = 0; r < 2; ++r) {
      std::string tag = "acc10_" + cmd.name + "_" + std::to_string(r);
      std::string out = tag + ".json", csv = tag + ".csv", trace = tag + "_trace.json";
      std::string line = std::string(CONE_LAB_BIN) + " " + cmd.name + " " + cmd.args +
                         " --seed 7 --samples 16 --interior-points 2 --out " + out + " --csv " +
                         csv;
      if (cmd.trace) line += " --trace " + trace;
      line += " > /dev/null 2>&1";
      int rc = std::system(line.c_str());
      codes[r] = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
      auto jr = read_file(out), cr = read_file(csv);
      if (!jr || !cr) {
        detail = cmd.name + ": missing output files";
        return false;
      }
      reports[r] = *jr;
      csvs[r] = *cr;
      if (cmd.trace) {
        auto tr = read_file(trace);
        if (!tr) {
          detail = cmd.name + ": missing trace file";
          return false;
        }
        traces[r] = *tr;
        std::remove(trace.c_str());
      }
      std::remove(out.c_str());
      std::remove(csv.c_str());
    }
    if (codes[0] != 0 || codes[1] != 0) {
      detail = cmd.name + ": exit codes " + std::to_string(codes[0]) + ", " +
               std::to_string(codes[1]);
      return false;
    }
    if (fnv1a(reports[0]) != fnv1a(reports[1]) || reports[0] != reports[1]) {
      detail = cmd.name + ": JSON reports differ between reruns";
      return false;
    }
    if (fnv1a(csvs[0]) != fnv1a(csvs[1]) || csvs[0] != csvs[1]) {
      detail = cmd.name + ": CSV summaries differ between reruns";
      return false;
    }
    if (cmd.trace && (fnv1a(traces[0]) != fnv1a(traces[1]) || traces[0] != traces[1])) {
      detail = cmd.name + ": traces differ between reruns";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "boundary-intersection samples lie on the closed-form hyperplane", criterion1},
      {2, "boundary-intersection curves are centrally symmetric on every family", criterion2},
      {3, "chord scales strict in (0, 1/lambda), dual boundary membership, 2D scale 1/2",
       criterion3},
      {4, "flat-intersection predicate matches the ellipsoid fit; axis vs generic point",
       criterion4},
      {5, "symmetric-section predicate matches the ellipsoid fit; triangle defect 1/3",
       criterion5},
      {6, "centroid chord ratios stay inside [1/(n+1), n/(n+1)]; medians attain both",
       criterion6},
      {7, "centroid-section search converges on 30 targets; axis target is axis-normal",
       criterion7},
      {8, "symmetric sections reproduce the intersection boundary", criterion8},
      {9, "inscribed parallelograms: vertices on boundary, diagonals bisect", criterion9},
      {10, "identical configs rerun to byte-identical reports", criterion10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (ok)
      std::printf("[PASS] criterion %d: %s\n", c.id, c.label);
    else
      std::printf("[FAIL] criterion %d: %s (%s)\n", c.id, c.label, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
