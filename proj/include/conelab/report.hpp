#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "conelab/centroid_section.hpp"
#include "conelab/characterize.hpp"
#include "conelab/cone_io.hpp"
#include "conelab/families.hpp"
#include "conelab/parallel.hpp"

namespace conelab {

enum class Experiment {
  FbiSweep,
  CssSweep,
  EquivalenceMatrix,
  GammaDump,
  HammerStress,
  CentroidSearch,
};

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::FbiSweep: return "fbi-sweep";
    case Experiment::CssSweep: return "css-sweep";
    case Experiment::EquivalenceMatrix: return "equivalence-matrix";
    case Experiment::GammaDump: return "gamma-dump";
    case Experiment::HammerStress: return "hammer-stress";
    default: return "centroid-search";
  }
}

inline Experiment experiment_from_string(const std::string& s) {
  if (s == "fbi-sweep") return Experiment::FbiSweep;
  if (s == "css-sweep") return Experiment::CssSweep;
  if (s == "equivalence-matrix") return Experiment::EquivalenceMatrix;
  if (s == "gamma-dump") return Experiment::GammaDump;
  if (s == "hammer-stress") return Experiment::HammerStress;
  if (s == "centroid-search") return Experiment::CentroidSearch;
  throw InvalidInput("unknown experiment '" + s + "'");
}

struct ExperimentConfig {
  Experiment experiment = Experiment::EquivalenceMatrix;
  std::string cone_file;                  // --cone (exclusive with families)
  std::vector<std::string> family_specs;  // --family, repeatable
  std::uint64_t seed = 1;
  int samples = 64;
  int interior_points = 5;
  double tol = 1e-6;
  double pass_threshold = 1e-6;  // defect <= pass  -> predicate true
  double fail_threshold = 1e-4;  // defect >= fail  -> predicate false
  std::string out_path;
  std::string csv_path;
  std::string trace_path;
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.samples < 8) throw InvalidInput("config: samples must be >= 8");
  if (cfg.interior_points < 1) throw InvalidInput("config: interior-points must be >= 1");
  if (!(cfg.tol > 0.0)) throw InvalidInput("config: tol must be positive");
  if (!(cfg.pass_threshold > 0.0) || !(cfg.fail_threshold > cfg.pass_threshold))
    throw InvalidInput("config: thresholds must satisfy 0 < pass < fail");
  if (cfg.cone_file.empty() && cfg.family_specs.empty())
    throw InvalidInput("config: provide --cone or at least one --family");
  if (!cfg.cone_file.empty() && !cfg.family_specs.empty())
    throw InvalidInput("config: --cone and --family are mutually exclusive");
}

inline json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = to_string(cfg.experiment);
  j["cone"] = cfg.cone_file.empty() ? json(nullptr) : json(cfg.cone_file);
  j["families"] = cfg.family_specs;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["interior_points"] = cfg.interior_points;
  j["tol"] = cfg.tol;
  j["pass_threshold"] = cfg.pass_threshold;
  j["fail_threshold"] = cfg.fail_threshold;
  return j;
}

struct NamedCone {
  std::string id;
  ConeSpec cone;
};

inline std::vector<NamedCone> resolve_cones(const ExperimentConfig& cfg) {
  std::vector<NamedCone> out;
  if (!cfg.cone_file.empty()) {
    std::string id = cfg.cone_file;
    auto slash = id.find_last_of("/\\");
    if (slash != std::string::npos) id = id.substr(slash + 1);
    auto dot = id.find_last_of('.');
    if (dot != std::string::npos && dot > 0) id = id.substr(0, dot);
    out.push_back({id, load_cone_file(cfg.cone_file)});
    return out;
  }
  for (const std::string& text : cfg.family_specs) {
    FamilySpec spec = parse_family_spec(text);
    std::vector<ConeSpec> cones = generate_family(spec.kind, spec.dim, spec.params, cfg.seed);
    for (std::size_t i = 0; i < cones.size(); ++i)
      out.push_back({spec.text + "#" + std::to_string(i), std::move(cones[i])});
  }
  return out;
}

// Ellipsoid detector for a whole cone: fit a quadric to boundary samples of
// the canonical bounded section (enough samples for the design matrix plus
// slack).
inline EllipsoidFit canonical_section_fit(const ConeSpec& cone, int min_samples,
                                          std::uint64_t seed, double residual_threshold) {
  const Vec& n = cone.deep_dual_normal();
  Section s = section_of(cone, Hyperplane(n, dot(n, cone.deep_direction())), 16, seed);
  const int m = s.section_dim();
  const int count = std::max(min_samples, 3 * detail::quadric_coeff_count(m));
  const double scale = std::max(1.0, norm(s.interior_point));
  std::vector<Vec> coords;
  coords.reserve(count);
  for (const Vec& u : sphere_directions(m, count, derive_seed(seed, 0xf17))) {
    Vec w(cone.dim());
    for (int k = 0; k < m; ++k) w += u[k] * s.basis[k];
    double t = boundary_ray_length(cone, s.centroid, w, scale);
    Vec q = (s.centroid + t * w) - s.centroid;
    Vec z(m);
    for (int k = 0; k < m; ++k) z[k] = dot(q, s.basis[k]);
    coords.push_back(z);
  }
  return fit_ellipsoid(coords, residual_threshold);
}

struct EquivalenceRow {
  std::string cone_id;
  bool is_ellipsoidal_fit = false;
  bool fbi_pass = false;
  bool css_pass = false;
  double fit_residual = 0.0;
  double fbi_defect = 0.0;  // max over sampled interior points
  double css_defect = 0.0;  // max over sampled hyperplanes
  bool inconclusive = false;
  bool agree = false;
};

inline std::vector<EquivalenceRow> run_equivalence_matrix(const ExperimentConfig& cfg,
                                                          const std::vector<NamedCone>& cones) {
  std::vector<EquivalenceRow> rows(cones.size());
  auto in_band = [&](double v) { return v > cfg.pass_threshold && v < cfg.fail_threshold; };
  parallel_for(static_cast<int>(cones.size()), [&](int i) {
    const NamedCone& nc = cones[i];
    std::uint64_t cs = derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(i));
    EquivalenceRow row;
    row.cone_id = nc.id;

    EllipsoidFit fit =
        canonical_section_fit(nc.cone, cfg.samples, derive_seed(cs, 1), cfg.pass_threshold);
    row.fit_residual = fit.residual;
    row.is_ellipsoidal_fit = fit.is_ellipsoid;

    double fbi_max = 0.0;
    for (const Vec& a : sample_interior_points(nc.cone, cfg.interior_points, derive_seed(cs, 2)))
      fbi_max = std::max(
          fbi_max,
          fbi_defect(nc.cone, a, cfg.samples, 1e-8, derive_seed(cs, 3)).flatness_defect);
    row.fbi_defect = fbi_max;
    row.fbi_pass = fbi_max <= cfg.pass_threshold;

    CSSReport css = css_sweep(nc.cone, 32, derive_seed(cs, 4), 128, 32);
    row.css_defect = css.max_symmetry_defect;
    row.css_pass = css.max_symmetry_defect <= cfg.pass_threshold;

    row.inconclusive =
        in_band(row.fit_residual) || in_band(row.fbi_defect) || in_band(row.css_defect);
    row.agree = row.is_ellipsoidal_fit == row.fbi_pass && row.fbi_pass == row.css_pass;
    rows[i] = std::move(row);
  });
  return rows;
}

struct ExperimentResult {
  json report;
  std::vector<std::array<std::string, 4>> csv_rows;  // cone_id, metric, value, status
  json trace;  // null unless the experiment produced one
  int exit_code = 0;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline json hyperplane_to_json(const Hyperplane& h) {
  json j;
  j["normal"] = vec_to_json(h.normal);
  j["offset"] = h.offset;
  return j;
}

inline std::string threshold_status(double v, const ExperimentConfig& cfg) {
  if (v <= cfg.pass_threshold) return "pass";
  if (v >= cfg.fail_threshold) return "fail";
  return "inconclusive";
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<NamedCone> cones = resolve_cones(cfg);
  ExperimentResult res;
  res.report["experiment"] = to_string(cfg.experiment);
  res.report["config"] = config_to_json(cfg);
  res.trace = nullptr;

  switch (cfg.experiment) {
    case Experiment::EquivalenceMatrix: {
      std::vector<EquivalenceRow> rows = run_equivalence_matrix(cfg, cones);
      json jrows = json::array();
      bool all_agree = true;
      std::string first_disagreement;
      for (const EquivalenceRow& r : rows) {
        json j;
        j["cone_id"] = r.cone_id;
        j["is_ellipsoidal_fit"] = r.is_ellipsoidal_fit;
        j["fbi_pass"] = r.fbi_pass;
        j["css_pass"] = r.css_pass;
        j["fit_residual"] = r.fit_residual;
        j["fbi_defect"] = r.fbi_defect;
        j["css_defect"] = r.css_defect;
        j["inconclusive"] = r.inconclusive;
        j["agree"] = r.agree;
        jrows.push_back(j);
        if (!r.agree && all_agree) {
          all_agree = false;
          first_disagreement = r.cone_id;
        }
        res.csv_rows.push_back({r.cone_id, "fit", detail::format_double(r.fit_residual),
                                r.is_ellipsoidal_fit ? "pass" : "fail"});
        res.csv_rows.push_back({r.cone_id, "fbi", detail::format_double(r.fbi_defect),
                                detail::threshold_status(r.fbi_defect, cfg)});
        res.csv_rows.push_back({r.cone_id, "css", detail::format_double(r.css_defect),
                                detail::threshold_status(r.css_defect, cfg)});
      }
      res.report["rows"] = jrows;
      res.report["all_agree"] = all_agree;
      res.report["first_disagreement"] =
          all_agree ? json(nullptr) : json(first_disagreement);
      res.exit_code = all_agree ? 0 : 1;
      break;
    }

    case Experiment::FbiSweep: {
      const int n = static_cast<int>(cones.size());
      std::vector<json> per_cone(n);
      std::vector<std::vector<std::array<std::string, 4>>> per_csv(n);
      parallel_for(n, [&](int i) {
        const NamedCone& nc = cones[i];
        std::uint64_t cs = derive_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(i));
        json jc;
        jc["cone_id"] = nc.id;
        json pts = json::array();
        double worst = 0.0;
        std::vector<Vec> as = sample_interior_points(nc.cone, cfg.interior_points, cs);
        for (std::size_t k = 0; k < as.size(); ++k) {
          FBIReport rep = fbi_defect(nc.cone, as[k], cfg.samples, 1e-8, derive_seed(cs, k));
          json jp;
          jp["a"] = detail::vec_to_json(rep.a);
          jp["affine_dim"] = rep.affine_dim;
          jp["flatness_defect"] = rep.flatness_defect;
          json spec = json::array();
          for (double s : rep.spectrum) spec.push_back(s);
          jp["spectrum"] = spec;
          jp["hyperplane"] = detail::hyperplane_to_json(rep.hyperplane);
          pts.push_back(jp);
          worst = std::max(worst, rep.flatness_defect);
          per_csv[i].push_back({nc.id, "fbi_point_" + std::to_string(k),
                                detail::format_double(rep.flatness_defect),
                                detail::threshold_status(rep.flatness_defect, cfg)});
        }
        jc["points"] = pts;
        jc["max_flatness_defect"] = worst;
        per_cone[i] = std::move(jc);
        per_csv[i].push_back({nc.id, "fbi_max", detail::format_double(worst),
                              detail::threshold_status(worst, cfg)});
      });
      json jcones = json::array();
      for (int i = 0; i < n; ++i) {
        jcones.push_back(per_cone[i]);
        for (auto& row : per_csv[i]) res.csv_rows.push_back(std::move(row));
      }
      res.report["cones"] = jcones;
      break;
    }

    case Experiment::CssSweep: {
      const int n = static_cast<int>(cones.size());
      std::vector<json> per_cone(n);
      std::vector<std::array<std::string, 4>> per_csv(n);
      parallel_for(n, [&](int i) {
        const NamedCone& nc = cones[i];
        CSSReport rep = css_sweep(nc.cone, cfg.samples,
                                  derive_seed(cfg.seed, 3000 + static_cast<std::uint64_t>(i)),
                                  128, 32);
        json jc;
        jc["cone_id"] = nc.id;
        jc["sections_tested"] = rep.sections_tested;
        jc["max_symmetry_defect"] = rep.max_symmetry_defect;
        jc["worst_hyperplane"] = detail::hyperplane_to_json(rep.worst_hyperplane);
        per_cone[i] = std::move(jc);
        per_csv[i] = {nc.id, "css_max", detail::format_double(rep.max_symmetry_defect),
                      detail::threshold_status(rep.max_symmetry_defect, cfg)};
      });
      json jcones = json::array();
      for (int i = 0; i < n; ++i) {
        jcones.push_back(per_cone[i]);
        res.csv_rows.push_back(per_csv[i]);
      }
      res.report["cones"] = jcones;
      break;
    }

    case Experiment::GammaDump: {
      json jcones = json::array();
      for (std::size_t i = 0; i < cones.size(); ++i) {
        const NamedCone& nc = cones[i];
        std::uint64_t cs = derive_seed(cfg.seed, 4000 + i);
        json jc;
        jc["cone_id"] = nc.id;
        json curves = json::array();
        std::vector<Vec> as = sample_interior_points(nc.cone, cfg.interior_points, cs);
        for (std::size_t k = 0; k < as.size(); ++k) {
          GammaCurve curve = gamma_curve(nc.cone, as[k], cfg.samples, derive_seed(cs, k));
          double defect = gamma_central_symmetry_check(nc.cone, curve, cfg.tol);
          json jcurve;
          jcurve["a_index"] = k;
          jcurve["symmetry_defect"] = defect;
          jcurve["curve"] = gamma_to_json(curve);
          curves.push_back(jcurve);
          res.csv_rows.push_back({nc.id, "gamma_symmetry_" + std::to_string(k),
                                  detail::format_double(defect),
                                  defect <= cfg.tol ? "pass" : "fail"});
        }
        jc["curves"] = curves;
        jcones.push_back(jc);
      }
      res.report["cones"] = jcones;
      break;
    }

    case Experiment::HammerStress: {
      json jrows = json::array();
      long long total_violations = 0;
      for (std::size_t i = 0; i < cones.size(); ++i) {
        const NamedCone& nc = cones[i];
        std::uint64_t cs = derive_seed(cfg.seed, 5000 + i);
        for (int k = 0; k < cfg.interior_points; ++k) {
          Rng rng(derive_seed(cs, static_cast<std::uint64_t>(k)));
          Vec normal = sample_dual_normal(nc.cone, rng);
          Section s = section_of(nc.cone, Hyperplane(normal, dot(normal, nc.cone.deep_direction())),
                                 32, derive_seed(cs, 100 + k));
          HammerReport rep = hammer_check(s, std::max(64, cfg.samples), cfg.tol,
                                          derive_seed(cs, 200 + k));
          json j;
          j["cone_id"] = nc.id;
          j["section_index"] = k;
          j["min_mu"] = rep.min_mu;
          j["max_mu"] = rep.max_mu;
          j["violations"] = rep.violations;
          j["chords"] = rep.chords;
          jrows.push_back(j);
          total_violations += rep.violations;
          res.csv_rows.push_back({nc.id, "hammer_violations_" + std::to_string(k),
                                  std::to_string(rep.violations),
                                  rep.violations == 0 ? "pass" : "fail"});
        }
      }
      res.report["rows"] = jrows;
      res.report["total_violations"] = total_violations;
      res.exit_code = total_violations == 0 ? 0 : 1;
      break;
    }

    case Experiment::CentroidSearch: {
      json jrows = json::array();
      json jtrace = json::array();
      bool all_converged = true;
      for (std::size_t i = 0; i < cones.size(); ++i) {
        const NamedCone& nc = cones[i];
        std::uint64_t cs = derive_seed(cfg.seed, 6000 + i);
        std::vector<Vec> targets = sample_interior_points(nc.cone, cfg.interior_points, cs);
        for (std::size_t k = 0; k < targets.size(); ++k) {
          CentroidSearchOptions opts;
          opts.seed = derive_seed(cs, k);
          opts.search_samples = std::max(16, cfg.samples / 2);
          opts.final_samples = std::max(32, cfg.samples);
          opts.record_trace = !cfg.trace_path.empty();
          json j;
          j["cone_id"] = nc.id;
          j["point_index"] = k;
          j["p"] = detail::vec_to_json(targets[k]);
          try {
            CentroidSearchResult r = find_centroid_section(nc.cone, targets[k], cfg.tol, opts);
            j["converged"] = true;
            j["residual"] = r.residual;
            j["normal"] = detail::vec_to_json(r.section.plane.normal);
            j["offset"] = r.section.plane.offset;
            j["starts_used"] = r.starts_used;
            j["cap_warning"] = r.cap_warning;
            res.csv_rows.push_back({nc.id, "centroid_residual_" + std::to_string(k),
                                    detail::format_double(r.residual), "pass"});
            if (opts.record_trace) {
              json jt;
              jt["cone_id"] = nc.id;
              jt["point_index"] = k;
              json starts = json::array();
              for (const auto& tr : r.trace) {
                json pts = json::array();
                for (const CentroidSearchTracePoint& tp : tr) {
                  json p;
                  p["normal"] = detail::vec_to_json(tp.normal);
                  p["f"] = tp.f;
                  pts.push_back(p);
                }
                starts.push_back(pts);
              }
              jt["starts"] = starts;
              jtrace.push_back(jt);
            }
          } catch (const SearchBudgetExhausted& e) {
            all_converged = false;
            j["converged"] = false;
            j["residual"] = e.best_residual;
            j["error"] = e.what();
            res.csv_rows.push_back({nc.id, "centroid_residual_" + std::to_string(k),
                                    detail::format_double(e.best_residual), "fail"});
          } catch (const ConsistencyError& e) {
            // The search hit tolerance on coarse sampling but the doubled
            // sampling verification disagreed; report the target as failed
            // rather than aborting the whole experiment.
            all_converged = false;
            j["converged"] = false;
            j["error"] = e.what();
            res.csv_rows.push_back(
                {nc.id, "centroid_residual_" + std::to_string(k), "nan", "fail"});
          }
          jrows.push_back(j);
        }
      }
      res.report["rows"] = jrows;
      res.report["all_converged"] = all_converged;
      if (!cfg.trace_path.empty()) res.trace = jtrace;
      res.exit_code = all_converged ? 0 : 3;
      break;
    }
  }
  return res;
}

inline std::string csv_to_string(const std::vector<std::array<std::string, 4>>& rows) {
  std::string out = "cone_id,metric,value,status\n";
  for (const auto& r : rows) out += r[0] + "," + r[1] + "," + r[2] + "," + r[3] + "\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw InvalidInput("write failed for '" + path + "'");
}

// Emits the JSON report (and CSV/trace when configured). Reruns with an
// identical config produce byte-identical files.
inline void write_outputs(const ExperimentResult& res, const ExperimentConfig& cfg) {
  if (!cfg.out_path.empty()) write_text_file(cfg.out_path, res.report.dump(2) + "\n");
  if (!cfg.csv_path.empty()) write_text_file(cfg.csv_path, csv_to_string(res.csv_rows));
  if (!cfg.trace_path.empty() && !res.trace.is_null())
    write_text_file(cfg.trace_path, res.trace.dump(2) + "\n");
}

}  // namespace conelab
