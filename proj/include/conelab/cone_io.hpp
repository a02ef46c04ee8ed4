#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "conelab/affine.hpp"
#include "conelab/cone.hpp"
#include "conelab/errors.hpp"
#include "conelab/gamma.hpp"
#include "conelab/matrix.hpp"
#include "conelab/vec.hpp"

namespace conelab {

using json = nlohmann::ordered_json;

namespace detail {

inline Vec vec_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw InvalidInput("cone file: '" + field + "' must be a nonempty array of numbers");
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.dim(); ++i) {
    if (!j[i].is_number())
      throw InvalidInput("cone file: '" + field + "' must contain numbers only");
    v[i] = j[i].get<double>();
  }
  if (!is_finite(v)) throw InvalidInput("cone file: '" + field + "' has non-finite entries");
  return v;
}

inline Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw InvalidInput("cone file: '" + field + "' must be an array of rows");
  int rows = static_cast<int>(j.size());
  Vec first = vec_from_json(j[0], field);
  Matrix m(rows, first.dim());
  for (int r = 0; r < rows; ++r) {
    Vec row = vec_from_json(j[r], field);
    if (row.dim() != m.cols)
      throw InvalidInput("cone file: '" + field + "' rows have mixed lengths");
    for (int c = 0; c < m.cols; ++c) m(r, c) = row[c];
  }
  return m;
}

inline json vec_to_json(const Vec& v) {
  json j = json::array();
  for (int i = 0; i < v.dim(); ++i) j.push_back(v[i]);
  return j;
}

inline json matrix_to_json(const Matrix& m) {
  json j = json::array();
  for (int r = 0; r < m.rows; ++r) j.push_back(vec_to_json(m.row(r)));
  return j;
}

inline void reject_unknown_fields(const json& j, const std::set<std::string>& allowed) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw InvalidInput("cone file: unknown field '" + item.key() + "'");
}

}  // namespace detail

// Cone definition object:
//   {"variant": "quadratic",  "dim": d, "Q": [[...]], "time_axis": [...]}
//   {"variant": "polyhedral", "dim": d, "rays": [[...], ...]}
//   {"variant": "basebody",   "dim": d, "base_normal": [...],
//    "base_offset": x, "base_vertices": [[...], ...]}
// Unknown fields are rejected.
inline ConeSpec cone_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("cone file: top level must be an object");
  if (!j.contains("variant") || !j["variant"].is_string())
    throw InvalidInput("cone file: missing string field 'variant'");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw InvalidInput("cone file: missing integer field 'dim'");
  const std::string variant = j["variant"].get<std::string>();
  const int dim = j["dim"].get<int>();

  auto require_field = [&](const char* name) {
    if (!j.contains(name))
      throw InvalidInput("cone file: variant '" + variant + "' requires field '" + name + "'");
  };

  if (variant == "quadratic") {
    detail::reject_unknown_fields(j, {"variant", "dim", "Q", "time_axis"});
    require_field("Q");
    require_field("time_axis");
    Matrix Q = detail::matrix_from_json(j["Q"], "Q");
    Vec t = detail::vec_from_json(j["time_axis"], "time_axis");
    if (Q.rows != dim || Q.cols != dim || t.dim() != dim)
      throw InvalidInput("cone file: 'Q'/'time_axis' shapes do not match 'dim'");
    return ConeSpec::quadratic(Q, t);
  }
  if (variant == "polyhedral") {
    detail::reject_unknown_fields(j, {"variant", "dim", "rays"});
    require_field("rays");
    Matrix R = detail::matrix_from_json(j["rays"], "rays");
    if (R.cols != dim) throw InvalidInput("cone file: ray length does not match 'dim'");
    std::vector<Vec> rays;
    rays.reserve(R.rows);
    for (int r = 0; r < R.rows; ++r) rays.push_back(R.row(r));
    return ConeSpec::polyhedral(rays);
  }
  if (variant == "basebody") {
    detail::reject_unknown_fields(j, {"variant", "dim", "base_normal", "base_offset",
                                      "base_vertices"});
    require_field("base_normal");
    require_field("base_offset");
    require_field("base_vertices");
    if (!j["base_offset"].is_number())
      throw InvalidInput("cone file: 'base_offset' must be a number");
    Vec n = detail::vec_from_json(j["base_normal"], "base_normal");
    Matrix V = detail::matrix_from_json(j["base_vertices"], "base_vertices");
    if (n.dim() != dim || V.cols != dim)
      throw InvalidInput("cone file: base data does not match 'dim'");
    std::vector<Vec> verts;
    verts.reserve(V.rows);
    for (int r = 0; r < V.rows; ++r) verts.push_back(V.row(r));
    return ConeSpec::base_body(Hyperplane(n, j["base_offset"].get<double>()), verts);
  }
  throw InvalidInput("cone file: unknown variant '" + variant + "'");
}

inline json cone_to_json(const ConeSpec& cone) {
  json j;
  j["dim"] = cone.dim();
  switch (cone.variant()) {
    case ConeVariant::Quadratic:
      j["variant"] = "quadratic";
      j["Q"] = detail::matrix_to_json(cone.Q());
      j["time_axis"] = detail::vec_to_json(cone.time_axis());
      break;
    case ConeVariant::Polyhedral: {
      j["variant"] = "polyhedral";
      json rays = json::array();
      for (const Vec& r : cone.rays()) rays.push_back(detail::vec_to_json(r));
      j["rays"] = rays;
      break;
    }
    default: {
      j["variant"] = "basebody";
      j["base_normal"] = detail::vec_to_json(cone.base_plane().normal);
      j["base_offset"] = cone.base_plane().offset;
      json verts = json::array();
      for (const Vec& v : cone.base_vertices()) verts.push_back(detail::vec_to_json(v));
      j["base_vertices"] = verts;
      break;
    }
  }
  // Re-key so "variant" leads regardless of the branch above.
  json out;
  out["variant"] = j["variant"];
  out["dim"] = j["dim"];
  for (const auto& item : j.items())
    if (item.key() != "variant" && item.key() != "dim") out[item.key()] = item.value();
  return out;
}

inline ConeSpec load_cone_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open cone file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput("cone file '" + path + "': " + e.what());
  }
  return cone_from_json(j);
}

// Gamma curve export: {"a": [...], "lambda": l,
//                      "samples": [{"x": [...], "r": [...], "mu": m, "g": [...]}]}
inline json gamma_to_json(const GammaCurve& curve) {
  json j;
  j["a"] = detail::vec_to_json(curve.a);
  j["lambda"] = curve.samples.empty() ? 1.0 : curve.samples.front().lambda;
  json samples = json::array();
  for (const GammaSample& g : curve.samples) {
    json s;
    s["x"] = detail::vec_to_json(g.base_point);
    s["r"] = detail::vec_to_json(g.opposite_point);
    s["mu"] = g.scale;
    s["g"] = detail::vec_to_json(g.gamma_point);
    samples.push_back(s);
  }
  j["samples"] = samples;
  return j;
}

}  // namespace conelab
