#include "hvol/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hvol/errors.hpp"

namespace hvol {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw InputError("expected a JSON object at the top level");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing required field \"") + key + "\"");
  return *it;
}

double number_at(const Json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(where + ": not a finite number");
  return x;
}

int integer_at(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<int>();
}

std::vector<std::vector<int>> faces_at(const Json& j) {
  const Json& faces = require(j, "faces");
  if (!faces.is_array() || faces.empty()) throw InputError("faces: expected a non-empty array");
  std::vector<std::vector<int>> out;
  for (size_t f = 0; f < faces.size(); ++f) {
    const std::string where = "faces[" + std::to_string(f) + "]";
    if (!faces[f].is_array()) throw InputError(where + ": expected an array of vertex ids");
    std::vector<int> cyc;
    for (size_t i = 0; i < faces[f].size(); ++i)
      cyc.push_back(integer_at(faces[f][i], where + "[" + std::to_string(i) + "]"));
    out.push_back(cyc);
  }
  return out;
}

Json witness_json(const Witness& w, const AbstractPolyhedron& C) {
  Json j;
  j["kind"] = w.kind;
  Json edges = Json::array();
  for (int e : w.edges) edges.push_back(C.edge_name(e));
  j["edges"] = edges;
  j["vertices"] = w.vertices;
  j["faces"] = w.faces;
  return j;
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot open " + path, false);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimplexInput parse_simplex(const Json& j) {
  SimplexInput in;
  in.dimension = integer_at(require(j, "dimension"), "dimension");
  if (in.dimension < 2) throw InputError("dimension: must be >= 2");
  if (auto it = j.find("curvature"); it != j.end()) {
    if (!it->is_string() || (*it != "spherical" && *it != "hyperbolic"))
      throw InputError("curvature: expected \"spherical\" or \"hyperbolic\"");
    in.curvature = it->get<std::string>();
  }
  const Json& angles = require(j, "angles");
  if (!angles.is_array()) throw InputError("angles: expected an array");
  const size_t expected = static_cast<size_t>(in.dimension) * (in.dimension + 1) / 2;
  if (angles.size() != expected) {
    throw InputError("angles: expected " + std::to_string(expected) + " entries for dimension " +
                     std::to_string(in.dimension) + ", got " + std::to_string(angles.size()));
  }
  in.angles.resize(static_cast<Eigen::Index>(expected));
  for (size_t k = 0; k < expected; ++k) {
    const std::string where = "angles[" + std::to_string(k) + "]";
    const double a = number_at(angles[k], where);
    if (!(a > 0.0 && a < std::numbers::pi)) {
      std::ostringstream os;
      os.precision(17);
      os << where << " = " << a << " is outside (0, pi)";
      throw InputError(os.str());
    }
    in.angles[static_cast<Eigen::Index>(k)] = a;
  }
  return in;
}

PolyhedronGeometry<double> parse_polyhedron(const Json& j) {
  const Json& model = require(j, "model");
  if (!model.is_string() || (model != "hyperboloid" && model != "klein"))
    throw InputError("model: expected \"hyperboloid\" or \"klein\"");
  const bool klein = model == "klein";
  const Json& verts = require(j, "vertices");
  if (!verts.is_array() || verts.empty()) throw InputError("vertices: expected a non-empty array");
  PolyhedronGeometry<double> g;
  for (size_t i = 0; i < verts.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const size_t dim = klein ? 3 : 4;
    if (!verts[i].is_array() || verts[i].size() != dim)
      throw InputError(where + ": expected " + std::to_string(dim) + " coordinates");
    if (klein) {
      Eigen::Vector3d k;
      for (int d = 0; d < 3; ++d) k[d] = number_at(verts[i][d], where);
      if (!(k.squaredNorm() < 1.0)) throw InputError(where + ": Klein point is not inside the unit ball");
      g.vertices.push_back(from_klein<double>(k).coords());
    } else {
      MVector<double> v;
      for (int d = 0; d < 4; ++d) v[d] = number_at(verts[i][d], where);
      g.vertices.push_back(v);
    }
  }
  g.faces = faces_at(j);
  for (size_t f = 0; f < g.faces.size(); ++f)
    for (int idx : g.faces[f])
      if (idx < 0 || idx >= static_cast<int>(g.vertices.size()))
        throw InputError("faces[" + std::to_string(f) + "]: vertex index " + std::to_string(idx) + " out of range");
  return g;
}

AbstractInput parse_abstract(const Json& j) {
  AbstractInput in;
  in.faces = faces_at(j);
  const Json& mode = require(j, "mode");
  if (mode == "andreev")
    in.mode = WeightMode::Andreev;
  else if (mode == "bao-bonahon")
    in.mode = WeightMode::BaoBonahon;
  else
    throw InputError("mode: expected \"andreev\" or \"bao-bonahon\"");
  const Json& w = require(j, "weights");
  if (!w.is_object()) throw InputError("weights: expected an object keyed by \"a-b\"");
  for (const auto& [key, value] : w.items()) {
    const std::string where = "weights[\"" + key + "\"]";
    const auto dash = key.find('-');
    int a = -1, b = -1;
    try {
      if (dash == std::string::npos) throw std::invalid_argument(key);
      size_t used_a = 0, used_b = 0;
      a = std::stoi(key.substr(0, dash), &used_a);
      b = std::stoi(key.substr(dash + 1), &used_b);
      if (used_a != dash || used_b != key.size() - dash - 1) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw InputError(where + ": key must look like \"a-b\" with integer vertex ids");
    }
    in.weights[{a, b}] = number_at(value, where);
  }
  return in;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw Error("InternalError", "CSV row has the wrong number of fields", false);
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ += ',';
    out_ += csv_field(fields[i]);
  }
  out_ += "\r\n";
}

Json json_number(double v) { return std::isfinite(v) ? Json(v + 0.0) : Json(nullptr); }

Json to_json(const CheckReport& r, const AbstractPolyhedron& C) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["accepted"] = r.accepted;
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    Json x;
    x["condition"] = v.condition;
    x["witness"] = witness_json(v.witness, C);
    x["lhs"] = v.lhs;
    x["relation"] = v.relation;
    x["bound"] = v.bound;
    x["slack"] = v.slack;
    vs.push_back(x);
  }
  j["violations"] = vs;
  if (r.mode == WeightMode::Andreev) {
    j["prismatic_3_circuits"] = r.prismatic_3;
    j["prismatic_4_circuits"] = r.prismatic_4;
  } else {
    j["min_circuit_weight"] = json_number(r.min_circuit_weight);
    j["min_nonelementary_circuit_weight"] = json_number(r.min_nonelementary_circuit_weight);
    j["min_path_weight"] = json_number(r.min_path_weight);
  }
  return j;
}

Json to_json(const SlackReport& r, const AbstractPolyhedron& C) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["minimum"] = json_number(r.minimum);
  j["note"] = r.note;
  Json fam = Json::array();
  for (const auto& f : r.families) {
    Json x;
    x["family"] = f.family;
    x["slack"] = json_number(f.slack);
    x["witness"] = witness_json(f.witness, C);
    fam.push_back(x);
  }
  j["families"] = fam;
  if (r.mode == WeightMode::BaoBonahon) {
    j["min_circuit_excess"] = json_number(r.min_circuit_excess);
    j["min_nonelementary_excess"] = json_number(r.min_nonelementary_excess);
    j["min_path_excess"] = json_number(r.min_path_excess);
  }
  return j;
}

Json to_json(const TrialReport& r) {
  Json j;
  j["parameter"] = r.parameter;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["rejected"] = r.rejected;
  j["max_ratio"] = r.max_ratio;
  j["bound"] = r.bound;
  return j;
}

Json to_json(const BeltReport& r) {
  Json j;
  j["N"] = r.N;
  j["rho"] = r.rho;
  j["t"] = r.t;
  j["k"] = r.k;
  j["face_bound"] = r.face_bound;
  j["faces"] = r.faces;
  j["edges"] = r.edges;
  j["exterior_sum"] = r.exterior_sum;
  j["excess"] = r.excess;
  j["bound"] = r.bound;
  j["turning_angles"] = r.turning_angles;
  j["curvature"] = r.curvature;
  j["curvature_bound_rho_N"] = r.curvature_bound_rho_N;
  j["curvature_bound_rho_2N"] = r.curvature_bound_rho_2N;
  Json cs;
  cs["exterior_angles"] = r.cross_section.exterior_angles;
  cs["angle_sum"] = r.cross_section.angle_sum;
  cs["r_max"] = r.cross_section.r_max;
  cs["bound"] = r.cross_section.bound;
  cs["max_cosh_distance"] = r.cross_section.max_cosh_distance;
  cs["cosh_bound"] = r.cross_section.cosh_bound;
  j["cross_section"] = cs;
  j["link_gap"] = r.link_gap;
  j["link_bound"] = r.link_bound;
  j["proof_bound"] = r.proof_bound;
  return j;
}

}  // namespace hvol
