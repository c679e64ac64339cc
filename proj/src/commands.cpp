#include "hvol/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hvol/angle_space.hpp"
#include "hvol/degeneration.hpp"
#include "hvol/errors.hpp"
#include "hvol/gram_simplex.hpp"
#include "hvol/io.hpp"
#include "hvol/polyhedron.hpp"
#include "hvol/schlafli.hpp"

namespace hvol {

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json error_json(const std::string& name, const std::string& message) {
  Json j;
  j["error"] = name;
  j["message"] = message;
  return j;
}

std::string format_or(const RunConfig& cfg, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw InputError("--format " + f + " is not supported by '" + cfg.subcommand + "'");
}

Json load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required for '" + cfg.subcommand + "'");
  return parse_json_text(read_file(cfg.input));
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json volume_json(const VolumeResult& v) {
  Json j;
  j["value"] = v.value;
  j["error_estimate"] = v.error_estimate;
  j["panels"] = v.panels;
  j["max_depth"] = v.max_depth;
  j["anchor"] = v.anchor;
  return j;
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r_squared = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

CommandResult run_command(const RunConfig& cfg) {
  try {
    if (cfg.subcommand == "simplex") return cmd_simplex(cfg);
    if (cfg.subcommand == "validate") return cmd_validate(cfg);
    if (cfg.subcommand == "polyhedron") return cmd_polyhedron(cfg);
    if (cfg.subcommand == "degenerate") return cmd_degenerate(cfg);
    if (cfg.subcommand == "regularity") return cmd_regularity(cfg);
    if (cfg.subcommand == "lemmas") return cmd_lemmas(cfg);
    throw InputError("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const Error& e) {
    return CommandResult{e.is_domain() ? 2 : 1, dump(error_json(e.name(), e.what())), e.name() + ": " + e.what()};
  } catch (const std::exception& e) {
    return CommandResult{1, dump(error_json("InternalError", e.what())), std::string("InternalError: ") + e.what()};
  }
}

CommandResult cmd_simplex(const RunConfig& cfg) {
  format_or(cfg, "json", {"json"});
  const SimplexInput in = parse_simplex(load_input(cfg));
  const DihedralAngles angles(in.dimension, in.angles);
  const AngleGram G = build_gram(angles);
  const SimplexClass cls = classify(G);

  if (!in.curvature.empty() && cls.kind != SimplexKind::Degenerate) {
    const bool spherical = cls.kind == SimplexKind::Spherical;
    if (spherical != (in.curvature == "spherical"))
      throw Error("WrongCurvature", "angles describe a " + to_string(cls.kind) + " simplex but curvature is " +
                                        in.curvature);
  }

  Json j;
  j["dimension"] = in.dimension;
  j["angles"] = std::vector<double>(in.angles.data(), in.angles.data() + in.angles.size());
  Json c;
  c["kind"] = to_string(cls.kind);
  Json types = Json::array();
  for (auto t : cls.vertex_types) types.push_back(to_string(t));
  c["vertex_types"] = types;
  c["det"] = cls.det;
  c["signature"] = {{"positive", cls.positive}, {"negative", cls.negative}, {"zero", cls.zero}};
  j["classification"] = c;
  j["cofactors"] = matrix_json(cofactors(G));

  Json notes = Json::array();
  const bool finite = cls.kind == SimplexKind::Spherical ||
                      (cls.kind == SimplexKind::Hyperbolic && cls.all_finite());
  if (finite) {
    j["edge_lengths"] = matrix_json(edge_lengths(G));
    j["edge_lengths_truncated"] = false;
  } else if (cls.kind == SimplexKind::Hyperbolic) {
    const auto t = truncated_edge_lengths(G);
    Json rows = Json::array();
    for (const auto& row : t) {
      Json r = Json::array();
      for (const auto& e : row) r.push_back(e.defined ? json_number(e.value) : Json(nullptr));
      rows.push_back(r);
    }
    j["edge_lengths"] = rows;
    j["edge_lengths_truncated"] = true;
    notes.push_back("non-finite vertices: lengths are truncated at polar planes; null marks infinite or undefined");
  } else {
    j["edge_lengths"] = nullptr;
    j["edge_lengths_truncated"] = false;
    notes.push_back("degenerate Gram matrix: no curvature-normalized lengths");
  }

  if (in.dimension == 3 && finite) {
    const SchlafliContext ctx =
        cls.kind == SimplexKind::Spherical ? SchlafliContext::spherical() : SchlafliContext::hyperbolic();
    const Eigen::VectorXd g = schlafli_gradient(angles, ctx);
    j["schlafli_gradient"] = std::vector<double>(g.data(), g.data() + g.size());
  } else {
    j["schlafli_gradient"] = nullptr;
  }

  if (in.dimension != 3) {
    j["volume"] = nullptr;
    notes.push_back("volume is only computed in dimension 3");
  } else if (cls.kind == SimplexKind::Spherical) {
    SphericalVolumeOptions o;
    o.tol = cfg.tol;
    j["volume"] = volume_json(simplex_volume_spherical(angles, o));
  } else if (cls.kind == SimplexKind::Hyperbolic && cls.finite_or_ideal()) {
    HyperbolicVolumeOptions o;
    if (!cls.all_finite()) o.tol = std::max(cfg.tol, 1e-6);
    else o.tol = cfg.tol;
    o.anchor_check_samples = cfg.samples;
    j["volume"] = volume_json(tetra_volume_hyperbolic(angles, o));
  } else {
    j["volume"] = nullptr;
    notes.push_back(cls.kind == SimplexKind::Degenerate
                        ? "volume skipped: Euclidean (det G = 0) angles"
                        : "volume skipped: hyperideal vertices (truncated volume is not computed)");
  }
  j["notes"] = notes;
  return CommandResult{0, dump(j), {}};
}

CommandResult cmd_validate(const RunConfig& cfg) {
  format_or(cfg, "json", {"json"});
  const AbstractInput in = parse_abstract(load_input(cfg));
  const AbstractPolyhedron C = AbstractPolyhedron::from_faces(in.faces);
  const EdgeWeights w = EdgeWeights::from_labels(C, in.weights, in.mode);
  const CheckReport r = in.mode == WeightMode::Andreev ? andreev_check(C, w) : bao_bonahon_check(C, w);
  Json j;
  j["vertices"] = C.vertex_count();
  j["edges"] = C.edge_count();
  j["faces"] = C.face_count();
  j["check"] = to_json(r, C);
  j["slack"] = r.accepted ? to_json(boundary_slack(C, w), C) : Json(nullptr);
  return CommandResult{r.accepted ? 0 : 2, dump(j), {}};
}

CommandResult cmd_polyhedron(const RunConfig& cfg) {
  format_or(cfg, "json", {"json"});
  const PolyhedronGeometry<double> g = parse_polyhedron(load_input(cfg));
  const ValidationReport rep = Polyhedron<double>::validate(g);
  Json j;
  Json v;
  v["accepted"] = rep.accepted;
  v["max_planarity_residual"] = rep.max_planarity_residual;
  v["min_convexity_margin"] = json_number(rep.min_convexity_margin);
  v["vertices"] = rep.vertex_count;
  v["edges"] = rep.edge_count;
  v["faces"] = rep.face_count;
  v["euler"] = rep.euler;
  v["reoriented_faces"] = rep.reoriented_faces;
  v["failures"] = rep.failures;
  v["warnings"] = rep.warnings;
  j["validation"] = v;
  if (!rep.accepted) {
    j["geometry"] = nullptr;
    return CommandResult{2, dump(j), {}};
  }
  const auto P = Polyhedron<double>::from_geometry(g);
  Json geo;
  Json edges = Json::array();
  for (int e = 0; e < P.edge_count(); ++e) {
    const PolyEdge& E = P.edges()[e];
    edges.push_back({{"edge", std::to_string(E.a) + "-" + std::to_string(E.b)},
                     {"faces", {E.left, E.right}},
                     {"interior", P.interior_angle(e)},
                     {"exterior", P.exterior_angle(e)}});
  }
  geo["edges"] = edges;
  Json faces = Json::array();
  for (int f = 0; f < P.face_count(); ++f)
    faces.push_back({{"face", f}, {"area", P.face_area(f)}, {"cone_angle", P.cone_angle(f)}});
  geo["faces"] = faces;
  const DiameterInfo d = P.diameter();
  geo["diameter"] = {{"value", d.diameter}, {"vertices", {d.u, d.v}}, {"max_edge_length", d.max_edge_length}};
  j["geometry"] = geo;
  return CommandResult{0, dump(j), {}};
}

CommandResult cmd_degenerate(const RunConfig& cfg) {
  const std::string fmt = format_or(cfg, "csv", {"csv", "json"});
  if (cfg.tau_steps < 1) throw InputError("--tau-steps must be >= 1");
  if (cfg.k < 3) throw InputError("--k must be >= 3");
  if (!(cfg.r > 0.0)) throw InputError("--r must be positive");
  if (!(cfg.tau_min > 0.0) || cfg.tau_max < cfg.tau_min) throw InputError("need 0 < --tau-min <= --tau-max");
  std::vector<double> taus;
  for (int i = 0; i < cfg.tau_steps; ++i)
    taus.push_back(cfg.tau_steps == 1 ? cfg.tau_min
                                      : cfg.tau_min + (cfg.tau_max - cfg.tau_min) * i / (cfg.tau_steps - 1));
  std::sort(taus.begin(), taus.end());

  std::vector<DrumRow> rows;
  for (double tau : taus) rows.push_back(drum_row(cfg.k, tau, cfg.r));

  if (fmt == "json") {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json x;
      x["tau"] = row.tau;
      x["status"] = row.status;
      x["belt"] = row.belt ? to_json(*row.belt) : Json(nullptr);
      if (!row.message.empty()) x["message"] = row.message;
      arr.push_back(x);
    }
    return CommandResult{0, dump(arr), {}};
  }
  CsvWriter csv({"tau", "N", "rho", "k", "excess", "bound", "curvature", "curvature_bound_rho_N",
                 "curvature_bound_rho_2N", "polygon_sum", "polygon_bound", "cosh_max", "cosh_bound", "status"});
  for (const auto& row : rows) {
    if (!row.belt) {
      std::vector<std::string> f(14, "");
      f[0] = csv_number(row.tau);
      f[1] = std::to_string(row.N);
      f[13] = row.status + ": " + row.message;
      csv.row(f);
      continue;
    }
    const BeltReport& b = *row.belt;
    csv.row({csv_number(row.tau), std::to_string(b.N), csv_number(b.rho), std::to_string(b.k), csv_number(b.excess),
             csv_number(b.bound), csv_number(b.curvature), csv_number(b.curvature_bound_rho_N),
             csv_number(b.curvature_bound_rho_2N), csv_number(b.cross_section.angle_sum),
             csv_number(b.cross_section.bound), csv_number(b.cross_section.max_cosh_distance),
             csv_number(b.cross_section.cosh_bound), row.status});
  }
  return CommandResult{0, csv.str(), {}};
}

RegularityProbe regularity_probe(const Eigen::VectorXd& start, const Eigen::VectorXd& direction, int points,
                                 double tol) {
  if (points < 4) throw InputError("regularity probe needs at least 4 points");
  const DihedralAngles a(3, start);
  RegularityProbe p;
  p.s_star = boundary_distance(a, direction, BoundaryKind::Ideal);
  const double norm = direction.norm();
  HyperbolicVolumeOptions opts;
  opts.tol = tol;
  for (int j = 1; j <= points; ++j) {
    RegularityRow row;
    const double gap = std::ldexp(p.s_star, -j);
    row.s = p.s_star - gap;
    row.d = gap * norm;
    const DihedralAngles theta(3, start + row.s * direction);
    const VolumeResult v = tetra_volume_hyperbolic(theta, opts);
    row.volume = v.value;
    row.volume_error = v.error_estimate;
    row.max_gradient = schlafli_gradient(theta, SchlafliContext::hyperbolic()).cwiseAbs().maxCoeff();
    row.max_edge = edge_lengths(build_gram(theta)).maxCoeff();
    p.rows.push_back(row);
  }

  std::vector<double> x, y;
  for (const auto& r : p.rows) {
    x.push_back(-std::log(r.d));
    y.push_back(r.max_edge);
  }
  const LineFit f = fit_line(x, y);
  p.slope = f.slope;
  p.intercept = f.intercept;
  p.r_squared = f.r_squared;
  p.envelope_intercept = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < x.size(); ++i) p.envelope_intercept = std::max(p.envelope_intercept, y[i] - f.slope * x[i]);

  // Successive differences against the modulus dtheta (1 + |log dtheta|).
  std::vector<double> lx, ly, ratio;
  for (size_t i = 0; i + 1 < p.rows.size(); ++i) {
    const double dtheta = (p.rows[i + 1].s - p.rows[i].s) * norm;
    const double dv = std::abs(p.rows[i + 1].volume - p.rows[i].volume);
    ratio.push_back(dv / (dtheta * (1.0 + std::abs(std::log(dtheta)))));
    if (dv > 0.0) {
      lx.push_back(std::log(dtheta));
      ly.push_back(std::log(dv));
    }
  }
  p.holder_exponent = lx.size() >= 2 ? fit_line(lx, ly).slope : 0.0;
  p.cauchy_constant = *std::max_element(ratio.begin(), ratio.end());
  p.contraction = 0.0;
  for (size_t i = 0; i + 2 < p.rows.size(); ++i) {
    const double a0 = std::abs(p.rows[i + 1].volume - p.rows[i].volume);
    const double a1 = std::abs(p.rows[i + 2].volume - p.rows[i + 1].volume);
    p.contraction = std::max(p.contraction, a1 / a0);
  }
  const size_t m = ratio.size();
  p.initial_drift = std::abs(ratio[1] - ratio[0]) / ratio[1];
  p.modulus_drift = std::abs(ratio[m - 1] - ratio[m - 2]) / ratio[m - 1];
  p.cauchy_ok = p.contraction < 1.0 && p.modulus_drift < p.initial_drift;
  return p;
}

CommandResult cmd_regularity(const RunConfig& cfg) {
  const std::string fmt = format_or(cfg, "csv", {"csv", "json"});
  Eigen::VectorXd start = Eigen::VectorXd::Constant(6, 1.2);
  if (!cfg.input.empty()) {
    const SimplexInput in = parse_simplex(load_input(cfg));
    if (in.dimension != 3) throw InputError("regularity: the start simplex must have dimension 3");
    start = in.angles;
  }
  Eigen::VectorXd dir;
  if (cfg.direction.empty()) {
    dir = Eigen::VectorXd::Constant(6, std::numbers::pi / 3) - start;
  } else {
    if (cfg.direction.size() != 6) throw InputError("--direction needs 6 components");
    dir = Eigen::Map<const Eigen::VectorXd>(cfg.direction.data(), 6);
  }
  const RegularityProbe p = regularity_probe(start, dir, cfg.points, cfg.tol);
  if (fmt == "json") {
    Json j;
    j["s_star"] = p.s_star;
    Json rows = Json::array();
    for (const auto& r : p.rows)
      rows.push_back({{"d", r.d}, {"s", r.s}, {"volume", r.volume}, {"volume_error", r.volume_error},
                      {"max_gradient", r.max_gradient}, {"max_edge", r.max_edge}});
    j["rows"] = rows;
    j["fit"] = {{"edge_slope", p.slope},
                {"edge_intercept", p.intercept},
                {"edge_r_squared", p.r_squared},
                {"edge_envelope_intercept", p.envelope_intercept},
                {"holder_exponent", p.holder_exponent},
                {"cauchy_constant", p.cauchy_constant},
                {"contraction", p.contraction},
                {"modulus_drift", p.modulus_drift},
                {"initial_drift", p.initial_drift},
                {"cauchy_ok", p.cauchy_ok}};
    return CommandResult{0, dump(j), {}};
  }
  CsvWriter csv({"d", "s", "volume", "volume_error", "max_gradient", "max_edge", "edge_slope", "edge_intercept",
                 "holder_exponent", "cauchy_constant"});
  for (const auto& r : p.rows)
    csv.row({csv_number(r.d), csv_number(r.s), csv_number(r.volume), csv_number(r.volume_error),
             csv_number(r.max_gradient), csv_number(r.max_edge), csv_number(p.slope),
             csv_number(p.envelope_intercept), csv_number(p.holder_exponent), csv_number(p.cauchy_constant)});
  return CommandResult{0, csv.str(), {}};
}

CommandResult cmd_lemmas(const RunConfig& cfg) {
  format_or(cfg, "json", {"json"});
  Json j;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  std::vector<TrialReport> angle, dist, sph;
  if (cfg.trials > 0) {
    for (double t : cfg.t_list) {
      if (!(t > 0.0)) throw InputError("--t-list entries must be positive");
      angle.push_back(sample_lemma_angle(t, cfg.trials, cfg.seed));
      dist.push_back(sample_lemma_dist(t, cfg.trials, cfg.seed));
    }
    for (double eps : cfg.eps_list) {
      if (!(eps > 0.0 && eps < 1.0)) throw InputError("--eps-list entries must lie in (0, 1)");
      sph.push_back(sample_lemma_spherical(eps, cfg.trials, cfg.seed));
    }
  }
  auto section = [](const std::vector<TrialReport>& reps) {
    Json a = Json::array();
    for (const auto& r : reps) a.push_back(to_json(r));
    return a;
  };
  auto threshold = [](const std::vector<TrialReport>& reps) {
    const auto t = empirical_threshold(reps);
    return t ? Json(*t) : Json(nullptr);
  };
  j["angle"] = section(angle);
  j["distance"] = section(dist);
  j["spherical"] = section(sph);
  j["empirical_t0"] = {{"angle", threshold(angle)}, {"distance", threshold(dist)}};
  j["empirical_eps0"] = threshold(sph);
  return CommandResult{0, dump(j), {}};
}

}  // namespace hvol
