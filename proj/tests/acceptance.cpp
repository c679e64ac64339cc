// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hvol/angle_space.hpp"
#include "hvol/commands.hpp"
#include "hvol/degeneration.hpp"
#include "hvol/io.hpp"
#include "hvol/oracles.hpp"
#include "hvol/polyhedron.hpp"
#include "hvol/schlafli.hpp"
#include "test_support.hpp"

using namespace hvol;
using namespace hvol::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<Eigen::Vector3d> klein_vertices(const Eigen::VectorXd& angles) {
  const auto R = realize(build_gram(DihedralAngles(3, angles)));
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d v = R.vertices.col(i);
    pts.emplace_back(v.tail<3>() / v[0]);
  }
  return pts;
}

PolyhedronGeometry<double> realized_tetra(const Eigen::VectorXd& angles) {
  const auto R = realize(build_gram(DihedralAngles(3, angles)));
  PolyhedronGeometry<double> g;
  for (int i = 0; i < 4; ++i) g.vertices.push_back(R.vertices.col(i));
  g.faces = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  return g;
}

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AbstractInput fixture(const std::string& name) {
  return parse_abstract(parse_json_text(read_file(std::string(HVOL_FIXTURES) + "/" + name + ".json")));
}

Outcome spherical_anchor() {
  auto c = RunConfig{};
  c.subcommand = "simplex";
  const std::string path = "/tmp/hvol_acceptance_orthant.json";
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fprintf(f, "{\"dimension\": 3, \"curvature\": \"spherical\", \"angles\": [%.17g, %.17g, %.17g, %.17g, %.17g, %.17g]}",
               kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2, kPi / 2);
  std::fclose(f);
  c.input = path;
  const auto r = run_command(c);
  const double orth = parse_json_text(r.output)["volume"]["value"].get<double>();
  const double e1 = std::abs(orth - kPi * kPi / 8);

  const auto p = regular(kPi / 2 + 0.05);
  const double v = simplex_volume_spherical(DihedralAngles(3, p)).value;
  const auto R = realize(build_gram(DihedralAngles(3, p)));
  std::vector<Eigen::Vector4d> normals;
  for (int i = 0; i < 4; ++i) normals.emplace_back(R.normals.col(i));
  const auto mc = mc_volume_sphere(normals, {10'000'000, 0});
  const double z = std::abs(v - mc.estimate) / mc.standard_error;
  return {r.exit_code == 0 && e1 < 1e-10 && z < 3,
          fmt("orthant error %.2e; perturbed V = %.8f, MC z = %.2f", e1, v, z)};
}

Outcome hyperbolic_vs_klein() {
  Philox rng(2024, 0);
  double worst = 0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const auto a = random_compact_angles(rng);
    const double v = tetra_volume_hyperbolic(DihedralAngles(3, a)).value;
    const auto mc = mc_volume_klein(klein_vertices(a), {10'000'000, static_cast<std::uint64_t>(i)});
    const double allowed = std::max(0.01 * mc.estimate, 3 * mc.standard_error);
    worst = std::max(worst, std::abs(v - mc.estimate) / allowed);
    ok = ok && std::abs(v - mc.estimate) <= allowed;
  }
  return {ok, fmt("worst |V - MC| / max(1%%, 3 sigma) = %.3f over 10 tetrahedra", worst)};
}

Outcome ideal_limit() {
  // V(pi/3 + h) = V* + a h log h + b h + o(h), fitted at three offsets.
  const std::vector<double> hs{4e-3, 2e-3, 1e-3};
  Eigen::Matrix3d A;
  Eigen::Vector3d y;
  for (int i = 0; i < 3; ++i) {
    const double h = hs[i];
    A.row(i) << 1.0, h * std::log(h), h;
    y[i] = tetra_volume_hyperbolic(DihedralAngles::regular(3, kPi / 3 + h), {.tol = 1e-12}).value;
  }
  const double limit = A.colPivHouseholderQr().solve(y)[0];
  const double target = 3 * lobachevsky(kPi / 3);
  return {std::abs(limit - target) < 1e-3, fmt("extrapolated %.9f vs 3 L(pi/3) = %.9f", limit, target)};
}

Outcome schlafli_exactness() {
  Philox rng(4, 0);
  double worst_loop = 0;
  for (int i = 0; i < 20; ++i) {
    AnglePath p;
    const auto a = random_compact_angles(rng, 0.02);
    p.vertices = {a, random_compact_angles(rng, 0.02), random_compact_angles(rng, 0.02), a};
    worst_loop = std::max(worst_loop, std::abs(integrate_volume(p, SchlafliContext::hyperbolic(), {.tol = 1e-11}).value));
  }
  double worst_fd = 0;
  const double h = 1e-4;
  HyperbolicVolumeOptions o;
  o.tol = 1e-11;
  for (int i = 0; i < 20; ++i) {
    const auto a = random_compact_angles(rng);
    const auto g = schlafli_gradient(DihedralAngles(3, a), SchlafliContext::hyperbolic());
    for (int e = 0; e < 6; ++e) {
      Eigen::VectorXd ap = a, am = a;
      ap[e] += h;
      am[e] -= h;
      const double fd = (tetra_volume_hyperbolic(DihedralAngles(3, ap), o).value -
                         tetra_volume_hyperbolic(DihedralAngles(3, am), o).value) / (2 * h);
      worst_fd = std::max(worst_fd, std::abs(fd - g[e]) / std::abs(g[e]));
    }
  }
  return {worst_loop <= 1e-8 && worst_fd <= 1e-4,
          fmt("worst loop |dV| = %.2e, worst finite-difference rel. error = %.2e", worst_loop, worst_fd)};
}

Outcome cofactor_lengths() {
  Philox rng(5, 0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto a = random_compact_angles(rng);
    const auto G = build_gram(DihedralAngles(3, a));
    const auto L = edge_lengths(G);
    const auto R = realize(G);
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) {
        const double d = point_distance(HPoint<double>::from_timelike(R.vertices.col(p)),
                                        HPoint<double>::from_timelike(R.vertices.col(q)));
        worst = std::max(worst, std::abs(d - L(p, q)));
      }
  }
  return {worst <= 1e-10, fmt("worst |l - d| = %.2e over 100 tetrahedra", worst)};
}

Outcome degeneration_bound() {
  bool ok = true;
  std::string detail;
  for (int k : {4, 6}) {
    std::vector<double> rho, lg;
    int violations = 0;
    for (int i = 0; i < 20; ++i) {
      const double tau = 3.0 + (60.0 - 3.0) * i / 19.0;
      const auto row = drum_row(k, tau, 0.5);
      if (!row.belt) {
        ok = false;
        ++violations;
        continue;
      }
      if (!(row.belt->excess <= row.belt->bound)) ++violations;
      rho.push_back(row.rho);
      lg.push_back(std::log(row.belt->excess));
    }
    const double s = slope_of(rho, lg);
    ok = ok && violations == 0 && s < 0 && rho.front() <= 6.5 && rho.back() >= 120;
    detail += fmt("k=%.0f: rho in [%.1f, %.1f]", k, rho.front(), rho.back()) +
              fmt(", %.0f violations, log-excess slope %.4f; ", violations, s);
  }
  return {ok, detail};
}

Outcome lemma_samplers() {
  std::uint64_t total = 0;
  double worst = 0;
  for (double t : {3.0, 5.0, 8.0}) {
    const auto a = sample_lemma_angle(t, 10000, 0);
    const auto d = sample_lemma_dist(t, 10000, 0);
    total += a.violations + d.violations;
    worst = std::max({worst, a.max_ratio, d.max_ratio});
  }
  for (double eps : {0.05, 0.01}) {
    const auto s = sample_lemma_spherical(eps, 10000, 0);
    total += s.violations;
    worst = std::max(worst, s.max_ratio);
  }
  return {total == 0, fmt("%.0f violations, worst observed/bound = %.3f", static_cast<double>(total), worst)};
}

Outcome angle_space_fixtures() {
  bool ok = true;
  std::string detail;
  {
    const auto in = fixture("cube_right_andreev");
    const auto C = AbstractPolyhedron::from_faces(in.faces);
    const auto r = andreev_check(C, EdgeWeights::from_labels(C, in.weights, in.mode));
    bool witness = false;
    for (const auto& v : r.violations)
      witness = witness || (v.condition == "andreev-4" && v.witness.edges.size() == 4 && v.lhs == 2 * kPi);
    ok = ok && !r.accepted && witness;
    detail += witness ? "cube: 4-circuit sum 2pi; " : "cube: no 4-circuit witness; ";
  }
  {
    const auto in = fixture("dodecahedron_right_andreev");
    const auto C = AbstractPolyhedron::from_faces(in.faces);
    const bool acc = andreev_check(C, EdgeWeights::from_labels(C, in.weights, in.mode)).accepted;
    ok = ok && acc;
    detail += acc ? "dodecahedron accepted; " : "dodecahedron rejected; ";
  }
  {
    const auto in = fixture("prism_right_andreev");
    const auto C = AbstractPolyhedron::from_faces(in.faces);
    const auto r = andreev_check(C, EdgeWeights::from_labels(C, in.weights, in.mode));
    bool three = false;
    for (const auto& v : r.violations) three = three || v.condition == "andreev-3";
    ok = ok && !r.accepted && three;
    detail += three ? "prism: condition 3; " : "prism: condition 3 missing; ";
  }
  {
    const auto in = fixture("tetrahedron_ideal_bb");
    const auto C = AbstractPolyhedron::from_faces(in.faces);
    const auto w = EdgeWeights::from_labels(C, in.weights, in.mode);
    const bool acc = bao_bonahon_check(C, w).accepted;
    const double ex = acc ? boundary_slack(C, w).min_nonelementary_excess : NAN;
    ok = ok && acc && std::abs(ex - 2 * kPi / 3) < 1e-12;
    detail += std::string(acc ? "tetrahedron accepted" : "tetrahedron rejected") + fmt(", non-elementary excess %.12f", ex);
  }
  return {ok, detail};
}

Outcome polar_identity() {
  double worst = 0;
  int n = 0;
  auto scan = [&](const PolyhedronGeometry<double>& g) {
    const auto P = Polyhedron<double>::from_geometry(g);
    for (int f = 0; f < P.face_count(); ++f) {
      worst = std::max(worst, std::abs(P.cone_angle(f) - (2 * kPi + P.face_area(f))));
      ++n;
    }
  };
  Philox rng(9, 0);
  for (int i = 0; i < 20; ++i) scan(realized_tetra(random_compact_angles(rng)));
  for (int k : {4, 6})
    for (double tau : {0.5, 2.0, 5.0}) scan(make_drum<double>(k, tau, 0.5));
  return {worst <= 1e-9, fmt("worst |cone - 2pi - area| = %.2e over %.0f faces", worst, n)};
}

Outcome regularity() {
  const auto start = regular(1.2);
  const Eigen::VectorXd dir = regular(kPi / 3) - start;
  const auto p = regularity_probe(start, dir, 16);
  bool envelope = true;
  for (const auto& r : p.rows)
    envelope = envelope && r.max_edge <= p.envelope_intercept + p.slope * -std::log(r.d) + 1e-12;
  bool modulus = true;
  for (size_t i = 1; i < p.rows.size(); ++i) {
    const double dv = std::abs(p.rows[i].volume - p.rows[i - 1].volume);
    const double dth = (p.rows[i].s - p.rows[i - 1].s) * dir.norm();
    modulus = modulus && dv <= p.cauchy_constant * dth * (1 + std::abs(std::log(dth))) * (1 + 1e-12);
  }
  const bool ok = envelope && modulus && p.cauchy_ok && p.slope >= 0.8 && p.slope <= 1.2 && p.r_squared > 0.99;
  return {ok, fmt("b = %.4f (r^2 %.5f), a = %.4f; ", p.slope, p.r_squared, p.envelope_intercept) +
                  fmt("C = %.4f, contraction %.3f, modulus drift %.4f", p.cauchy_constant, p.contraction,
                      p.modulus_drift)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"spherical anchor and Monte-Carlo check", spherical_anchor},
      {"hyperbolic volume against Klein Monte Carlo", hyperbolic_vs_klein},
      {"ideal limit", ideal_limit},
      {"Schlafli exactness", schlafli_exactness},
      {"cofactor edge lengths", cofactor_lengths},
      {"degeneration bound", degeneration_bound},
      {"lemma samplers", lemma_samplers},
      {"Andreev and Bao-Bonahon fixtures", angle_space_fixtures},
      {"polar identity", polar_identity},
      {"regularity probe", regularity},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
