#pragma once

// Explicit compact convex polyhedra in the hyperboloid model.
//
// Faces are vertex-index cycles, counterclockwise when viewed from outside.
// Face planes are fitted to their vertices, and their normals are oriented
// outward (non-incident vertices have <v, n> < 0).

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "hvol/errors.hpp"
#include "hvol/minkowski.hpp"
#include "hvol/scalar.hpp"

namespace hvol {

template <typename S>
struct PolyhedronGeometry {
  std::vector<MVector<S>> vertices;
  std::vector<std::vector<int>> faces;
};

struct PolyEdge {
  int a = 0, b = 0;          // a < b
  int left = 0, right = 0;   // the face traversing a -> b, and the face traversing b -> a
};

struct ValidationReport {
  bool accepted = false;
  double max_planarity_residual = 0.0;  // max |signed distance| of a face vertex to its fitted plane
  double min_convexity_margin = 0.0;    // min distance of a non-incident vertex behind a face plane
  int vertex_count = 0, edge_count = 0, face_count = 0;
  int euler = 0;
  std::vector<int> reoriented_faces;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

namespace poly_tolerance {
inline constexpr double planarity = 1e-8;
inline constexpr double convexity = 1e-9;
}  // namespace poly_tolerance

struct DiameterInfo {
  double diameter = 0.0;
  int u = 0, v = 0;
  double max_edge_length = 0.0;
  int max_edge = 0;
};

struct DualEdge {
  int f = 0, g = 0;     // faces adjacent across the edge
  int edge = 0;
  double weight = 0.0;  // exterior dihedral angle
};

struct PolarMetric {
  std::vector<double> cone_angles;  // one per face
  std::vector<DualEdge> edges;
};

template <typename S>
class Polyhedron {
 public:
  /// Validates and builds; throws InvalidPolyhedron carrying the failure list.
  static Polyhedron from_geometry(PolyhedronGeometry<S> g) {
    ValidationReport report;
    auto p = try_build(std::move(g), report);
    if (!report.accepted) {
      std::string msg = "polyhedron rejected:";
      for (const auto& f : report.failures) msg += " " + f + ";";
      throw Error("InvalidPolyhedron", msg);
    }
    return p;
  }

  /// Full report without throwing.
  static ValidationReport validate(PolyhedronGeometry<S> g) {
    ValidationReport report;
    try_build(std::move(g), report);
    return report;
  }

  int vertex_count() const { return static_cast<int>(g_.vertices.size()); }
  int face_count() const { return static_cast<int>(g_.faces.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<MVector<S>>& vertices() const { return g_.vertices; }
  const std::vector<std::vector<int>>& faces() const { return g_.faces; }
  const std::vector<PolyEdge>& edges() const { return edges_; }
  const MVector<S>& normal(int f) const { return normals_[f]; }
  const ValidationReport& report() const { return report_; }

  int edge_index(int a, int b) const {
    auto it = edge_lookup_.find({std::min(a, b), std::max(a, b)});
    if (it == edge_lookup_.end()) throw Error("NotAnEdge", "no edge joins vertices " + pair_str(a, b));
    return it->second;
  }

  /// Interior dihedral angle at edge e: cos = -<n_left, n_right>.
  S interior_angle(int e) const {
    using std::acos;
    using std::max;
    using std::min;
    const PolyEdge& E = edges_.at(e);
    const S c = -mdot(normals_[E.left], normals_[E.right]);
    return acos(max(S(-1), min(S(1), c)));
  }

  S exterior_angle(int e) const { return pi<S>() - interior_angle(e); }

  /// Interior dihedral angle between two adjacent faces.
  S dihedral_angle(int f, int g) const {
    for (size_t e = 0; e < edges_.size(); ++e) {
      const PolyEdge& E = edges_[e];
      if ((E.left == f && E.right == g) || (E.left == g && E.right == f)) return interior_angle(static_cast<int>(e));
    }
    throw Error("NonAdjacentFaces", "faces " + pair_str(f, g) + " share no edge");
  }

  /// Planar angle of face f at its i-th vertex.
  S planar_angle(int f, int i) const {
    using std::abs;
    using std::atan2;
    const auto& cyc = g_.faces.at(f);
    const int k = static_cast<int>(cyc.size());
    const MVector<S>& v = g_.vertices[cyc[i]];
    const MVector<S>& a = g_.vertices[cyc[(i + k - 1) % k]];
    const MVector<S>& c = g_.vertices[cyc[(i + 1) % k]];
    const MVector<S> u = a + mdot(a, v) * v;
    const MVector<S> w = c + mdot(c, v) * v;
    return atan2(abs(det4(v, u, w, normals_[f])), mdot(u, w));
  }

  S planar_angle_sum(int f) const {
    S s(0);
    for (size_t i = 0; i < g_.faces[f].size(); ++i) s += planar_angle(f, static_cast<int>(i));
    return s;
  }

  /// (k - 2) pi - sum of planar angles.
  S face_area(int f) const {
    const int k = static_cast<int>(g_.faces.at(f).size());
    const S area = S(k - 2) * pi<S>() - planar_angle_sum(f);
    if (!(area > S(0))) throw Error("DegenerateFace", "face " + std::to_string(f) + " has non-positive area");
    return area;
  }

  /// Cone angle of the polar metric at the point dual to face f: sum of (pi - planar angle).
  S cone_angle(int f) const {
    const int k = static_cast<int>(g_.faces.at(f).size());
    return S(k) * pi<S>() - planar_angle_sum(f);
  }

  PolarMetric polar_metric() const {
    PolarMetric m;
    for (int f = 0; f < face_count(); ++f) m.cone_angles.push_back(to_double(cone_angle(f)));
    for (int e = 0; e < edge_count(); ++e)
      m.edges.push_back(DualEdge{edges_[e].left, edges_[e].right, e, to_double(exterior_angle(e))});
    return m;
  }

  S vertex_distance(int i, int j) const {
    return point_distance(HPoint<S>::from_timelike(g_.vertices[i]), HPoint<S>::from_timelike(g_.vertices[j]));
  }

  DiameterInfo diameter() const {
    DiameterInfo d;
    S best(-1);
    for (int i = 0; i < vertex_count(); ++i)
      for (int j = i + 1; j < vertex_count(); ++j) {
        const S r = vertex_distance(i, j);
        if (r > best) {
          best = r;
          d.u = i;
          d.v = j;
        }
      }
    d.diameter = to_double(best);
    S longest(-1);
    for (int e = 0; e < edge_count(); ++e) {
      const S r = vertex_distance(edges_[e].a, edges_[e].b);
      if (r > longest) {
        longest = r;
        d.max_edge = e;
      }
    }
    d.max_edge_length = to_double(longest);
    return d;
  }

 private:
  static std::string pair_str(int a, int b) { return "(" + std::to_string(a) + ", " + std::to_string(b) + ")"; }

  // Least-squares normal: the right singular vector of the rows v^t J for the
  // smallest singular value, so that <v, n> is minimal over the face.
  static MVector<S> fit_normal(const std::vector<MVector<S>>& pts) {
    if (pts.size() == 3) return lorentz_cross(pts[0], pts[1], pts[2]);
    Eigen::Matrix<S, Eigen::Dynamic, 4> A(static_cast<Eigen::Index>(pts.size()), 4);
    for (size_t i = 0; i < pts.size(); ++i) {
      MVector<S> row = pts[i];
      row[0] = -row[0];
      A.row(static_cast<Eigen::Index>(i)) = row.transpose() / row.norm();
    }
    Eigen::JacobiSVD<Eigen::Matrix<S, Eigen::Dynamic, 4>> svd(A, Eigen::ComputeFullV);
    return svd.matrixV().col(3);
  }

  static Polyhedron try_build(PolyhedronGeometry<S> g, ValidationReport& report) {
    using std::abs;
    using std::asinh;
    using std::max;
    using std::min;
    Polyhedron p;
    report = ValidationReport{};
    const int nv = static_cast<int>(g.vertices.size());
    const int nf = static_cast<int>(g.faces.size());
    report.vertex_count = nv;
    report.face_count = nf;

    if (nv < 4 || nf < 4) report.failures.push_back("need at least 4 vertices and 4 faces");
    S max_x0(1);
    for (int i = 0; i < nv; ++i) {
      const MVector<S>& v = g.vertices[i];
      const S q = mnorm2(v);
      if (!(v[0] > S(0)) || !(abs(q + S(1)) <= S(tolerance::renorm_drift) * max(S(1), v[0] * v[0]))) {
        report.failures.push_back("vertex " + std::to_string(i) + " is not on the hyperboloid");
      } else {
        g.vertices[i] = HPoint<S>(v).coords();
      }
      max_x0 = max(max_x0, abs(v[0]));
    }
    for (int f = 0; f < nf; ++f) {
      const auto& cyc = g.faces[f];
      bool ok = cyc.size() >= 3;
      for (int idx : cyc) ok = ok && idx >= 0 && idx < nv;
      std::vector<int> sorted = cyc;
      std::sort(sorted.begin(), sorted.end());
      ok = ok && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      if (!ok) report.failures.push_back("face " + std::to_string(f) + " is not a simple cycle of valid vertices");
    }
    if (!report.failures.empty()) return p;

    // Precision floor for cancellation in <v, n> when coordinates are large.
    const double planarity_tol =
        max(poly_tolerance::planarity, 1e3 * to_double(Eigen::NumTraits<S>::epsilon() * max_x0 * max_x0));
    const double convexity_tol = max(poly_tolerance::convexity, planarity_tol);

    p.normals_.resize(nf);
    double worst_planar = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int f = 0; f < nf; ++f) {
      auto& cyc = g.faces[f];
      std::vector<MVector<S>> pts;
      for (int idx : cyc) pts.push_back(g.vertices[idx]);
      MVector<S> n = fit_normal(pts);
      if (!(mnorm2(n) > S(0))) {
        report.failures.push_back("face " + std::to_string(f) + " does not span a hyperbolic plane");
        continue;
      }
      n = HPlane<S>::from_spacelike(n).normal();
      // Outward: the rest of the polyhedron lies on the negative side.
      S side(0);
      std::vector<char> incident(nv, 0);
      for (int idx : cyc) incident[idx] = 1;
      for (int i = 0; i < nv; ++i)
        if (!incident[i]) side += mdot(g.vertices[i], n);
      if (side > S(0)) n = -n;
      p.normals_[f] = n;

      for (int idx : cyc) worst_planar = max(worst_planar, to_double(abs(asinh(mdot(g.vertices[idx], n)))));
      for (int i = 0; i < nv; ++i)
        if (!incident[i]) worst_margin = min(worst_margin, to_double(-asinh(mdot(g.vertices[i], n))));

      if (det4(pts[0], pts[1], pts[2], n) < S(0)) {
        std::reverse(cyc.begin(), cyc.end());
        report.reoriented_faces.push_back(f);
      }
    }
    report.max_planarity_residual = worst_planar;
    report.min_convexity_margin = worst_margin;
    if (worst_planar > planarity_tol) {
      std::ostringstream os;
      os << "planarity violation: residual " << worst_planar << " exceeds " << planarity_tol;
      report.failures.push_back(os.str());
    }
    if (!(worst_margin > convexity_tol)) {
      std::ostringstream os;
      os << "convexity violation: margin " << worst_margin << " (a vertex is not strictly behind a face plane)";
      report.failures.push_back(os.str());
    }
    if (!report.reoriented_faces.empty()) {
      std::string w = "re-oriented faces to counterclockwise-from-outside:";
      for (int f : report.reoriented_faces) w += " " + std::to_string(f);
      report.warnings.push_back(w);
    }

    // Edges: every directed edge once, every undirected edge in two faces.
    std::map<std::pair<int, int>, int> directed;
    bool manifold = true;
    for (int f = 0; f < nf; ++f) {
      const auto& cyc = g.faces[f];
      for (size_t i = 0; i < cyc.size(); ++i) {
        const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
        if (!directed.emplace(std::make_pair(a, b), f).second) manifold = false;
      }
    }
    for (const auto& [ab, f] : directed) {
      const auto [a, b] = ab;
      auto rev = directed.find({b, a});
      if (rev == directed.end()) {
        manifold = false;
        continue;
      }
      if (a < b) {
        p.edge_lookup_[{a, b}] = static_cast<int>(p.edges_.size());
        p.edges_.push_back(PolyEdge{a, b, f, rev->second});
      }
    }
    if (!manifold) report.failures.push_back("edge structure: some edge is not shared by exactly two faces");
    std::vector<char> used(nv, 0);
    for (const auto& cyc : g.faces)
      for (int idx : cyc) used[idx] = 1;
    if (std::count(used.begin(), used.end(), 0) > 0) report.failures.push_back("some vertex lies on no face");

    report.edge_count = static_cast<int>(p.edges_.size());
    report.euler = nv - report.edge_count + nf;
    if (report.euler != 2) report.failures.push_back("Euler characteristic " + std::to_string(report.euler) + " != 2");

    report.accepted = report.failures.empty();
    p.g_ = std::move(g);
    p.report_ = report;
    return p;
  }

  PolyhedronGeometry<S> g_;
  std::vector<MVector<S>> normals_;
  std::vector<PolyEdge> edges_;
  std::map<std::pair<int, int>, int> edge_lookup_;
  ValidationReport report_;
};

/// Lifts Klein-ball coordinates to the hyperboloid.
inline PolyhedronGeometry<double> geometry_from_klein(const std::vector<Eigen::Vector3d>& klein,
                                                      std::vector<std::vector<int>> faces) {
  PolyhedronGeometry<double> g;
  for (const auto& k : klein) g.vertices.push_back(from_klein<double>(k).coords());
  g.faces = std::move(faces);
  return g;
}

}  // namespace hvol
