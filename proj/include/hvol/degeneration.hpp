#pragma once

// Long polyhedra: the vertex-free slab around a diameter, the belt of faces
// crossing it, and the quantitative bounds on its angle sums. Also the
// Monte-Carlo checks of the slab lemmas and the drum (antiprism) family.
//
// Everything geometric is templated on the scalar; double and Extended are
// instantiated. Drums with diameter beyond ~40 need Extended: vertex
// coordinates grow like e^rho while the belt excess decays like e^-rho.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvol/minkowski.hpp"
#include "hvol/polyhedron.hpp"

namespace hvol {

/// Planes P, P-, P+ orthogonal to the geodesic L at x0 and at distance t on either side.
template <typename S>
struct SlabFrame {
  MVector<S> axis_point;    // a point of L (the diameter start)
  MVector<S> axis_tangent;  // unit tangent of L at axis_point
  S center_parameter;       // arc length of x0 along L
  S t;                      // half-width
  MVector<S> x0;
  MVector<S> n_mid, n_minus, n_plus;  // unit normals of P, P-, P+ (tangents of L)
  int segments = 0;                   // N
  int segment_index = 0;

  /// Normal form: x0 = e0, P = {x1 = 0}, P+- = phi(+-t) P.
  static SlabFrame standard(const S& t);
};

struct DegenerationBounds {
  int N = 0;
  double rho = 0.0;
  double c1() const { return 12.0 * N; }
  double c2() const { return 1.0 / (2.0 * N); }
  double value() const;  // c1 exp(-c2 rho)
};

/// Projection parameter of v onto the geodesic a cosh s + u sinh s.
template <typename S>
S axial_parameter(const MVector<S>& v, const MVector<S>& a, const MVector<S>& u);

/// Splits the diameter into N = vertex-count segments, picks the vertex-free
/// segment nearest the middle and centres the frame there with t = rho / 2N.
/// Throws NoEmptySlab if every segment contains a vertex projection.
template <typename S>
SlabFrame<S> find_empty_slab(const Polyhedron<S>& P);

struct CrossSection {
  std::vector<double> exterior_angles;  // intrinsic, in the plane P
  double angle_sum = 0.0;
  double r_max = 0.0;          // farthest polygon vertex from x0
  double bound = 0.0;          // 2 pi cosh(r_max)
  double max_cosh_distance = 0.0;  // over polygon vertices, cosh d(q, x0)
  double cosh_bound = 0.0;         // 1 + 4 exp(-2t)
};

struct BeltReport {
  int N = 0;
  double rho = 0.0;
  double t = 0.0;
  std::vector<int> faces;  // F_1..F_k, cyclic
  std::vector<int> edges;  // e_i = F_i cap F_{i+1}
  int k = 0;
  int face_bound = 0;  // 2N - 4
  double exterior_sum = 0.0;
  double excess = 0.0;  // exterior_sum - 2 pi, computed before rounding to double
  double bound = 0.0;   // 12 N exp(-rho / 2N)
  std::vector<double> turning_angles;  // per belt face
  double curvature = 0.0;
  double curvature_bound_rho_N = 0.0;   // 3k exp(-rho / N)
  double curvature_bound_rho_2N = 0.0;  // 3k exp(-rho / 2N)
  CrossSection cross_section;
  double link_gap = 0.0;    // |belt exterior sum - polygon exterior sum|
  double link_bound = 0.0;  // 2 (3 exp(-t)) k
  // Proof-level intermediate: 2 pi (4 exp(-2t) + 1) + 6 k exp(-t).
  double proof_bound = 0.0;
};

/// Throws BeltNotCycle when the faces crossing P do not form one cycle.
template <typename S>
BeltReport extract_belt(const Polyhedron<S>& P, const SlabFrame<S>& frame);

/// Polygon P cap X in the mid-plane, with the lemma bounds.
template <typename S>
CrossSection cross_section_angle_sum(const Polyhedron<S>& P, const SlabFrame<S>& frame);

/// Antiprism: regular k-gon caps at axial parameters -tau and +tau, radius r,
/// the top cap twisted by pi/k. Faces: bottom cap, top cap, 2k triangles.
template <typename S>
PolyhedronGeometry<S> make_drum(int k, const S& tau, const S& r);

struct TrialReport {
  std::string lemma;
  double parameter = 0.0;  // t or epsilon
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::uint64_t rejected = 0;  // redraws (spherical lemma: invalid triangles)
  double max_ratio = 0.0;      // max observed value / bound
  double bound = 0.0;
};

/// Planes through random points of P- and P+ (radius window 2t); |cos angle with P| < 3 e^-t.
TrialReport sample_lemma_angle(double t, std::uint64_t trials, std::uint64_t seed);

/// Lines through random points of P- and P+; cosh d(M cap P, x0) < 1 + 4 e^-2t.
TrialReport sample_lemma_dist(double t, std::uint64_t trials, std::uint64_t seed);

/// Spherical triangles with |cos beta|, |cos gamma| < eps; |alpha - A| < 2 eps.
TrialReport sample_lemma_spherical(double eps, std::uint64_t trials, std::uint64_t seed);

/// Smallest listed parameter from which every larger listed one has zero violations.
std::optional<double> empirical_threshold(const std::vector<TrialReport>& reports);

/// One row of a drum sweep, computed in extended precision.
struct DrumRow {
  double tau = 0.0;
  int N = 0;
  int F = 0;
  double rho = 0.0;
  std::optional<BeltReport> belt;
  std::string status = "ok";  // or the error name
  std::string message;
};

DrumRow drum_row(int k, double tau, double r);

}  // namespace hvol
