#include "hvol/degeneration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "hvol/rng.hpp"

namespace hvol {

namespace {

template <typename S>
MVector<S> geodesic_at(const MVector<S>& a, const MVector<S>& u, const S& s) {
  using std::cosh;
  using std::sinh;
  return cosh(s) * a + sinh(s) * u;
}

template <typename S>
MVector<S> tangent_at(const MVector<S>& a, const MVector<S>& u, const S& s) {
  using std::cosh;
  using std::sinh;
  return sinh(s) * a + cosh(s) * u;
}

template <typename S>
S atanh_(const S& x) {
  using std::log;
  return log((S(1) + x) / (S(1) - x)) / S(2);
}

template <typename S>
MVector<S> unit_spacelike(const MVector<S>& v) {
  using std::sqrt;
  return v / sqrt(mnorm2(v));
}

// Acute angle between two lines of a plane with unit normal n; 0 if they do not meet.
template <typename S>
S line_angle(const MVector<S>& p1, const MVector<S>& q1, const MVector<S>& p2, const MVector<S>& q2,
             const MVector<S>& n) {
  using std::abs;
  using std::acos;
  const MVector<S> m1 = unit_spacelike(lorentz_cross(p1, q1, n));
  const MVector<S> m2 = unit_spacelike(lorentz_cross(p2, q2, n));
  const S c = abs(mdot(m1, m2));
  return c < S(1) ? acos(c) : S(0);
}

// Interior angle at q between the directions to a and b, inside the plane with normal n.
template <typename S>
S angle_at(const MVector<S>& q, const MVector<S>& a, const MVector<S>& b, const MVector<S>& n) {
  using std::abs;
  using std::atan2;
  const MVector<S> u = a + mdot(a, q) * q;
  const MVector<S> w = b + mdot(b, q) * q;
  return atan2(abs(det4(q, u, w, n)), mdot(u, w));
}

template <typename S>
std::vector<MVector<S>> polygon_vertices(const Polyhedron<S>& P, const std::vector<int>& edges,
                                         const MVector<S>& n_mid) {
  std::vector<MVector<S>> out;
  const HPlane<S> mid = HPlane<S>::from_spacelike(n_mid);
  for (int e : edges) {
    const PolyEdge& E = P.edges()[e];
    const HLine<S> line(HPoint<S>::from_timelike(P.vertices()[E.a]), HPoint<S>::from_timelike(P.vertices()[E.b]));
    auto q = line_plane_intersection(line, mid);
    if (!q) throw Error("BeltNotCycle", "crossed edge does not meet the mid-plane");
    out.push_back(q->coords());
  }
  return out;
}

struct BeltCycle {
  std::vector<int> faces, edges;
};

template <typename S>
BeltCycle walk_belt(const Polyhedron<S>& P, const SlabFrame<S>& frame) {
  std::vector<int> side(P.vertex_count());
  for (int i = 0; i < P.vertex_count(); ++i) {
    const S s = mdot(P.vertices()[i], frame.n_mid);
    if (s == S(0)) throw Error("BeltNotCycle", "a vertex lies on the mid-plane");
    side[i] = s > S(0) ? 1 : -1;
  }
  std::vector<int> crossed;
  std::vector<char> is_crossed(P.edge_count(), 0);
  for (int e = 0; e < P.edge_count(); ++e)
    if (side[P.edges()[e].a] != side[P.edges()[e].b]) {
      crossed.push_back(e);
      is_crossed[e] = 1;
    }
  if (crossed.size() < 3) throw Error("BeltNotCycle", "fewer than 3 edges cross the mid-plane");

  auto crossed_in_face = [&](int f) {
    std::vector<int> out;
    const auto& cyc = P.faces()[f];
    for (size_t i = 0; i < cyc.size(); ++i) {
      const int e = P.edge_index(cyc[i], cyc[(i + 1) % cyc.size()]);
      if (is_crossed[e]) out.push_back(e);
    }
    return out;
  };

  BeltCycle c;
  const int e0 = crossed.front();
  int face = P.edges()[e0].left;
  int prev = e0;
  std::set<int> seen;
  while (true) {
    if (!seen.insert(face).second) throw Error("BeltNotCycle", "belt revisits a face");
    const auto ce = crossed_in_face(face);
    if (ce.size() != 2) {
      throw Error("BeltNotCycle", "face " + std::to_string(face) + " has " + std::to_string(ce.size()) +
                                      " crossed edges (expected 2)");
    }
    const int next = ce[0] == prev ? ce[1] : ce[0];
    c.faces.push_back(face);
    c.edges.push_back(next);
    if (next == e0) break;
    const PolyEdge& E = P.edges()[next];
    face = E.left == face ? E.right : E.left;
    prev = next;
  }
  if (c.edges.size() != crossed.size()) {
    throw Error("BeltNotCycle", "crossed edges form " + std::to_string(crossed.size()) +
                                    " edges but the face walk closes after " + std::to_string(c.edges.size()));
  }
  return c;
}

template <typename S>
CrossSection cross_section_from(const Polyhedron<S>& P, const SlabFrame<S>& frame, const std::vector<int>& edges) {
  using std::cosh;
  using std::exp;
  const auto q = polygon_vertices(P, edges, frame.n_mid);
  const int k = static_cast<int>(q.size());
  CrossSection cs;
  S sum(0);
  S r_max(0), c_max(1);
  const HPoint<S> x0 = HPoint<S>::from_timelike(frame.x0);
  for (int i = 0; i < k; ++i) {
    const S ext = pi<S>() - angle_at(q[i], q[(i + k - 1) % k], q[(i + 1) % k], frame.n_mid);
    cs.exterior_angles.push_back(to_double(ext));
    sum += ext;
    const HPoint<S> qi = HPoint<S>::from_timelike(q[i]);
    r_max = std::max(r_max, point_distance(qi, x0));
    c_max = std::max(c_max, cosh_distance(qi, x0));
  }
  cs.angle_sum = to_double(sum);
  cs.r_max = to_double(r_max);
  cs.bound = to_double(S(2) * pi<S>() * cosh(r_max));
  cs.max_cosh_distance = to_double(c_max);
  cs.cosh_bound = to_double(S(1) + S(4) * exp(S(-2) * frame.t));
  return cs;
}

}  // namespace

double DegenerationBounds::value() const { return c1() * std::exp(-c2() * rho); }

template <typename S>
SlabFrame<S> SlabFrame<S>::standard(const S& t) {
  SlabFrame f;
  f.axis_point = MVector<S>(S(1), S(0), S(0), S(0));
  f.axis_tangent = MVector<S>(S(0), S(1), S(0), S(0));
  f.center_parameter = S(0);
  f.t = t;
  f.x0 = f.axis_point;
  f.n_mid = f.axis_tangent;
  f.n_minus = tangent_at(f.axis_point, f.axis_tangent, S(-t));
  f.n_plus = tangent_at(f.axis_point, f.axis_tangent, t);
  return f;
}

template <typename S>
S axial_parameter(const MVector<S>& v, const MVector<S>& a, const MVector<S>& u) {
  return atanh_(mdot(v, u) / -mdot(v, a));
}

template <typename S>
SlabFrame<S> find_empty_slab(const Polyhedron<S>& P) {
  const DiameterInfo d = P.diameter();
  const int N = P.vertex_count();
  if (N < 4) throw Error("NoEmptySlab", "find_empty_slab: need at least 4 vertices");
  const S rho = P.vertex_distance(d.u, d.v);
  const MVector<S>& a = P.vertices()[d.u];
  const MVector<S> u = unit_tangent(HPoint<S>::from_timelike(a), HPoint<S>::from_timelike(P.vertices()[d.v]));
  const S len = rho / S(N);

  std::vector<char> occupied(N, 0);
  for (int i = 0; i < N; ++i) {
    if (i == d.u || i == d.v) continue;
    const S s = axial_parameter(P.vertices()[i], a, u);
    for (int seg = 0; seg < N; ++seg)
      if (s > S(seg) * len && s < S(seg + 1) * len) occupied[seg] = 1;
  }
  int best = -1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int seg = 0; seg < N; ++seg) {
    if (occupied[seg]) continue;
    const double gap = std::abs((seg + 0.5) - 0.5 * N);
    if (gap < best_gap) {
      best_gap = gap;
      best = seg;
    }
  }
  if (best < 0) throw Error("NoEmptySlab", "find_empty_slab: every segment of the diameter contains a vertex");

  SlabFrame<S> f;
  f.axis_point = a;
  f.axis_tangent = u;
  f.segments = N;
  f.segment_index = best;
  f.t = rho / S(2 * N);
  f.center_parameter = (S(best) + S(0.5)) * len;
  f.x0 = geodesic_at(a, u, f.center_parameter);
  f.n_mid = tangent_at(a, u, f.center_parameter);
  f.n_minus = tangent_at(a, u, S(f.center_parameter - f.t));
  f.n_plus = tangent_at(a, u, S(f.center_parameter + f.t));
  return f;
}

template <typename S>
CrossSection cross_section_angle_sum(const Polyhedron<S>& P, const SlabFrame<S>& frame) {
  return cross_section_from(P, frame, walk_belt(P, frame).edges);
}

template <typename S>
BeltReport extract_belt(const Polyhedron<S>& P, const SlabFrame<S>& frame) {
  using std::exp;
  using std::min;
  const BeltCycle c = walk_belt(P, frame);
  BeltReport r;
  r.N = P.vertex_count();
  r.t = to_double(frame.t);
  const S rho = S(2 * r.N) * frame.t;
  r.rho = to_double(rho);
  r.faces = c.faces;
  r.edges = c.edges;
  r.k = static_cast<int>(c.faces.size());
  r.face_bound = 2 * r.N - 4;

  S sum(0);
  for (int e : c.edges) sum += P.exterior_angle(e);
  r.exterior_sum = to_double(sum);
  r.excess = to_double(sum - S(2) * pi<S>());
  r.bound = to_double(S(12 * r.N) * exp(-rho / S(2 * r.N)));

  // Turning of the belt curve inside face F_i, between e_{i-1} and e_i.
  S curvature(0);
  for (int i = 0; i < r.k; ++i) {
    const int f = c.faces[i];
    const PolyEdge& A = P.edges()[c.edges[(i + r.k - 1) % r.k]];
    const PolyEdge& B = P.edges()[c.edges[i]];
    S turn(0);
    int shared = -1;
    for (int x : {A.a, A.b})
      if (x == B.a || x == B.b) shared = x;
    if (shared >= 0) {
      const auto& cyc = P.faces()[f];
      const int pos = static_cast<int>(std::find(cyc.begin(), cyc.end(), shared) - cyc.begin());
      const S alpha = P.planar_angle(f, pos);
      turn = min(alpha, pi<S>() - alpha);
    } else {
      const auto& V = P.vertices();
      turn = line_angle(V[A.a], V[A.b], V[B.a], V[B.b], P.normal(f));
    }
    r.turning_angles.push_back(to_double(turn));
    curvature += turn;
  }
  r.curvature = to_double(curvature);
  r.curvature_bound_rho_N = to_double(S(3 * r.k) * exp(-rho / S(r.N)));
  r.curvature_bound_rho_2N = to_double(S(3 * r.k) * exp(-rho / S(2 * r.N)));

  r.cross_section = cross_section_from(P, frame, c.edges);
  {
    // Gap taken in S: both sums sit near 2 pi.
    using std::abs;
    const auto q = polygon_vertices(P, c.edges, frame.n_mid);
    S poly(0);
    for (int i = 0; i < r.k; ++i)
      poly += pi<S>() - angle_at(q[i], q[(i + r.k - 1) % r.k], q[(i + 1) % r.k], frame.n_mid);
    r.link_gap = to_double(abs(sum - poly));
  }
  r.link_bound = to_double(S(6 * r.k) * exp(-frame.t));
  r.proof_bound = to_double(S(2) * pi<S>() * (S(4) * exp(S(-2) * frame.t) + S(1)) + S(6 * r.k) * exp(-frame.t));
  return r;
}

template <typename S>
PolyhedronGeometry<S> make_drum(int k, const S& tau, const S& r) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  if (k < 3) throw Error("InvalidInput", "make_drum: k must be at least 3", false);
  if (!(tau > S(0)) || !(r > S(0))) throw Error("InvalidInput", "make_drum: tau and r must be positive", false);
  PolyhedronGeometry<S> g;
  const Boost<S> down(-tau), up(tau);
  for (int layer = 0; layer < 2; ++layer)
    for (int j = 0; j < k; ++j) {
      const S phi = S(2 * j + layer) * pi<S>() / S(k);
      const MVector<S> v(cosh(r), S(0), sinh(r) * cos(phi), sinh(r) * sin(phi));
      g.vertices.push_back(layer == 0 ? down * v : up * v);
    }
  auto b = [&](int j) { return j % k; };
  auto t = [&](int j) { return k + j % k; };
  std::vector<int> bottom, top;
  for (int j = k - 1; j >= 0; --j) bottom.push_back(b(j));
  for (int j = 0; j < k; ++j) top.push_back(t(j));
  g.faces.push_back(bottom);
  g.faces.push_back(top);
  for (int j = 0; j < k; ++j) {
    g.faces.push_back({b(j), b(j + 1), t(j)});
    g.faces.push_back({b(j + 1), t(j + 1), t(j)});
  }
  return g;
}

namespace {

// 40 digits covers cosh(3t) coordinates against 4 e^-2t slacks for t <= 8.
using LemmaScalar = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<40>,
                                                  boost::multiprecision::et_off>;

MVector<LemmaScalar> point_on_plane(Philox& rng, double window, const LemmaScalar& shift) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const LemmaScalar R = rng.uniform(0.0, window);
  const LemmaScalar phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const MVector<LemmaScalar> p(cosh(R), LemmaScalar(0), sinh(R) * cos(phi), sinh(R) * sin(phi));
  return Boost<LemmaScalar>(shift) * p;
}

}  // namespace

TrialReport sample_lemma_angle(double t, std::uint64_t trials, std::uint64_t seed) {
  using std::abs;
  TrialReport rep;
  rep.lemma = "angle";
  rep.parameter = t;
  rep.trials = trials;
  rep.bound = 3.0 * std::exp(-t);
  Philox rng(seed, 1);
  const LemmaScalar T(t);
  const LemmaScalar bound = LemmaScalar(3) * exp(-T);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const MVector<LemmaScalar> pm = point_on_plane(rng, 2.0 * t, -T);
    const MVector<LemmaScalar> pp = point_on_plane(rng, 2.0 * t, T);
    MVector<LemmaScalar> v;
    for (int d = 0; d < 4; ++d) v[d] = rng.normal();
    const MVector<LemmaScalar> n = lorentz_cross(pm, pp, v);
    const LemmaScalar q = mnorm2(n);
    if (!(q > LemmaScalar(0))) {
      ++rep.rejected;
      continue;
    }
    const LemmaScalar c = abs(n[1]) / sqrt(q);  // <Q-perp, P-perp> with P-perp = e1
    if (!(c < LemmaScalar(1)) || !(c < bound)) ++rep.violations;
    rep.max_ratio = std::max(rep.max_ratio, to_double(c / bound));
  }
  return rep;
}

TrialReport sample_lemma_dist(double t, std::uint64_t trials, std::uint64_t seed) {
  TrialReport rep;
  rep.lemma = "distance";
  rep.parameter = t;
  rep.trials = trials;
  rep.bound = 1.0 + 4.0 * std::exp(-2.0 * t);
  Philox rng(seed, 2);
  const LemmaScalar T(t);
  const LemmaScalar slack = LemmaScalar(4) * exp(LemmaScalar(-2) * T);
  const HPlane<LemmaScalar> P(MVector<LemmaScalar>(0, 1, 0, 0));
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto pm = HPoint<LemmaScalar>::from_timelike(point_on_plane(rng, 2.0 * t, -T));
    const auto pp = HPoint<LemmaScalar>::from_timelike(point_on_plane(rng, 2.0 * t, T));
    const auto q = line_plane_intersection(HLine<LemmaScalar>(pm, pp), P);
    if (!q) {
      ++rep.violations;
      continue;
    }
    const LemmaScalar excess = (*q)[0] - LemmaScalar(1);  // cosh d(q, x0) - 1 with x0 = e0
    if (!(excess < slack)) ++rep.violations;
    rep.max_ratio = std::max(rep.max_ratio, to_double(excess / slack));
  }
  return rep;
}

TrialReport sample_lemma_spherical(double eps, std::uint64_t trials, std::uint64_t seed) {
  TrialReport rep;
  rep.lemma = "spherical";
  rep.parameter = eps;
  rep.trials = trials;
  rep.bound = 2.0 * eps;
  Philox rng(seed, 3);
  for (std::uint64_t i = 0; i < trials;) {
    const double cb = rng.uniform(-eps, eps);
    const double cg = rng.uniform(-eps, eps);
    const double alpha = rng.uniform(0.0, std::numbers::pi);
    // Polar law of cosines: cos A = (cos alpha + cos beta cos gamma) / (sin beta sin gamma).
    const double cosA = (std::cos(alpha) + cb * cg) / std::sqrt((1.0 - cb * cb) * (1.0 - cg * cg));
    if (!(std::abs(cosA) <= 1.0)) {
      ++rep.rejected;
      continue;
    }
    const double gap = std::abs(alpha - std::acos(cosA));
    if (!(gap < 2.0 * eps)) ++rep.violations;
    rep.max_ratio = std::max(rep.max_ratio, gap / (2.0 * eps));
    ++i;
  }
  return rep;
}

std::optional<double> empirical_threshold(const std::vector<TrialReport>& reports) {
  std::vector<TrialReport> sorted = reports;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.parameter < b.parameter; });
  std::optional<double> threshold;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (it->violations > 0) break;
    threshold = it->parameter;
  }
  return threshold;
}

DrumRow drum_row(int k, double tau, double r) {
  DrumRow row;
  row.tau = tau;
  try {
    const auto P = Polyhedron<Extended>::from_geometry(make_drum<Extended>(k, Extended(tau), Extended(r)));
    row.N = P.vertex_count();
    row.F = P.face_count();
    const auto frame = find_empty_slab(P);
    row.rho = to_double(Extended(2 * row.N) * frame.t);
    row.belt = extract_belt(P, frame);
  } catch (const Error& e) {
    row.status = e.name();
    row.message = e.what();
  }
  return row;
}

#define HVOL_INSTANTIATE(S)                                                                       \
  template struct SlabFrame<S>;                                                                   \
  template S axial_parameter<S>(const MVector<S>&, const MVector<S>&, const MVector<S>&);         \
  template SlabFrame<S> find_empty_slab<S>(const Polyhedron<S>&);                                 \
  template BeltReport extract_belt<S>(const Polyhedron<S>&, const SlabFrame<S>&);                 \
  template CrossSection cross_section_angle_sum<S>(const Polyhedron<S>&, const SlabFrame<S>&);    \
  template PolyhedronGeometry<S> make_drum<S>(int, const S&, const S&);

HVOL_INSTANTIATE(double)
HVOL_INSTANTIATE(Extended)

#undef HVOL_INSTANTIATE

}  // namespace hvol
