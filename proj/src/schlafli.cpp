#include "hvol/schlafli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hvol/minkowski.hpp"
#include "hvol/oracles.hpp"

namespace hvol {

namespace {

struct KronrodRule {
  std::vector<double> nodes;  // symmetric, full set of 15
  std::vector<double> kronrod_weights;
  std::vector<double> gauss_weights;  // zero where the node is not a Gauss node

  KronrodRule() {
    const auto& xk = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
    const auto& wk = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
    const auto& xg = boost::math::quadrature::gauss<double, 7>::abscissa();
    const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
    auto gauss_weight = [&](double x) {
      for (size_t i = 0; i < xg.size(); ++i)
        if (std::abs(xg[i] - x) < 1e-14) return wg[i];
      return 0.0;
    };
    for (size_t i = xk.size(); i-- > 1;) {
      nodes.push_back(-xk[i]);
      kronrod_weights.push_back(wk[i]);
      gauss_weights.push_back(gauss_weight(xk[i]));
    }
    for (size_t i = 0; i < xk.size(); ++i) {
      nodes.push_back(xk[i]);
      kronrod_weights.push_back(wk[i]);
      gauss_weights.push_back(gauss_weight(xk[i]));
    }
  }
};

const KronrodRule& rule() {
  static const KronrodRule r;
  return r;
}

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const {
    if (error != o.error) return error < o.error;
    return a > o.a;  // deterministic tie-break
  }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b, int depth) {
  const KronrodRule& r = rule();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    const double y = f(c + h * r.nodes[i]);
    k += r.kronrod_weights[i] * y;
    g += r.gauss_weights[i] * y;
  }
  return Panel{a, b, k * h, std::abs(k - g) * h, depth};
}

std::array<int, 2> opposite_edge(int i, int j) {
  std::array<int, 2> out{};
  int c = 0;
  for (int v = 0; v < 4; ++v)
    if (v != i && v != j) out[c++] = v;
  return out;
}

// Interior validity of a path point for the given curvature.
bool admissible(const Eigen::VectorXd& theta, const SchlafliContext& ctx) {
  for (int k = 0; k < theta.size(); ++k)
    if (!(theta[k] > 0.0 && theta[k] < std::numbers::pi)) return false;
  try {
    const SimplexClass cls = classify(build_gram(DihedralAngles(ctx.dimension, theta)));
    if (ctx.curvature > 0) return cls.kind == SimplexKind::Spherical;
    return cls.all_finite();
  } catch (const Error&) {
    return false;
  }
}

std::string describe(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(10);
  os << "[";
  for (int k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  os << "]";
  return os.str();
}

}  // namespace

AnglePath AnglePath::segment(const Eigen::VectorXd& from, const Eigen::VectorXd& to, double anchor_volume,
                             std::string note) {
  AnglePath p;
  p.vertices = {from, to};
  p.anchor_volume = anchor_volume;
  p.anchor_note = std::move(note);
  return p;
}

QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                                    int max_depth) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<Panel> heap;
  heap.push(evaluate_panel(f, a, b, 0));
  double total_error = heap.top().error;
  constexpr int max_panels = 200000;
  int panels = 1;
  std::vector<Panel> done;
  while (!heap.empty() && total_error > tol && panels < max_panels) {
    Panel p = heap.top();
    heap.pop();
    if (p.depth >= max_depth) {
      done.push_back(p);
      continue;
    }
    total_error -= p.error;
    const double mid = 0.5 * (p.a + p.b);
    Panel left = evaluate_panel(f, p.a, mid, p.depth + 1);
    Panel right = evaluate_panel(f, mid, p.b, p.depth + 1);
    total_error += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  // Sum in position order so the result does not depend on heap internals.
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : done) {
    out.value += p.value;
    out.error += p.error;
    out.max_depth = std::max(out.max_depth, p.depth);
  }
  out.panels = static_cast<int>(done.size());
  return out;
}

Eigen::VectorXd schlafli_gradient(const DihedralAngles& angles, const SchlafliContext& ctx) {
  if (ctx.dimension != 3 || angles.dimension() != 3) {
    throw Error("UnsupportedDimension", "schlafli_gradient: only dimension 3 is supported");
  }
  const AngleGram G = build_gram(angles);
  const SimplexClass cls = classify(G);
  if (cls.kind == SimplexKind::Degenerate) throw Error("DegenerateGram", "schlafli_gradient: det G = 0");
  const bool matches = (ctx.curvature > 0) == (cls.kind == SimplexKind::Spherical);
  if (!matches) {
    throw Error("WrongCurvature", "schlafli_gradient: angles are " + to_string(cls.kind) + " but curvature is " +
                                      std::to_string(ctx.curvature));
  }
  const Eigen::MatrixXd L = edge_lengths(G);
  Eigen::VectorXd grad(angles.pair_count());
  for (int k = 0; k < grad.size(); ++k) {
    auto [i, j] = DihedralAngles::pair_at(3, k);
    const auto e = opposite_edge(i, j);
    grad[k] = L(e[0], e[1]) / (2.0 * ctx.curvature);
  }
  return grad;
}

VolumeResult integrate_volume(const AnglePath& path, const SchlafliContext& ctx, const QuadratureOptions& opts) {
  if (ctx.dimension != 3) throw Error("UnsupportedDimension", "integrate_volume: only dimension 3 is supported");
  if (path.vertices.empty()) throw Error("InvalidPath", "integrate_volume: empty path", false);
  for (const auto& v : path.vertices)
    if (v.size() != 6) throw Error("InvalidPath", "integrate_volume: path vertices need 6 angles", false);

  VolumeResult out;
  out.value = path.anchor_volume;
  out.anchor = path.anchor_note;
  const int segments = static_cast<int>(path.vertices.size()) - 1;
  if (segments == 0) return out;

  std::vector<double> values;
  for (int m = 0; m < segments; ++m) {
    const Eigen::VectorXd& from = path.vertices[m];
    const Eigen::VectorXd delta = path.vertices[m + 1] - from;
    if (delta.norm() == 0.0) continue;
    auto global_s = [&](double u) { return (m + u) / segments; };

    // Sentinels: a failure between two of them is located by bisection.
    double last_ok = 0.0;
    for (int k = 1; k <= opts.sentinels; ++k) {
      const double u = static_cast<double>(k) / (opts.sentinels + 1);
      if (admissible(from + u * delta, ctx)) {
        last_ok = u;
        continue;
      }
      double lo = last_ok, hi = u;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (lo == 0.0 || admissible(from + mid * delta, ctx))
          (lo == 0.0 && !admissible(from + mid * delta, ctx) ? hi : lo) = mid;
        else
          hi = mid;
      }
      throw PathExitsDomain(global_s(hi), "integrate_volume: path leaves the domain near s = " +
                                              std::to_string(global_s(hi)) + " at angles " +
                                              describe(from + hi * delta));
    }

    auto integrand = [&](double u) {
      const Eigen::VectorXd theta = from + u * delta;
      if (!admissible(theta, ctx)) {
        throw PathExitsDomain(global_s(u), "integrate_volume: quadrature node outside the domain at s = " +
                                               std::to_string(global_s(u)));
      }
      const Eigen::VectorXd grad = schlafli_gradient(DihedralAngles(3, theta), ctx);
      return grad.dot(delta);
    };
    const QuadratureResult q = adaptive_integrate(integrand, 0.0, 1.0, opts.tol / segments, opts.max_depth);
    values.push_back(q.value);
    out.error_estimate += q.error;
    out.panels += q.panels;
    out.max_depth = std::max(out.max_depth, q.max_depth);
  }
  for (double v : values) out.value += v;
  return out;
}

VolumeResult tetra_volume_hyperbolic(const DihedralAngles& angles, const HyperbolicVolumeOptions& opts) {
  if (angles.dimension() != 3) throw Error("UnsupportedDimension", "tetra_volume_hyperbolic: dimension must be 3");
  const SimplexClass cls = classify(build_gram(angles));
  if (cls.kind != SimplexKind::Hyperbolic) {
    throw Error("WrongCurvature", "tetra_volume_hyperbolic: angles are " + to_string(cls.kind));
  }
  for (int i = 0; i < 4; ++i)
    if (cls.vertex_types[i] == VertexType::Hyperideal)
      throw IdealOrHyperidealVertex(i, "tetra_volume_hyperbolic: vertex " + std::to_string(i) + " is hyperideal");
  const bool ideal_target = !cls.all_finite();

  const Eigen::VectorXd target =
      opts.ray_target ? *opts.ray_target : Eigen::VectorXd::Constant(6, std::acos(1.0 / 3.0));
  const Eigen::VectorXd dir = target - angles.values();
  const std::string instruction = " (supply a custom ray_target toward a Euclidean tetrahedron)";
  double s_star;
  try {
    s_star = boundary_distance(angles, dir, BoundaryKind::Degenerate);
  } catch (const Error& e) {
    throw Error("AnchorNotFound", std::string("tetra_volume_hyperbolic: ") + e.what() + instruction);
  }
  const Eigen::VectorXd anchor = angles.values() + s_star * dir;
  {
    const Eigen::MatrixXd C = cofactors(build_gram(DihedralAngles(3, anchor)));
    if (!(C.diagonal().minCoeff() > 0.0)) {
      throw Error("AnchorNotFound",
                  "tetra_volume_hyperbolic: degenerate point on the ray is not a Euclidean tetrahedron" + instruction);
    }
  }

  QuadratureOptions q;
  q.tol = opts.tol ? *opts.tol : (ideal_target ? 1e-6 : 1e-8);
  VolumeResult r;
  try {
    r = integrate_volume(AnglePath::segment(anchor, angles.values(), 0.0), SchlafliContext::hyperbolic(), q);
  } catch (const PathExitsDomain& e) {
    throw Error("AnchorNotFound", std::string("tetra_volume_hyperbolic: ") + e.what() + instruction);
  }

  if (opts.verify_anchor) {
    // Checkpoint just inside the anchor: integrated volume vs Monte-Carlo.
    const Eigen::VectorXd check = angles.values() + s_star * (1.0 - 1e-3) * dir;
    const VolumeResult vc =
        integrate_volume(AnglePath::segment(anchor, check, 0.0), SchlafliContext::hyperbolic(), q);
    const Realization real = realize(build_gram(DihedralAngles(3, check)));
    std::vector<Eigen::Vector3d> klein;
    for (int i = 0; i < 4; ++i) {
      const MVector<double> v = real.vertices.col(i);
      klein.push_back(to_klein(HPoint<double>::from_timelike(v)));
    }
    const McResult mc = mc_volume_klein(klein, McConfig{opts.anchor_check_samples, 0x616e63686f72ULL});
    if (std::abs(mc.estimate - vc.value) > 4.0 * mc.standard_error + 1e-10) {
      std::ostringstream os;
      os << "tetra_volume_hyperbolic: anchor check failed, Monte-Carlo " << mc.estimate << " +- "
         << mc.standard_error << " vs integrated " << vc.value;
      throw Error("AnchorNotFound", os.str());
    }
  }

  std::ostringstream note;
  note.precision(12);
  note << "Euclidean anchor V=0 at ray parameter " << s_star << " toward " << describe(target);
  r.anchor = note.str();
  return r;
}

VolumeResult simplex_volume_spherical(const DihedralAngles& angles, const SphericalVolumeOptions& opts) {
  if (angles.dimension() != 3) throw Error("UnsupportedDimension", "simplex_volume_spherical: dimension must be 3");
  const SimplexClass cls = classify(build_gram(angles));
  if (cls.kind != SimplexKind::Spherical) {
    throw Error("WrongCurvature", "simplex_volume_spherical: angles are " + to_string(cls.kind));
  }
  const Eigen::VectorXd orthant = Eigen::VectorXd::Constant(6, std::numbers::pi / 2);
  const double v0 = std::numbers::pi * std::numbers::pi / 8.0;
  const std::string note = "all-right orthant, V = pi^2/8";
  QuadratureOptions q;
  q.tol = opts.tol;
  try {
    return integrate_volume(AnglePath::segment(orthant, angles.values(), v0, note), SchlafliContext::spherical(), q);
  } catch (const PathExitsDomain&) {
    if (!opts.waypoint) throw;
    AnglePath p;
    p.vertices = {orthant, *opts.waypoint, angles.values()};
    p.anchor_volume = v0;
    p.anchor_note = note + " via waypoint";
    return integrate_volume(p, SchlafliContext::spherical(), q);
  }
}

}  // namespace hvol
