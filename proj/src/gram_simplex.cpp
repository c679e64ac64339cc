#include "hvol/gram_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace hvol {

namespace {

Eigen::MatrixXd remove_rows_cols(const Eigen::MatrixXd& G, std::initializer_list<int> rows,
                                 std::initializer_list<int> cols) {
  const int m = static_cast<int>(G.rows());
  std::vector<int> keep_r, keep_c;
  for (int i = 0; i < m; ++i) {
    if (std::find(rows.begin(), rows.end(), i) == rows.end()) keep_r.push_back(i);
    if (std::find(cols.begin(), cols.end(), i) == cols.end()) keep_c.push_back(i);
  }
  Eigen::MatrixXd out(keep_r.size(), keep_c.size());
  for (size_t a = 0; a < keep_r.size(); ++a)
    for (size_t b = 0; b < keep_c.size(); ++b) out(a, b) = G(keep_r[a], keep_c[b]);
  return out;
}

double det_or_one(const Eigen::MatrixXd& m) { return m.size() == 0 ? 1.0 : m.determinant(); }

// det of G with rows/cols i and j removed; c_ii c_jj - c_ij^2 = det(G) * this.
double complementary_minor(const AngleGram& G, int i, int j) {
  return det_or_one(remove_rows_cols(G, {i, j}, {i, j}));
}

double ideal_band(const AngleGram& G) {
  const int n = static_cast<int>(G.rows()) - 1;
  return gram_tolerance::ideal * std::pow(G.norm(), n);
}

Eigen::MatrixXd minkowski_J(int m) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Identity(m, m);
  J(0, 0) = -1.0;
  return J;
}

}  // namespace

DihedralAngles::DihedralAngles(int dimension, Eigen::VectorXd angles) : n_(dimension), angles_(std::move(angles)) {
  if (n_ < 2) throw Error("InvalidDimension", "DihedralAngles: dimension must be >= 2", false);
  const int expected = n_ * (n_ + 1) / 2;
  if (angles_.size() != expected) {
    std::ostringstream os;
    os << "DihedralAngles: expected " << expected << " angles for dimension " << n_ << ", got "
       << angles_.size();
    throw Error("InvalidDimension", os.str(), false);
  }
  for (int k = 0; k < angles_.size(); ++k) {
    if (!(angles_[k] > 0.0 && angles_[k] < std::numbers::pi)) {
      std::ostringstream os;
      os << "DihedralAngles: angle #" << k << " = " << angles_[k] << " is outside (0, pi)";
      throw Error("AngleOutOfRange", os.str());
    }
  }
}

DihedralAngles DihedralAngles::regular(int dimension, double theta) {
  return DihedralAngles(dimension, Eigen::VectorXd::Constant(dimension * (dimension + 1) / 2, theta));
}

int DihedralAngles::pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == j || i < 0 || j > n) throw Error("InvalidIndex", "DihedralAngles: bad face pair", false);
  // Pairs (0,1..n) first, then (1,2..n), ...
  return i * n - i * (i - 1) / 2 + (j - i - 1);
}

std::pair<int, int> DihedralAngles::pair_at(int n, int index) {
  for (int i = 0; i < n; ++i) {
    const int count = n - i;
    if (index < count) return {i, i + 1 + index};
    index -= count;
  }
  throw Error("InvalidIndex", "DihedralAngles: pair index out of range", false);
}

double DihedralAngles::operator()(int i, int j) const { return angles_[pair_index(n_, i, j)]; }

bool SimplexClass::all_finite() const {
  return kind == SimplexKind::Hyperbolic &&
         std::all_of(vertex_types.begin(), vertex_types.end(), [](VertexType t) { return t == VertexType::Finite; });
}

bool SimplexClass::finite_or_ideal() const {
  return kind == SimplexKind::Hyperbolic &&
         std::none_of(vertex_types.begin(), vertex_types.end(),
                      [](VertexType t) { return t == VertexType::Hyperideal; });
}

AngleGram build_gram(const DihedralAngles& angles) {
  const int m = angles.dimension() + 1;
  AngleGram G = AngleGram::Identity(m, m);
  for (int k = 0; k < angles.pair_count(); ++k) {
    auto [i, j] = DihedralAngles::pair_at(angles.dimension(), k);
    G(i, j) = G(j, i) = -std::cos(angles.values()[k]);
  }
  return G;
}

CofactorTable cofactors(const AngleGram& G) {
  const int m = static_cast<int>(G.rows());
  CofactorTable C(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      C(i, j) = sign * det_or_one(remove_rows_cols(G, {i}, {j}));
    }
  return C;
}

SimplexClass classify(const AngleGram& G) {
  SimplexClass out;
  const int m = static_cast<int>(G.rows());
  out.det = G.determinant();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  for (int k = 0; k < m; ++k) {
    const double lambda = es.eigenvalues()[k];
    if (lambda > gram_tolerance::eigen)
      ++out.positive;
    else if (lambda < -gram_tolerance::eigen)
      ++out.negative;
    else
      ++out.zero;
  }

  if (std::abs(out.det) < gram_tolerance::det) {
    out.kind = SimplexKind::Degenerate;
    return out;
  }
  if (out.positive == m) {
    out.kind = SimplexKind::Spherical;
    return out;
  }
  std::ostringstream sig;
  sig << "(" << out.positive << "," << out.negative << "," << out.zero << ")";
  if (out.negative != 1 || out.positive != m - 1) {
    throw NotASimplex(sig.str(), "classify: Gram signature " + sig.str() +
                                     " is neither positive definite nor (n,1)");
  }

  out.kind = SimplexKind::Hyperbolic;
  const CofactorTable C = cofactors(G);
  const double band = ideal_band(G);
  for (int i = 0; i < m; ++i) {
    if (C(i, i) > band)
      out.vertex_types.push_back(VertexType::Finite);
    else if (C(i, i) < -band)
      out.vertex_types.push_back(VertexType::Hyperideal);
    else
      out.vertex_types.push_back(VertexType::Ideal);
  }
  // Finite and ideal vertices of a genuine simplex lie on one sheet: c_ij > 0.
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (out.vertex_types[i] == VertexType::Hyperideal || out.vertex_types[j] == VertexType::Hyperideal) continue;
      if (!(C(i, j) > 0.0)) {
        throw NotASimplex(sig.str(), "classify: cofactor c_" + std::to_string(i) + std::to_string(j) +
                                         " <= 0, vertices lie on opposite sheets");
      }
    }
  return out;
}

Eigen::MatrixXd edge_lengths(const AngleGram& G) {
  const SimplexClass cls = classify(G);
  const int m = static_cast<int>(G.rows());
  if (cls.kind == SimplexKind::Degenerate) throw Error("DegenerateGram", "edge_lengths: det G = 0");
  if (cls.kind == SimplexKind::Hyperbolic) {
    for (int i = 0; i < m; ++i)
      if (cls.vertex_types[i] != VertexType::Finite) {
        throw IdealOrHyperidealVertex(i, "edge_lengths: vertex " + std::to_string(i) + " is " +
                                             to_string(cls.vertex_types[i]));
      }
  }
  const CofactorTable C = cofactors(G);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double cross = cls.det * complementary_minor(G, i, j);  // c_ii c_jj - c_ij^2
      const double denom = std::sqrt(C(i, i) * C(j, j));
      double len;
      if (cls.kind == SimplexKind::Spherical) {
        len = std::atan2(std::sqrt(std::max(0.0, cross)), C(i, j));
      } else {
        len = std::asinh(std::sqrt(std::max(0.0, -cross)) / denom);
      }
      L(i, j) = L(j, i) = len;
    }
  return L;
}

std::vector<std::vector<TruncatedLength>> truncated_edge_lengths(const AngleGram& G) {
  const SimplexClass cls = classify(G);
  const int m = static_cast<int>(G.rows());
  std::vector<std::vector<TruncatedLength>> out(m, std::vector<TruncatedLength>(m));
  if (cls.kind != SimplexKind::Hyperbolic || cls.all_finite()) {
    const Eigen::MatrixXd L = edge_lengths(G);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[i][j].value = L(i, j);
    return out;
  }
  const CofactorTable C = cofactors(G);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      TruncatedLength t;
      const VertexType a = cls.vertex_types[i], b = cls.vertex_types[j];
      if (a == VertexType::Ideal || b == VertexType::Ideal) {
        t.value = std::numeric_limits<double>::infinity();
      } else if (a == VertexType::Finite && b == VertexType::Finite) {
        const double cross = cls.det * complementary_minor(G, i, j);
        t.value = std::asinh(std::sqrt(std::max(0.0, -cross)) / std::sqrt(C(i, i) * C(j, j)));
      } else if (a == VertexType::Hyperideal && b == VertexType::Hyperideal) {
        // Common perpendicular of the two polar planes.
        const double x = std::abs(C(i, j)) / std::sqrt(C(i, i) * C(j, j));
        t.truncated = true;
        if (x > 1.0)
          t.value = std::acosh(x);
        else {
          t.defined = false;
          t.value = std::numeric_limits<double>::quiet_NaN();
        }
      } else {
        // Finite vertex to the polar plane of the hyperideal one.
        t.truncated = true;
        t.value = std::asinh(std::abs(C(i, j)) / std::sqrt(std::abs(C(i, i) * C(j, j))));
      }
      out[i][j] = out[j][i] = t;
    }
  return out;
}

Realization realize(const AngleGram& G) {
  const SimplexClass cls = classify(G);
  const int m = static_cast<int>(G.rows());
  if (cls.kind == SimplexKind::Degenerate) throw Error("SingularGram", "realize: det G = 0");
  if (cls.kind == SimplexKind::Hyperbolic) {
    for (int i = 0; i < m; ++i)
      if (cls.vertex_types[i] != VertexType::Finite)
        throw IdealOrHyperidealVertex(i, "realize: vertex " + std::to_string(i) + " is " +
                                             to_string(cls.vertex_types[i]) + ", cannot scale onto the hyperboloid");
  }

  // Eigenvalues come sorted ascending, so the single negative one (if any)
  // lands in row 0, the timelike coordinate.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const Eigen::VectorXd root = es.eigenvalues().cwiseAbs().cwiseSqrt();
  Realization r;
  r.kind = cls.kind;
  r.normals = root.asDiagonal() * es.eigenvectors().transpose();

  const bool hyperbolic = cls.kind == SimplexKind::Hyperbolic;
  const Eigen::MatrixXd J = hyperbolic ? minkowski_J(m) : Eigen::MatrixXd::Identity(m, m);
  // S^t J W = I
  Eigen::MatrixXd W = (r.normals.transpose() * J).inverse();
  for (int i = 0; i < m; ++i) {
    const double q = W.col(i).dot(J * W.col(i));
    W.col(i) = -W.col(i) / std::sqrt(std::abs(q));
  }
  if (hyperbolic) {
    int past = 0;
    for (int i = 0; i < m; ++i)
      if (W(0, i) < 0.0) ++past;
    if (past == m) {
      W = -W;
      r.normals = -r.normals;
    } else if (past != 0) {
      throw NotASimplex("(n,1)", "realize: vertices fall on both sheets of the hyperboloid");
    }
  }
  r.vertices = W;
  r.length_gram = W.transpose() * J * W;
  return r;
}

double boundary_distance(const DihedralAngles& angles, const Eigen::VectorXd& direction, BoundaryKind kind) {
  const int n = angles.dimension();
  if (direction.size() != angles.pair_count()) {
    throw Error("InvalidDirection", "boundary_distance: direction has the wrong length", false);
  }
  double s_max = std::numeric_limits<double>::infinity();
  for (int k = 0; k < direction.size(); ++k) {
    const double d = direction[k];
    if (d > 0)
      s_max = std::min(s_max, (std::numbers::pi - angles.values()[k]) / d);
    else if (d < 0)
      s_max = std::min(s_max, angles.values()[k] / -d);
  }
  if (!std::isfinite(s_max)) throw Error("InvalidDirection", "boundary_distance: zero direction", false);

  auto gram_at = [&](double s) {
    const Eigen::VectorXd th = angles.values() + s * direction;
    AngleGram G = AngleGram::Identity(n + 1, n + 1);
    for (int k = 0; k < th.size(); ++k) {
      auto [i, j] = DihedralAngles::pair_at(n, k);
      G(i, j) = G(j, i) = -std::cos(th[k]);
    }
    return G;
  };

  // Predicate "still on the starting side"; throws NoBoundaryOnRay if the ray
  // leaves through the wrong boundary first.
  std::function<bool(double)> inside;
  const double det0 = gram_at(0.0).determinant();
  if (kind == BoundaryKind::Degenerate) {
    if (std::abs(det0) < gram_tolerance::det)
      throw Error("NoBoundaryOnRay", "boundary_distance: start point is already degenerate");
    inside = [&, det0](double s) {
      const double d = gram_at(s).determinant();
      return d * det0 > 0.0 && std::abs(d) >= gram_tolerance::det;
    };
  } else {
    const SimplexClass cls = classify(gram_at(0.0));
    if (!cls.all_finite())
      throw Error("NoBoundaryOnRay", "boundary_distance: ideal search needs a hyperbolic start with finite vertices");
    inside = [&](double s) {
      const AngleGram G = gram_at(s);
      const Eigen::MatrixXd C = cofactors(G);
      return C.diagonal().minCoeff() > 0.0;
    };
  }
  auto left_hyperbolic = [&](double s) { return !(gram_at(s).determinant() < -gram_tolerance::det); };

  constexpr int steps = 4096;
  double lo = 0.0, hi = -1.0;
  for (int k = 1; k <= steps; ++k) {
    const double s = (k == steps) ? s_max * (1.0 - 1e-12) : s_max * k / steps;
    if (kind == BoundaryKind::Ideal && left_hyperbolic(s)) {
      // Which came first inside (lo, s]: det = 0 or an ideal vertex?
      double a = lo, b = s;
      while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        (left_hyperbolic(mid) ? b : a) = mid;
      }
      if (inside(a)) throw Error("NoBoundaryOnRay", "boundary_distance: the ray leaves the hyperbolic region first");
      hi = a;
      break;
    }
    if (!inside(s)) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi < 0.0) {
    throw Error("NoBoundaryOnRay", "boundary_distance: the ray stays inside until it leaves (0, pi)^m");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::string to_string(SimplexKind kind) {
  switch (kind) {
    case SimplexKind::Spherical: return "Spherical";
    case SimplexKind::Hyperbolic: return "Hyperbolic";
    case SimplexKind::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string to_string(VertexType type) {
  switch (type) {
    case VertexType::Finite: return "Finite";
    case VertexType::Ideal: return "Ideal";
    case VertexType::Hyperideal: return "Hyperideal";
  }
  return "?";
}

}  // namespace hvol
