#pragma once

// Minkowski space R^{3,1} and the hyperboloid model of H^3.
//
// Coordinate 0 is the timelike one: <x, y> = -x0*y0 + x1*y1 + x2*y2 + x3*y3.
// Points satisfy <x, x> = -1, x0 > 0; planes are represented by unit
// spacelike normals, <n, n> = +1.

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Core>
#include <Eigen/LU>

#include "hvol/errors.hpp"
#include "hvol/scalar.hpp"

namespace hvol {

namespace tolerance {
inline constexpr double geom = 1e-9;
inline constexpr double asymptotic_band = 1e-12;
inline constexpr double renorm_drift = 1e-6;
}  // namespace tolerance

template <typename S>
using MVector = Eigen::Matrix<S, 4, 1>;
template <typename S>
using MMatrix = Eigen::Matrix<S, 4, 4>;

template <typename S>
inline S mdot(const MVector<S>& u, const MVector<S>& v) {
  return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
}

template <typename S>
inline S mnorm2(const MVector<S>& u) {
  return mdot(u, u);
}

/// diag(-1, 1, 1, 1)
template <typename S>
inline MMatrix<S> minkowski_form() {
  MMatrix<S> J = MMatrix<S>::Identity();
  J(0, 0) = S(-1);
  return J;
}

/// Vector n with <n, a> = <n, b> = <n, c> = 0 (Minkowski orthogonal complement).
template <typename S>
MVector<S> lorentz_cross(const MVector<S>& a, const MVector<S>& b, const MVector<S>& c) {
  auto det3 = [&](int i, int j, int k) {
    return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
           a[k] * (b[i] * c[j] - b[j] * c[i]);
  };
  // Euclidean generalized cross product, then lowered with J.
  MVector<S> x;
  x[0] = det3(1, 2, 3);
  x[1] = -det3(0, 2, 3);
  x[2] = det3(0, 1, 3);
  x[3] = -det3(0, 1, 2);
  x[0] = -x[0];
  return x;
}

template <typename S>
class HPoint {
 public:
  /// Accepts coordinates already on the hyperboloid up to a relative drift of
  /// 1e-6 and renormalizes them; anything further off is rejected.
  explicit HPoint(const MVector<S>& x) {
    using std::abs;
    using std::max;
    const S q = mnorm2(x);
    const S scale = max(S(1), x[0] * x[0]);
    if (!(x[0] > S(0)) || !(abs(q + S(1)) <= S(tolerance::renorm_drift) * scale)) {
      throw Error("DomainError", "HPoint: coordinates are not on the upper hyperboloid");
    }
    x_ = x / sqrt_(-q);
  }

  /// Normalizes any timelike vector onto the upper sheet (past-pointing input is negated).
  static HPoint from_timelike(const MVector<S>& v) {
    const S q = mnorm2(v);
    if (!(q < S(0))) throw Error("DomainError", "HPoint: vector is not timelike");
    MVector<S> x = v / sqrt_(-q);
    if (x[0] < S(0)) x = -x;
    HPoint p;
    p.x_ = x;
    return p;
  }

  /// Trusts x to lie on the upper sheet already, as the image of a point
  /// under an isometry does. Renormalizing there would cancel badly once
  /// coordinates pass ~1e8.
  static HPoint isometry_image(const MVector<S>& x) {
    if (!(x[0] > S(0))) throw Error("DomainError", "HPoint: image is not on the upper sheet");
    HPoint p;
    p.x_ = x;
    return p;
  }

  static HPoint origin() {
    HPoint p;
    p.x_ = MVector<S>(S(1), S(0), S(0), S(0));
    return p;
  }

  const MVector<S>& coords() const { return x_; }
  const S& operator[](int i) const { return x_[i]; }

 private:
  HPoint() = default;
  static S sqrt_(const S& v) {
    using std::sqrt;
    return sqrt(v);
  }
  MVector<S> x_;
};

template <typename S>
class HPlane {
 public:
  explicit HPlane(const MVector<S>& n) {
    using std::abs;
    using std::max;
    using std::sqrt;
    const S q = mnorm2(n);
    const S scale = max(S(1), n.squaredNorm());
    if (!(abs(q - S(1)) <= S(tolerance::renorm_drift) * scale)) {
      throw Error("DomainError", "HPlane: normal is not a unit spacelike vector");
    }
    n_ = n / sqrt(q);
  }

  /// Normalizes any spacelike vector to a unit normal (orientation kept).
  static HPlane from_spacelike(const MVector<S>& v) {
    using std::sqrt;
    const S q = mnorm2(v);
    if (!(q > S(0))) throw Error("DomainError", "HPlane: vector is not spacelike");
    HPlane p;
    p.n_ = v / sqrt(q);
    return p;
  }

  static HPlane through(const MVector<S>& a, const MVector<S>& b, const MVector<S>& c) {
    return from_spacelike(lorentz_cross(a, b, c));
  }

  /// Image of a unit normal under an isometry; kept as is.
  static HPlane isometry_image(const MVector<S>& n) {
    HPlane p;
    p.n_ = n;
    return p;
  }

  const MVector<S>& normal() const { return n_; }
  HPlane flipped() const {
    HPlane p;
    p.n_ = -n_;
    return p;
  }

 private:
  HPlane() = default;
  MVector<S> n_;
};

template <typename S>
class HLine {
 public:
  HLine(const HPoint<S>& p, const HPoint<S>& q) : p_(p), q_(q) {
    using std::abs;
    using std::max;
    const S c = -mdot(p.coords(), q.coords());
    if (!(c - S(1) > S(1e-14) * max(S(1), c))) {
      throw Error("DegenerateLine", "HLine: endpoints coincide");
    }
  }
  const HPoint<S>& first() const { return p_; }
  const HPoint<S>& second() const { return q_; }

 private:
  HPoint<S> p_, q_;
};

/// Translation by r along the geodesic through the origin in the x1 direction.
template <typename S>
class Boost {
 public:
  explicit Boost(S r) : r_(r) {
    using std::cosh;
    using std::sinh;
    m_ = MMatrix<S>::Identity();
    m_(0, 0) = m_(1, 1) = cosh(r);
    m_(0, 1) = m_(1, 0) = sinh(r);
  }
  const S& parameter() const { return r_; }
  const MMatrix<S>& matrix() const { return m_; }

  MVector<S> operator*(const MVector<S>& v) const { return m_ * v; }
  HPoint<S> operator*(const HPoint<S>& p) const { return HPoint<S>::isometry_image(m_ * p.coords()); }
  HPlane<S> operator*(const HPlane<S>& P) const { return HPlane<S>::isometry_image(m_ * P.normal()); }
  Boost operator*(const Boost& other) const { return Boost(r_ + other.r_); }
  Boost inverse() const { return Boost(-r_); }

 private:
  S r_;
  MMatrix<S> m_;
};

/// -<p, q> = cosh d(p, q); throws if it drops below 1 - tolerance.
template <typename S>
S cosh_distance(const HPoint<S>& p, const HPoint<S>& q) {
  using std::max;
  const S c = -mdot(p.coords(), q.coords());
  if (c < S(1) - S(tolerance::geom) * max(S(1), p[0] * q[0])) {
    throw Error("DomainError", "point_distance: -<p,q> < 1, inputs are not on the hyperboloid");
  }
  return max(c, S(1));
}

template <typename S>
S point_distance(const HPoint<S>& p, const HPoint<S>& q) {
  using std::acosh;
  using std::asinh;
  using std::sqrt;
  const S c = cosh_distance(p, q);
  if (c < S(2)) {
    // <p-q, p-q> = 4 sinh^2(d/2); accurate for short distances.
    const MVector<S> diff = p.coords() - q.coords();
    const S m = mnorm2(diff);
    return m > S(0) ? S(2) * asinh(sqrt(m) / S(2)) : S(0);
  }
  return acosh(c);
}

/// log(-<p, q>) = log cosh d(p, q); stays finite for distances far beyond double's cosh range.
template <typename S>
S log_cosh_distance(const HPoint<S>& p, const HPoint<S>& q) {
  using std::log;
  return log(cosh_distance(p, q));
}

/// Inverse of log_cosh_distance: d = L + log(1 + sqrt(1 - exp(-2L))).
template <typename S>
S distance_from_log_cosh(const S& log_cosh) {
  using std::acosh;
  using std::exp;
  using std::log1p;
  using std::sqrt;
  if (log_cosh < S(1)) return acosh(exp(log_cosh));
  return log_cosh + log1p(sqrt(S(1) - exp(S(-2) * log_cosh)));
}

/// Signed distance from a point to a plane, positive on the side the normal points to.
template <typename S>
S signed_distance(const HPoint<S>& p, const HPlane<S>& P) {
  using std::asinh;
  return asinh(mdot(p.coords(), P.normal()));
}

struct Intersecting {
  double cos_angle;
};
struct Asymptotic {};
struct Ultraparallel {
  double distance;
};
using PlaneRelation = std::variant<Intersecting, Asymptotic, Ultraparallel>;

/// Classifies a pair of planes by |<n_P, n_Q>| against 1. Coincident planes
/// (normals equal up to sign) count as intersecting with cos = +-1.
template <typename S>
PlaneRelation plane_relation(const HPlane<S>& P, const HPlane<S>& Q) {
  using std::abs;
  using std::acosh;
  const S c = mdot(P.normal(), Q.normal());
  const S band(tolerance::asymptotic_band);
  if ((P.normal() - Q.normal()).norm() <= band || (P.normal() + Q.normal()).norm() <= band) {
    return Intersecting{c > S(0) ? 1.0 : -1.0};
  }
  if (abs(c) < S(1) - band) return Intersecting{to_double(c)};
  if (abs(c) <= S(1) + band) return Asymptotic{};
  return Ultraparallel{to_double(acosh(abs(c)))};
}

/// The point of M on P: the normalized combination <q,n> p - <p,n> q. Lines
/// contained in P return their first point.
template <typename S>
std::optional<HPoint<S>> line_plane_intersection(const HLine<S>& M, const HPlane<S>& P) {
  using std::abs;
  const MVector<S>& p = M.first().coords();
  const MVector<S>& q = M.second().coords();
  const MVector<S>& n = P.normal();
  const S pn = mdot(p, n);
  const S qn = mdot(q, n);
  const S tiny = S(1e-300) + S(4) * Eigen::NumTraits<S>::epsilon() * (abs(p[0]) + abs(q[0]));
  if (abs(pn) <= tiny && abs(qn) <= tiny) return M.first();
  const MVector<S> m = qn * p - pn * q;
  if (!(mnorm2(m) < S(0))) return std::nullopt;
  return HPoint<S>::from_timelike(m);
}

/// Unit tangent at a pointing toward b.
template <typename S>
MVector<S> unit_tangent(const HPoint<S>& a, const HPoint<S>& b) {
  using std::sqrt;
  const MVector<S> u = b.coords() + mdot(a.coords(), b.coords()) * a.coords();
  const S q = mnorm2(u);
  if (!(q > S(0))) throw Error("DegenerateLine", "unit_tangent: points coincide");
  return u / sqrt(q);
}

/// gamma(s) = a cosh s + u sinh s for a unit tangent u at a.
template <typename S>
HPoint<S> geodesic_point(const HPoint<S>& a, const MVector<S>& u, const S& s) {
  using std::cosh;
  using std::sinh;
  return HPoint<S>::from_timelike(cosh(s) * a.coords() + sinh(s) * u);
}

/// Projective (Klein) coordinates x_i / x_0 in the open unit ball.
template <typename S>
Eigen::Matrix<S, 3, 1> to_klein(const HPoint<S>& p) {
  return p.coords().template tail<3>() / p[0];
}

template <typename S>
HPoint<S> from_klein(const Eigen::Matrix<S, 3, 1>& k) {
  if (!(k.squaredNorm() < S(1))) throw Error("DomainError", "Klein point outside the unit ball");
  MVector<S> v;
  v << S(1), k[0], k[1], k[2];
  return HPoint<S>::from_timelike(v);
}

/// 4x4 determinant of the columns (a, b, c, d).
template <typename S>
S det4(const MVector<S>& a, const MVector<S>& b, const MVector<S>& c, const MVector<S>& d) {
  MMatrix<S> m;
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = c;
  m.col(3) = d;
  return m.determinant();
}

}  // namespace hvol
