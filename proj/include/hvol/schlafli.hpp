#pragma once

// Volumes of 3-simplices from the Schlafli differential:
//   K dV = 1/(n-1) * sum_e len(e) d(theta_e),
// integrated along piecewise-linear paths in dihedral-angle space.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hvol/gram_simplex.hpp"

namespace hvol {

struct SchlafliContext {
  int curvature = -1;  // +1 spherical, -1 hyperbolic
  int dimension = 3;

  static SchlafliContext spherical() { return {+1, 3}; }
  static SchlafliContext hyperbolic() { return {-1, 3}; }
};

/// Piecewise-linear path through the listed angle vectors. The volume at the
/// first vertex is `anchor_volume`.
struct AnglePath {
  std::vector<Eigen::VectorXd> vertices;
  double anchor_volume = 0.0;
  std::string anchor_note;

  static AnglePath segment(const Eigen::VectorXd& from, const Eigen::VectorXd& to, double anchor_volume,
                           std::string note = {});
};

struct VolumeResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  int max_depth = 0;
  std::string anchor;
};

struct QuadratureOptions {
  double tol = 1e-8;
  int max_depth = 60;
  int sentinels = 64;  // per segment, used for path validity
};

/// dV/dtheta_e = len_e / (2K) for each dihedral pair in DihedralAngles order.
Eigen::VectorXd schlafli_gradient(const DihedralAngles& angles, const SchlafliContext& ctx);

/// V(end) = anchor + integral of the Schlafli form. Interior points must keep
/// one classification (spherical, or hyperbolic with finite vertices);
/// endpoints may sit on the boundary. Throws PathExitsDomain.
VolumeResult integrate_volume(const AnglePath& path, const SchlafliContext& ctx, const QuadratureOptions& opts = {});

struct HyperbolicVolumeOptions {
  /// Ray target used to find a Euclidean (det G = 0) anchor; default is the
  /// regular Euclidean tetrahedron, all angles arccos(1/3).
  std::optional<Eigen::VectorXd> ray_target;
  /// Defaults to 1e-8, or 1e-6 when the target itself has ideal vertices.
  std::optional<double> tol;
  /// Monte-Carlo check that the anchor simplex has vanishing volume.
  bool verify_anchor = true;
  std::uint64_t anchor_check_samples = 20000;
};

VolumeResult tetra_volume_hyperbolic(const DihedralAngles& angles, const HyperbolicVolumeOptions& opts = {});

struct SphericalVolumeOptions {
  /// Used for a two-leg route when the straight segment from the orthant leaves the domain.
  std::optional<Eigen::VectorXd> waypoint;
  double tol = 1e-8;
};

/// Integrates from the all-right orthant (V = pi^2 / 8).
VolumeResult simplex_volume_spherical(const DihedralAngles& angles, const SphericalVolumeOptions& opts = {});

/// Adaptive Gauss-Kronrod (7/15) with bisection; exposed for reuse and tests.
struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  int max_depth = 0;
};
QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                                    int max_depth = 60);

}  // namespace hvol
