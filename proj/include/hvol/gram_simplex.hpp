#pragma once

// Angle Gram matrices of n-simplices in S^n, E^n and H^n.
//
// Faces are numbered 0..n; vertex i is the vertex opposite face i. The
// dihedral angle between faces i and j is theta_ij, and the Gram matrix is
// G_ij = -cos(theta_ij) with unit diagonal, i.e. the Gram matrix of the
// outward unit normals. The edge carrying theta_ij joins the two vertices
// whose indices are not i or j.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hvol/errors.hpp"

namespace hvol {

/// Dihedral angles theta_ij, 0 <= i < j <= n, stored in lexicographic pair
/// order (01, 02, ..., 0n, 12, ...).
class DihedralAngles {
 public:
  DihedralAngles(int dimension, Eigen::VectorXd angles);

  static DihedralAngles regular(int dimension, double theta);

  int dimension() const { return n_; }
  int pair_count() const { return static_cast<int>(angles_.size()); }
  const Eigen::VectorXd& values() const { return angles_; }
  double operator()(int i, int j) const;

  /// Position of the pair (i, j) in the flat ordering.
  static int pair_index(int dimension, int i, int j);
  static std::pair<int, int> pair_at(int dimension, int index);

 private:
  int n_;
  Eigen::VectorXd angles_;
};

using AngleGram = Eigen::MatrixXd;
using CofactorTable = Eigen::MatrixXd;

enum class VertexType { Finite, Ideal, Hyperideal };
enum class SimplexKind { Spherical, Hyperbolic, Degenerate };

struct SimplexClass {
  SimplexKind kind = SimplexKind::Degenerate;
  std::vector<VertexType> vertex_types;  // only filled for Hyperbolic
  double det = 0.0;
  int positive = 0, negative = 0, zero = 0;

  bool all_finite() const;
  bool finite_or_ideal() const;
};

struct Realization {
  Eigen::MatrixXd normals;   // S: columns are unit normals (outward)
  Eigen::MatrixXd vertices;  // W_s: columns are unit-scaled vertices
  Eigen::MatrixXd length_gram;  // G* = W_s^t J W_s (J = identity for spherical)
  SimplexKind kind = SimplexKind::Degenerate;
};

namespace gram_tolerance {
inline constexpr double det = 1e-12;
inline constexpr double ideal = 1e-10;
inline constexpr double eigen = 1e-12;
}  // namespace gram_tolerance

AngleGram build_gram(const DihedralAngles& angles);

/// Signed cofactors c_ij = (-1)^{i+j} det(G with row i and column j removed).
CofactorTable cofactors(const AngleGram& G);

/// Vertex types use the band |c_ii| <= 1e-10 * ||G||_F^n for Ideal.
SimplexClass classify(const AngleGram& G);

/// Lengths d(v_i, v_j) from cosh d = c_ij / sqrt(c_ii c_jj); hyperbolic with
/// finite vertices, or spherical (cos d = c_ij / sqrt(c_ii c_jj)).
Eigen::MatrixXd edge_lengths(const AngleGram& G);

/// Length convention when some vertices are not finite. Entries carry a flag
/// telling whether the value is a truncated length.
struct TruncatedLength {
  double value = 0.0;  // +inf for edges touching an ideal vertex
  bool truncated = false;
  bool defined = true;  // false when two polar planes intersect (no common perpendicular)
};
std::vector<std::vector<TruncatedLength>> truncated_edge_lengths(const AngleGram& G);

Realization realize(const AngleGram& G);

enum class BoundaryKind {
  Degenerate,  // det G = 0
  Ideal,       // min_i c_ii = 0 while staying hyperbolic
};

/// Ray parameter s* > 0 at which angles + s* dir reaches the boundary of the
/// given kind, bisected to 1e-12. Throws NoBoundaryOnRay.
double boundary_distance(const DihedralAngles& angles, const Eigen::VectorXd& direction,
                         BoundaryKind kind = BoundaryKind::Degenerate);

inline double boundary_distance_regular(const DihedralAngles& angles, const Eigen::VectorXd& direction) {
  return boundary_distance(angles, direction, BoundaryKind::Degenerate);
}

std::string to_string(SimplexKind kind);
std::string to_string(VertexType type);

}  // namespace hvol
