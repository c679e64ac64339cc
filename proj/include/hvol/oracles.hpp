#pragma once

// Brute-force references used to cross-check the geometry: the Lobachevsky
// function, Monte-Carlo volumes in the Klein ball and on S^3, and the
// ideal-tetrahedron volume formula.
//
// Monte-Carlo runs are split into chunks of 2^16 samples. Chunk i draws from
// Philox(seed, i), and chunk sums are combined pairwise in chunk order, so a
// (seed, sample_count) pair gives the same estimate for any thread count.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace hvol {

/// L(theta) = -int_0^theta log|2 sin t| dt.
double lobachevsky(double theta);

/// L(a) + L(b) + L(c) for a + b + c = pi (within 1e-9), all positive.
double ideal_tetra_volume(double alpha, double beta, double gamma);

struct McConfig {
  std::uint64_t sample_count = 1'000'000;
  std::uint64_t seed = 0;
};

struct McResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t mc_chunk_size = std::uint64_t{1} << 16;

/// Hyperbolic volume of the convex hull of Klein-ball points: the integral of
/// (1 - |x|^2)^-2 over the Euclidean hull, sampled in its bounding box.
McResult mc_volume_klein(const std::vector<Eigen::Vector3d>& points, const McConfig& cfg);

/// Same density over an arbitrary region inside the box [lo, hi].
McResult mc_volume_klein_region(const std::function<bool(const Eigen::Vector3d&)>& inside,
                                const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, const McConfig& cfg);

/// Volume of {x in S^3 : <x, n_i> <= 0 for all i} (outward normals), as the
/// hit fraction of uniform points on S^3 times 2 pi^2.
McResult mc_volume_sphere(const std::vector<Eigen::Vector4d>& normals, const McConfig& cfg);

/// Hyperbolic area of a convex polygon given in Klein-disk coordinates:
/// the integral of (1 - |x|^2)^-3/2 over the Euclidean polygon.
McResult mc_area_klein(const std::vector<Eigen::Vector2d>& polygon, const McConfig& cfg);

}  // namespace hvol
