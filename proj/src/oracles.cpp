#include "hvol/oracles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "hvol/errors.hpp"
#include "hvol/parallel.hpp"
#include "hvol/rng.hpp"

namespace hvol {

namespace {

constexpr double series_cutoff = 0.1;

// theta - theta log(2 theta) - sum a_n theta^(2n+1) / (2n+1), with
// log(sin t / t) = sum a_n t^2n. Twelve terms leave a remainder below
// (0.1 / pi)^24 at the cutoff.
double lobachevsky_series(double x) {
  if (x == 0.0) return 0.0;
  double s = x - x * std::log(2.0 * x);
  const double x2 = x * x;
  double p = x;
  for (int n = 1; n <= 12; ++n) {
    p *= x2;
    const double a = (n % 2 ? -1.0 : 1.0) * std::ldexp(1.0, 2 * n - 1) * boost::math::bernoulli_b2n<double>(n) /
                     (n * boost::math::factorial<double>(2 * n));
    s -= a * p / (2 * n + 1);
  }
  return s;
}

// 0 <= x <= pi/2
double lobachevsky_reduced(double x) {
  if (x < series_cutoff) return lobachevsky_series(x);
  // log(2 sin t) is analytic within 0.1 of every panel, so 20-point
  // Gauss-Legendre on panels of width <= 0.1 is exact to rounding.
  auto f = [](double t) { return std::log(2.0 * std::sin(t)); };
  const int panels = static_cast<int>(std::ceil((x - series_cutoff) / 0.1));
  const double h = (x - series_cutoff) / panels;
  double integral = 0.0;
  for (int i = 0; i < panels; ++i)
    integral += boost::math::quadrature::gauss<double, 20>::integrate(f, series_cutoff + i * h,
                                                                       series_cutoff + (i + 1) * h);
  return lobachevsky_series(series_cutoff) - integral;
}

struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t hits = 0;

  ChunkSums operator+(const ChunkSums& o) const { return {sum + o.sum, sum_sq + o.sum_sq, hits + o.hits}; }
};

// `draw` returns the weighted sample value, or a negative number on a miss.
template <typename Draw>
McResult run_chunks(const McConfig& cfg, double scale, Draw draw) {
  if (cfg.sample_count < 1) throw Error("InvalidConfig", "Monte-Carlo sample_count must be >= 1", false);
  const std::uint64_t chunks = (cfg.sample_count + mc_chunk_size - 1) / mc_chunk_size;
  const auto parts = map_chunks<ChunkSums>(chunks, [&](std::uint64_t c) {
    Philox rng(cfg.seed, c);
    const std::uint64_t begin = c * mc_chunk_size;
    const std::uint64_t end = std::min(cfg.sample_count, begin + mc_chunk_size);
    ChunkSums s;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double v = draw(rng);
      if (v < 0.0) continue;
      s.sum += v;
      s.sum_sq += v * v;
      ++s.hits;
    }
    return s;
  });
  const ChunkSums total = pairwise_sum(parts);
  const double n = static_cast<double>(cfg.sample_count);
  const double mean = total.sum / n;
  const double var = std::max(0.0, total.sum_sq / n - mean * mean);
  McResult r;
  r.estimate = scale * mean;
  r.standard_error = scale * std::sqrt(var / n);
  r.hits = total.hits;
  r.samples = cfg.sample_count;
  return r;
}

double klein_density(const Eigen::Vector3d& x) {
  const double q = 1.0 - x.squaredNorm();
  return 1.0 / (q * q);
}

}  // namespace

double lobachevsky(double theta) {
  if (!std::isfinite(theta)) throw Error("InvalidInput", "lobachevsky: non-finite argument", false);
  // pi-periodic and odd: reduce to [-pi/2, pi/2], then to [0, pi/2].
  double x = std::remainder(theta, std::numbers::pi);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  x = std::abs(x);
  return sign * lobachevsky_reduced(x);
}

double ideal_tetra_volume(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0 && beta > 0.0 && gamma > 0.0) || std::abs(alpha + beta + gamma - std::numbers::pi) > 1e-9) {
    throw Error("AngleSumViolation", "ideal_tetra_volume: angles must be positive and sum to pi");
  }
  return lobachevsky(alpha) + lobachevsky(beta) + lobachevsky(gamma);
}

McResult mc_volume_klein(const std::vector<Eigen::Vector3d>& points, const McConfig& cfg) {
  if (points.size() < 4) throw Error("DegenerateHull", "mc_volume_klein: need at least 4 points");
  for (const auto& p : points)
    if (!(p.squaredNorm() < 1.0)) throw Error("DomainError", "mc_volume_klein: point outside the unit ball");

  Eigen::MatrixXd spread(3, points.size() - 1);
  for (size_t i = 1; i < points.size(); ++i) spread.col(i - 1) = points[i] - points[0];
  const double scale = spread.cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(spread);
  if (!(svd.singularValues()[2] > 1e-12 * scale)) {
    throw Error("DegenerateHull", "mc_volume_klein: points are coplanar");
  }

  // Facet half-spaces a.x <= b from every triple with all points on one side.
  std::vector<std::pair<Eigen::Vector3d, double>> facets;
  const double tol = 1e-12 * scale * scale * scale;
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      for (size_t k = j + 1; k < points.size(); ++k) {
        Eigen::Vector3d a = (points[j] - points[i]).cross(points[k] - points[i]);
        if (a.norm() <= tol) continue;
        double b = a.dot(points[i]);
        bool above = false, below = false;
        for (const auto& p : points) {
          const double s = a.dot(p) - b;
          above |= s > tol;
          below |= s < -tol;
        }
        if (above && below) continue;
        if (above) {
          a = -a;
          b = -b;
        }
        facets.emplace_back(a, b);
      }

  Eigen::Vector3d lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double box = (hi - lo).prod();
  return run_chunks(cfg, box, [&](Philox& rng) {
    Eigen::Vector3d x;
    for (int d = 0; d < 3; ++d) x[d] = rng.uniform(lo[d], hi[d]);
    for (const auto& [a, b] : facets)
      if (a.dot(x) > b) return -1.0;
    return klein_density(x);
  });
}

McResult mc_volume_klein_region(const std::function<bool(const Eigen::Vector3d&)>& inside,
                                const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, const McConfig& cfg) {
  if (!((hi - lo).minCoeff() > 0.0)) throw Error("DegenerateHull", "mc_volume_klein_region: empty box");
  return run_chunks(cfg, (hi - lo).prod(), [&](Philox& rng) {
    Eigen::Vector3d x;
    for (int d = 0; d < 3; ++d) x[d] = rng.uniform(lo[d], hi[d]);
    if (!(x.squaredNorm() < 1.0) || !inside(x)) return -1.0;
    return klein_density(x);
  });
}

McResult mc_volume_sphere(const std::vector<Eigen::Vector4d>& normals, const McConfig& cfg) {
  const double total = 2.0 * std::numbers::pi * std::numbers::pi;
  McResult r = run_chunks(cfg, total, [&](Philox& rng) {
    Eigen::Vector4d x;
    for (int d = 0; d < 4; ++d) x[d] = rng.normal();
    for (const auto& n : normals)
      if (x.dot(n) > 0.0) return -1.0;
    return 1.0;
  });
  if (r.hits == 0) {
    throw Error("EmptyRegion", "mc_volume_sphere: no sample landed in the region (" +
                                   std::to_string(cfg.sample_count) + " samples)");
  }
  return r;
}

McResult mc_area_klein(const std::vector<Eigen::Vector2d>& polygon, const McConfig& cfg) {
  const size_t k = polygon.size();
  if (k < 3) throw Error("DegenerateFace", "mc_area_klein: need at least 3 vertices");
  double twice_area = 0.0;
  for (size_t i = 0; i < k; ++i) {
    const auto& p = polygon[i];
    const auto& q = polygon[(i + 1) % k];
    twice_area += p.x() * q.y() - p.y() * q.x();
  }
  if (std::abs(twice_area) < 1e-300) throw Error("DegenerateFace", "mc_area_klein: zero-area polygon");
  const double orient = twice_area > 0.0 ? 1.0 : -1.0;
  Eigen::Vector2d lo = polygon[0], hi = polygon[0];
  for (const auto& p : polygon) {
    if (!(p.squaredNorm() < 1.0)) throw Error("DomainError", "mc_area_klein: vertex outside the unit disk");
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return run_chunks(cfg, (hi - lo).prod(), [&](Philox& rng) {
    const Eigen::Vector2d x(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()));
    for (size_t i = 0; i < k; ++i) {
      const Eigen::Vector2d e = polygon[(i + 1) % k] - polygon[i];
      const Eigen::Vector2d w = x - polygon[i];
      if (orient * (e.x() * w.y() - e.y() * w.x()) < 0.0) return -1.0;
    }
    return std::pow(1.0 - x.squaredNorm(), -1.5);
  });
}

}  // namespace hvol
