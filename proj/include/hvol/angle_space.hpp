#pragma once

// Combinatorial angle-space membership: Andreev's conditions for non-obtuse
// compact polyhedra and the Bao-Bonahon conditions for hyperideal ones.

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hvol {

/// Planar graph given by its face cycles. Vertex labels are arbitrary
/// non-negative integers; internally vertices are indexed 0..V-1 in label order.
class AbstractPolyhedron {
 public:
  struct Edge {
    int a = 0, b = 0;  // vertex indices, a < b
    int f = 0, g = 0;  // the two faces containing the edge, f < g
  };

  /// Throws InvalidInput unless every edge lies in exactly two faces, faces
  /// are simple cycles and V - E + F = 2.
  static AbstractPolyhedron from_faces(const std::vector<std::vector<int>>& faces);

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  const std::vector<int>& labels() const { return labels_; }
  int label(int v) const { return labels_.at(v); }
  int index_of_label(int label) const;

  const std::vector<std::vector<int>>& faces() const { return faces_; }  // vertex indices
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& vertex_edges(int v) const { return vertex_edges_.at(v); }
  const std::vector<int>& face_edges(int f) const { return face_edges_.at(f); }  // in cycle order
  int degree(int v) const { return static_cast<int>(vertex_edges_.at(v).size()); }

  /// Edge index joining vertex indices a and b, or -1.
  int edge_between(int a, int b) const;
  /// Edge shared by faces f and g, or -1.
  int dual_edge(int f, int g) const;

  std::string edge_name(int e) const;  // "a-b" in labels

 private:
  std::vector<int> labels_;
  std::vector<std::vector<int>> faces_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<std::vector<int>> face_edges_;
  std::map<std::pair<int, int>, int> edge_lookup_;
  std::map<std::pair<int, int>, int> dual_lookup_;
};

enum class WeightMode { Andreev, BaoBonahon };

/// Per-edge weights: interior angles (Andreev) or exterior angles (Bao-Bonahon).
struct EdgeWeights {
  WeightMode mode = WeightMode::Andreev;
  std::vector<double> values;  // indexed by edge

  /// Every edge needs a weight in (0, pi); keys are (label, label) pairs in either order.
  static EdgeWeights from_labels(const AbstractPolyhedron& C, const std::map<std::pair<int, int>, double>& w,
                                 WeightMode mode);
  static EdgeWeights uniform(const AbstractPolyhedron& C, double w, WeightMode mode);
};

/// Dual circuit crossing `edges`; `faces` are visited in order, and faces[i]
/// and faces[i+1] share edges[i].
struct Circuit {
  std::vector<int> faces;
  std::vector<int> edges;  // sorted ascending (canonical key)
  std::vector<int> crossing_order;  // edges in traversal order
};

/// All dual k-circuits (k = 3 or 4) crossing k pairwise vertex-disjoint edges,
/// sorted by their edge sets.
std::vector<Circuit> enumerate_prismatic_circuits(const AbstractPolyhedron& C, int k);

struct Witness {
  std::string kind;  // "edge", "vertex", "circuit", "face", "cycle", "path"
  std::vector<int> edges;
  std::vector<int> vertices;  // labels, in order for cycles and paths
  std::vector<int> faces;
};

struct Violation {
  std::string condition;  // e.g. "andreev-4", "bao-bonahon-circuit"
  Witness witness;
  double lhs = 0.0;
  std::string relation;  // "<", "<=", ">", ">="
  double bound = 0.0;
  double slack = 0.0;  // signed; negative or zero when violated
};

struct CheckReport {
  bool accepted = false;
  WeightMode mode = WeightMode::Andreev;
  std::vector<Violation> violations;
  int prismatic_3 = 0, prismatic_4 = 0;
  // Bao-Bonahon extremes (valid in that mode).
  double min_circuit_weight = 0.0;
  double min_nonelementary_circuit_weight = 0.0;
  double min_path_weight = 0.0;
};

inline constexpr double angle_equality_tol = 1e-12;

/// Throws NotCovered for 4 or fewer faces and NonTrivalentVertex for vertices of degree != 3.
CheckReport andreev_check(const AbstractPolyhedron& C, const EdgeWeights& w);

CheckReport bao_bonahon_check(const AbstractPolyhedron& C, const EdgeWeights& w);

/// Sum of weights over a list of edges.
double weight_sum(const EdgeWeights& w, const std::vector<int>& edges);

struct SlackEntry {
  std::string family;  // constraint family
  double slack = 0.0;
  Witness witness;
};

struct SlackReport {
  WeightMode mode = WeightMode::Andreev;
  /// Andreev: Euclidean distance to the boundary of the constraint polytope.
  /// Bao-Bonahon: the smallest of the excesses below (a slack bound, not a distance).
  double minimum = 0.0;
  std::vector<SlackEntry> families;  // minimum per family
  // Bao-Bonahon only.
  double min_circuit_excess = 0.0;
  double min_nonelementary_excess = 0.0;
  double min_path_excess = 0.0;
  std::string note;
};

/// Throws CheckFailed if the corresponding check rejects.
SlackReport boundary_slack(const AbstractPolyhedron& C, const EdgeWeights& w);

std::string to_string(WeightMode mode);

}  // namespace hvol
