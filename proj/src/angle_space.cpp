#include "hvol/angle_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <set>

#include "hvol/errors.hpp"

namespace hvol {

namespace {

constexpr double kPi = std::numbers::pi;

struct Path {
  double weight = 0.0;
  std::vector<int> vertices;
  bool operator<(const Path& o) const {
    if (weight != o.weight) return weight < o.weight;
    return vertices < o.vertices;
  }
  bool operator==(const Path& o) const { return vertices == o.vertices; }
};

class ShortestPaths {
 public:
  ShortestPaths(const AbstractPolyhedron& C, const EdgeWeights& w) : C_(C), w_(w) {}

  // Dijkstra avoiding banned edges and vertices; ties broken by vertex index.
  std::optional<Path> shortest(int src, int dst, const std::set<int>& banned_edges,
                               const std::vector<char>& banned_vertices) const {
    const int n = C_.vertex_count();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      if (u == dst) break;
      for (int e : C_.vertex_edges(u)) {
        if (banned_edges.count(e)) continue;
        const auto& E = C_.edges()[e];
        const int v = E.a == u ? E.b : E.a;
        if (banned_vertices[v]) continue;
        const double nd = d + w_.values[e];
        if (nd < dist[v] || (nd == dist[v] && u < prev[v])) {
          dist[v] = nd;
          prev[v] = u;
          pq.push({nd, v});
        }
      }
    }
    if (!std::isfinite(dist[dst])) return std::nullopt;
    Path p;
    for (int v = dst; v != -1; v = prev[v]) p.vertices.push_back(v);
    std::reverse(p.vertices.begin(), p.vertices.end());
    p.weight = path_weight(p.vertices);
    return p;
  }

  double path_weight(const std::vector<int>& vs) const {
    double s = 0.0;
    for (size_t i = 0; i + 1 < vs.size(); ++i) s += w_.values[C_.edge_between(vs[i], vs[i + 1])];
    return s;
  }

  // Yen's K shortest simple paths.
  std::vector<Path> k_shortest(int src, int dst, int K, const std::set<int>& base_banned) const {
    std::vector<Path> A;
    std::set<Path> B;
    const std::vector<char> none(C_.vertex_count(), 0);
    auto first = shortest(src, dst, base_banned, none);
    if (!first) return A;
    A.push_back(*first);
    while (static_cast<int>(A.size()) < K) {
      const Path& last = A.back();
      for (size_t i = 0; i + 1 < last.vertices.size(); ++i) {
        const int spur = last.vertices[i];
        const std::vector<int> root(last.vertices.begin(), last.vertices.begin() + i + 1);
        std::set<int> banned = base_banned;
        for (const Path& p : A)
          if (p.vertices.size() > i + 1 && std::equal(root.begin(), root.end(), p.vertices.begin()))
            banned.insert(C_.edge_between(p.vertices[i], p.vertices[i + 1]));
        std::vector<char> blocked(C_.vertex_count(), 0);
        for (size_t j = 0; j < i; ++j) blocked[root[j]] = 1;
        auto tail = shortest(spur, dst, banned, blocked);
        if (!tail) continue;
        Path cand;
        cand.vertices = root;
        cand.vertices.insert(cand.vertices.end(), tail->vertices.begin() + 1, tail->vertices.end());
        cand.weight = path_weight(cand.vertices);
        if (std::find(A.begin(), A.end(), cand) == A.end()) B.insert(cand);
      }
      if (B.empty()) break;
      A.push_back(*B.begin());
      B.erase(B.begin());
    }
    return A;
  }

  std::vector<int> edges_of(const std::vector<int>& vs, bool closed) const {
    std::vector<int> out;
    for (size_t i = 0; i + 1 < vs.size(); ++i) out.push_back(C_.edge_between(vs[i], vs[i + 1]));
    if (closed && vs.size() > 2) out.push_back(C_.edge_between(vs.back(), vs.front()));
    return out;
  }

 private:
  const AbstractPolyhedron& C_;
  const EdgeWeights& w_;
};

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<int> labels_of(const AbstractPolyhedron& C, const std::vector<int>& vs) {
  std::vector<int> out;
  for (int v : vs) out.push_back(C.label(v));
  return out;
}

Violation make_violation(std::string condition, Witness witness, double lhs, std::string relation, double bound) {
  Violation v;
  v.condition = std::move(condition);
  v.witness = std::move(witness);
  v.lhs = lhs;
  v.relation = relation;
  v.bound = bound;
  v.slack = (relation == "<" || relation == "<=") ? bound - lhs : lhs - bound;
  return v;
}

// The third edge at each vertex of a quadrilateral face, in cycle order of the vertices.
std::vector<int> entering_edges(const AbstractPolyhedron& C, int f) {
  std::vector<int> out;
  const auto& fe = C.face_edges(f);
  for (int v : C.faces()[f]) {
    for (int e : C.vertex_edges(v))
      if (std::find(fe.begin(), fe.end(), e) == fe.end()) out.push_back(e);
  }
  return out;
}

struct LinearConstraint {
  std::string family;
  std::vector<int> edges;  // may repeat; coefficients are multiplicities
  double sign = 1.0;       // +1: sum > bound, -1: sum < bound
  double bound = 0.0;
  Witness witness;
};

std::vector<LinearConstraint> andreev_constraints(const AbstractPolyhedron& C,
                                                  const std::vector<Circuit>& c3, const std::vector<Circuit>& c4) {
  std::vector<LinearConstraint> out;
  for (int e = 0; e < C.edge_count(); ++e) {
    Witness w{"edge", {e}, labels_of(C, {C.edges()[e].a, C.edges()[e].b}), {}};
    out.push_back({"andreev-1-lower", {e}, +1.0, 0.0, w});
    out.push_back({"andreev-1-upper", {e}, -1.0, kPi / 2, w});
  }
  for (int v = 0; v < C.vertex_count(); ++v)
    out.push_back({"andreev-2", C.vertex_edges(v), +1.0, kPi, Witness{"vertex", C.vertex_edges(v), {C.label(v)}, {}}});
  for (const auto& c : c3)
    out.push_back({"andreev-3", c.edges, -1.0, kPi, Witness{"circuit", c.crossing_order, {}, c.faces}});
  for (const auto& c : c4)
    out.push_back({"andreev-4", c.edges, -1.0, 2 * kPi, Witness{"circuit", c.crossing_order, {}, c.faces}});
  for (int f = 0; f < C.face_count(); ++f) {
    if (C.faces()[f].size() != 4) continue;
    const auto& fe = C.face_edges(f);
    const auto in = entering_edges(C, f);
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<int> edges = in;
      edges.push_back(fe[parity]);
      edges.push_back(fe[parity + 2]);
      out.push_back({"andreev-5", edges, -1.0, 3 * kPi, Witness{"face", edges, labels_of(C, C.faces()[f]), {f}}});
    }
  }
  return out;
}

double constraint_norm(const std::vector<int>& edges) {
  std::map<int, int> mult;
  for (int e : edges) ++mult[e];
  double s = 0.0;
  for (auto [e, m] : mult) s += double(m) * m;
  return std::sqrt(s);
}

}  // namespace

AbstractPolyhedron AbstractPolyhedron::from_faces(const std::vector<std::vector<int>>& faces) {
  AbstractPolyhedron C;
  std::set<int> labels;
  for (const auto& f : faces) {
    if (f.size() < 3) throw InputError("abstract polyhedron: a face has fewer than 3 vertices");
    if (std::set<int>(f.begin(), f.end()).size() != f.size())
      throw InputError("abstract polyhedron: a face repeats a vertex");
    for (int v : f) {
      if (v < 0) throw InputError("abstract polyhedron: vertex labels must be non-negative");
      labels.insert(v);
    }
  }
  C.labels_.assign(labels.begin(), labels.end());
  C.vertex_edges_.resize(C.labels_.size());
  std::map<std::pair<int, int>, std::vector<int>> faces_of_edge;
  for (const auto& f : faces) {
    std::vector<int> idx;
    for (int v : f) idx.push_back(C.index_of_label(v));
    C.faces_.push_back(idx);
  }
  for (int fi = 0; fi < C.face_count(); ++fi) {
    const auto& f = C.faces_[fi];
    for (size_t i = 0; i < f.size(); ++i) {
      const int a = f[i], b = f[(i + 1) % f.size()];
      faces_of_edge[{std::min(a, b), std::max(a, b)}].push_back(fi);
    }
  }
  for (const auto& [ab, fs] : faces_of_edge) {
    if (fs.size() != 2 || fs[0] == fs[1]) {
      throw InputError("abstract polyhedron: edge " + std::to_string(C.labels_[ab.first]) + "-" +
                       std::to_string(C.labels_[ab.second]) + " lies in " + std::to_string(fs.size()) +
                       " faces (expected 2)");
    }
    const int e = static_cast<int>(C.edges_.size());
    C.edges_.push_back(Edge{ab.first, ab.second, std::min(fs[0], fs[1]), std::max(fs[0], fs[1])});
    C.edge_lookup_[ab] = e;
    C.vertex_edges_[ab.first].push_back(e);
    C.vertex_edges_[ab.second].push_back(e);
    if (!C.dual_lookup_.emplace(std::make_pair(C.edges_[e].f, C.edges_[e].g), e).second)
      throw InputError("abstract polyhedron: two faces share more than one edge");
  }
  for (const auto& f : C.faces_) {
    std::vector<int> fe;
    for (size_t i = 0; i < f.size(); ++i) fe.push_back(C.edge_between(f[i], f[(i + 1) % f.size()]));
    C.face_edges_.push_back(fe);
  }
  const int euler = C.vertex_count() - C.edge_count() + C.face_count();
  if (euler != 2) throw InputError("abstract polyhedron: Euler characteristic " + std::to_string(euler) + " != 2");
  return C;
}

int AbstractPolyhedron::index_of_label(int label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) throw InputError("unknown vertex label " + std::to_string(label));
  return static_cast<int>(it - labels_.begin());
}

int AbstractPolyhedron::edge_between(int a, int b) const {
  auto it = edge_lookup_.find({std::min(a, b), std::max(a, b)});
  return it == edge_lookup_.end() ? -1 : it->second;
}

int AbstractPolyhedron::dual_edge(int f, int g) const {
  auto it = dual_lookup_.find({std::min(f, g), std::max(f, g)});
  return it == dual_lookup_.end() ? -1 : it->second;
}

std::string AbstractPolyhedron::edge_name(int e) const {
  return std::to_string(labels_[edges_[e].a]) + "-" + std::to_string(labels_[edges_[e].b]);
}

EdgeWeights EdgeWeights::from_labels(const AbstractPolyhedron& C, const std::map<std::pair<int, int>, double>& w,
                                     WeightMode mode) {
  EdgeWeights out;
  out.mode = mode;
  out.values.assign(C.edge_count(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& [key, value] : w) {
    const int e = C.edge_between(C.index_of_label(key.first), C.index_of_label(key.second));
    if (e < 0) {
      throw InputError("weight given for " + std::to_string(key.first) + "-" + std::to_string(key.second) +
                       ", which is not an edge");
    }
    if (!(value > 0.0 && value < kPi)) {
      throw Error("InvalidWeight", "weight of edge " + C.edge_name(e) + " = " + std::to_string(value) +
                                       " is outside (0, pi)");
    }
    out.values[e] = value;
  }
  for (int e = 0; e < C.edge_count(); ++e)
    if (std::isnan(out.values[e])) throw InputError("missing weight for edge " + C.edge_name(e));
  return out;
}

EdgeWeights EdgeWeights::uniform(const AbstractPolyhedron& C, double w, WeightMode mode) {
  std::map<std::pair<int, int>, double> m;
  for (const auto& e : C.edges()) m[{C.label(e.a), C.label(e.b)}] = w;
  return from_labels(C, m, mode);
}

double weight_sum(const EdgeWeights& w, const std::vector<int>& edges) {
  double s = 0.0;
  for (int e : edges) s += w.values.at(e);
  return s;
}

std::vector<Circuit> enumerate_prismatic_circuits(const AbstractPolyhedron& C, int k) {
  if (k != 3 && k != 4) throw Error("InvalidInput", "prismatic circuits: k must be 3 or 4", false);
  const int F = C.face_count();
  std::map<std::vector<int>, Circuit> found;
  auto disjoint = [&](const std::vector<int>& es) {
    std::set<int> vs;
    for (int e : es) {
      if (!vs.insert(C.edges()[e].a).second || !vs.insert(C.edges()[e].b).second) return false;
    }
    return true;
  };
  std::vector<int> cyc(k);
  // Dual cycles f0 - f1 - ... - f_{k-1} - f0 of distinct faces, f0 the smallest.
  std::function<void(int)> extend = [&](int depth) {
    if (depth == k) {
      const int closing = C.dual_edge(cyc[k - 1], cyc[0]);
      if (closing < 0) return;
      std::vector<int> order;
      for (int i = 0; i + 1 < k; ++i) order.push_back(C.dual_edge(cyc[i], cyc[i + 1]));
      order.push_back(closing);
      if (!disjoint(order)) return;
      auto key = sorted(order);
      if (!found.count(key)) found[key] = Circuit{cyc, key, order};
      return;
    }
    for (int g = cyc[0] + 1; g < F; ++g) {
      if (std::find(cyc.begin(), cyc.begin() + depth, g) != cyc.begin() + depth) continue;
      if (C.dual_edge(cyc[depth - 1], g) < 0) continue;
      cyc[depth] = g;
      extend(depth + 1);
    }
  };
  for (int f = 0; f < F; ++f) {
    cyc[0] = f;
    extend(1);
  }
  std::vector<Circuit> out;
  for (auto& [key, c] : found) out.push_back(std::move(c));
  return out;
}

CheckReport andreev_check(const AbstractPolyhedron& C, const EdgeWeights& w) {
  if (w.mode != WeightMode::Andreev) throw Error("WrongMode", "andreev_check: weights are not in Andreev mode", false);
  if (C.face_count() <= 4) {
    throw Error("NotCovered", "andreev_check: Andreev's theorem needs more than 4 faces (got " +
                                  std::to_string(C.face_count()) + ")");
  }
  for (int v = 0; v < C.vertex_count(); ++v)
    if (C.degree(v) != 3) {
      throw Error("NonTrivalentVertex", "andreev_check: vertex " + std::to_string(C.label(v)) + " has degree " +
                                            std::to_string(C.degree(v)) + " (Andreev mode needs a simple polyhedron)");
    }
  const auto c3 = enumerate_prismatic_circuits(C, 3);
  const auto c4 = enumerate_prismatic_circuits(C, 4);
  CheckReport r;
  r.mode = WeightMode::Andreev;
  r.prismatic_3 = static_cast<int>(c3.size());
  r.prismatic_4 = static_cast<int>(c4.size());
  for (const auto& c : andreev_constraints(C, c3, c4)) {
    if (c.family == "andreev-1-lower") continue;  // guaranteed by the weight type
    const double lhs = weight_sum(w, c.edges);
    const bool strict = c.family != "andreev-1-upper";
    const double margin = c.sign * (lhs - c.bound);  // > 0 when satisfied
    const bool ok = strict ? margin > angle_equality_tol : margin >= -angle_equality_tol;
    if (ok) continue;
    const std::string condition = c.family == "andreev-1-upper" ? "andreev-1" : c.family;
    const std::string rel = c.sign > 0 ? ">" : (strict ? "<" : "<=");
    r.violations.push_back(make_violation(condition, c.witness, lhs, rel, c.bound));
  }
  r.accepted = r.violations.empty();
  return r;
}

namespace {

struct BaoBonahonScan {
  double min_circuit = std::numeric_limits<double>::infinity();
  double min_nonelementary = std::numeric_limits<double>::infinity();
  double min_path = std::numeric_limits<double>::infinity();
  Witness circuit_witness, nonelementary_witness, path_witness;
  std::vector<Violation> violations;
};

BaoBonahonScan scan_bao_bonahon(const AbstractPolyhedron& C, const EdgeWeights& w) {
  BaoBonahonScan s;
  ShortestPaths sp(C, w);
  std::set<std::vector<int>> face_sets;
  for (const auto& f : C.faces()) face_sets.insert(sorted(f));

  // Elementary circuits: face boundaries, equality allowed.
  for (int f = 0; f < C.face_count(); ++f) {
    const double sum = weight_sum(w, C.face_edges(f));
    Witness wit{"face", C.face_edges(f), labels_of(C, C.faces()[f]), {f}};
    if (sum < s.min_circuit) {
      s.min_circuit = sum;
      s.circuit_witness = wit;
    }
    if (sum < 2 * kPi - angle_equality_tol)
      s.violations.push_back(make_violation("bao-bonahon-circuit", wit, sum, ">=", 2 * kPi));
  }

  // Non-elementary circuits: through each edge, the 3 lightest cycles contain
  // at most 2 face boundaries.
  std::set<std::vector<int>> reported;
  for (int e = 0; e < C.edge_count(); ++e) {
    const auto& E = C.edges()[e];
    for (const Path& p : sp.k_shortest(E.a, E.b, 3, {e})) {
      const double weight = p.weight + w.values[e];
      auto edges = sp.edges_of(p.vertices, true);
      if (weight < s.min_circuit) {
        s.min_circuit = weight;
        s.circuit_witness = Witness{"cycle", edges, labels_of(C, p.vertices), {}};
      }
      if (face_sets.count(sorted(p.vertices))) continue;
      Witness wit{"cycle", edges, labels_of(C, p.vertices), {}};
      if (weight < s.min_nonelementary) {
        s.min_nonelementary = weight;
        s.nonelementary_witness = wit;
      }
      if (weight <= 2 * kPi + angle_equality_tol && reported.insert(sorted(edges)).second)
        s.violations.push_back(make_violation("bao-bonahon-circuit", wit, weight, ">", 2 * kPi));
      break;
    }
  }

  // Paths between two vertices of a face that leave the face boundary.
  std::set<std::vector<int>> reported_paths;
  for (int f = 0; f < C.face_count(); ++f) {
    const auto& cyc = C.faces()[f];
    const int k = static_cast<int>(cyc.size());
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        std::vector<int> arc1(cyc.begin() + i, cyc.begin() + j + 1);
        std::vector<int> arc2;
        for (int t = i; t != j; t = (t + k - 1) % k) arc2.push_back(cyc[t]);
        arc2.push_back(cyc[j]);
        for (const Path& p : sp.k_shortest(cyc[i], cyc[j], 3, {})) {
          if (p.vertices == arc1 || p.vertices == arc2) continue;
          Witness wit{"path", sp.edges_of(p.vertices, false), labels_of(C, p.vertices), {f}};
          if (p.weight < s.min_path) {
            s.min_path = p.weight;
            s.path_witness = wit;
          }
          if (p.weight <= kPi + angle_equality_tol && reported_paths.insert(sorted(wit.edges)).second)
            s.violations.push_back(make_violation("bao-bonahon-path", wit, p.weight, ">", kPi));
          break;
        }
      }
  }
  return s;
}

}  // namespace

CheckReport bao_bonahon_check(const AbstractPolyhedron& C, const EdgeWeights& w) {
  if (w.mode != WeightMode::BaoBonahon)
    throw Error("WrongMode", "bao_bonahon_check: weights are not in Bao-Bonahon mode", false);
  const BaoBonahonScan s = scan_bao_bonahon(C, w);
  CheckReport r;
  r.mode = WeightMode::BaoBonahon;
  r.violations = s.violations;
  r.min_circuit_weight = s.min_circuit;
  r.min_nonelementary_circuit_weight = s.min_nonelementary;
  r.min_path_weight = s.min_path;
  r.accepted = r.violations.empty();
  return r;
}

SlackReport boundary_slack(const AbstractPolyhedron& C, const EdgeWeights& w) {
  SlackReport out;
  out.mode = w.mode;
  if (w.mode == WeightMode::Andreev) {
    if (!andreev_check(C, w).accepted) throw Error("CheckFailed", "boundary_slack: Andreev check rejects the weights");
    const auto c3 = enumerate_prismatic_circuits(C, 3);
    const auto c4 = enumerate_prismatic_circuits(C, 4);
    std::map<std::string, SlackEntry> best;
    for (const auto& c : andreev_constraints(C, c3, c4)) {
      const double slack = c.sign * (weight_sum(w, c.edges) - c.bound) / constraint_norm(c.edges);
      auto it = best.find(c.family);
      if (it == best.end() || slack < it->second.slack) best[c.family] = SlackEntry{c.family, slack, c.witness};
    }
    out.minimum = std::numeric_limits<double>::infinity();
    for (auto& [name, entry] : best) {
      out.minimum = std::min(out.minimum, entry.slack);
      out.families.push_back(entry);
    }
    out.note = "Euclidean distance to the boundary of the Andreev constraint polytope";
    return out;
  }
  const BaoBonahonScan s = scan_bao_bonahon(C, w);
  if (!s.violations.empty()) throw Error("CheckFailed", "boundary_slack: Bao-Bonahon check rejects the weights");
  out.min_circuit_excess = s.min_circuit - 2 * kPi;
  out.min_nonelementary_excess = s.min_nonelementary - 2 * kPi;
  out.min_path_excess = s.min_path - kPi;
  out.families = {SlackEntry{"circuit", out.min_circuit_excess, s.circuit_witness},
                  SlackEntry{"non-elementary-circuit", out.min_nonelementary_excess, s.nonelementary_witness},
                  SlackEntry{"path", out.min_path_excess, s.path_witness}};
  out.minimum = std::min({out.min_circuit_excess, out.min_nonelementary_excess, out.min_path_excess});
  out.note = "slack bounds (weight excesses), not a Euclidean distance";
  return out;
}

std::string to_string(WeightMode mode) { return mode == WeightMode::Andreev ? "andreev" : "bao-bonahon"; }

}  // namespace hvol
