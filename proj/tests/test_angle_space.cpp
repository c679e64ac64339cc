#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "hvol/angle_space.hpp"
#include "hvol/errors.hpp"
#include "hvol/io.hpp"
#include "hvol/rng.hpp"
#include "test_support.hpp"

using namespace hvol;
using namespace hvol::testing;

namespace {

AbstractInput fixture(const std::string& name) {
  return parse_abstract(parse_json_text(read_file(std::string(HVOL_FIXTURES) + "/" + name + ".json")));
}

AbstractPolyhedron shape(const std::string& name) { return AbstractPolyhedron::from_faces(fixture(name).faces); }

// Brute force: ordered face cycles with consecutive faces adjacent and all
// crossed edges pairwise vertex-disjoint, deduplicated by edge set.
std::set<std::vector<int>> brute_prismatic(const AbstractPolyhedron& C, int k) {
  std::set<std::vector<int>> out;
  const int nf = C.face_count();
  std::vector<int> seq;
  std::function<void()> rec = [&] {
    if (static_cast<int>(seq.size()) == k) {
      std::vector<int> edges;
      for (int i = 0; i < k; ++i) {
        const int e = C.dual_edge(seq[i], seq[(i + 1) % k]);
        if (e < 0) return;
        edges.push_back(e);
      }
      std::set<int> ends;
      for (int e : edges) {
        ends.insert(C.edges()[e].a);
        ends.insert(C.edges()[e].b);
      }
      if (static_cast<int>(ends.size()) != 2 * k) return;
      std::sort(edges.begin(), edges.end());
      out.insert(edges);
      return;
    }
    for (int f = 0; f < nf; ++f) {
      if (std::find(seq.begin(), seq.end(), f) != seq.end()) continue;
      if (!seq.empty() && C.dual_edge(seq.back(), f) < 0) continue;
      seq.push_back(f);
      rec();
      seq.pop_back();
    }
  };
  rec();
  return out;
}

struct BruteBB {
  double min_cycle = INFINITY, min_nonelementary = INFINITY, min_path = INFINITY;
};

// Exhaustive simple cycles and face-anchored paths in the 1-skeleton.
BruteBB brute_bao_bonahon(const AbstractPolyhedron& C, const EdgeWeights& w) {
  BruteBB r;
  const int nv = C.vertex_count();
  std::set<std::set<int>> face_sets;
  for (int f = 0; f < C.face_count(); ++f)
    face_sets.insert(std::set<int>(C.face_edges(f).begin(), C.face_edges(f).end()));
  auto other = [&](int e, int v) { return C.edges()[e].a == v ? C.edges()[e].b : C.edges()[e].a; };

  // Cycles: start at the smallest vertex of the cycle.
  std::vector<int> path_edges;
  std::vector<char> on(nv, 0);
  std::function<void(int, int, double)> cyc = [&](int start, int v, double acc) {
    for (int e : C.vertex_edges(v)) {
      const int u = other(e, v);
      if (u == start && path_edges.size() >= 2) {
        std::set<int> es(path_edges.begin(), path_edges.end());
        es.insert(e);
        const double total = acc + w.values[e];
        r.min_cycle = std::min(r.min_cycle, total);
        if (!face_sets.count(es)) r.min_nonelementary = std::min(r.min_nonelementary, total);
        continue;
      }
      if (u < start || on[u]) continue;
      on[u] = 1;
      path_edges.push_back(e);
      cyc(start, u, acc + w.values[e]);
      path_edges.pop_back();
      on[u] = 0;
    }
  };
  for (int s = 0; s < nv; ++s) {
    on[s] = 1;
    cyc(s, s, 0.0);
    on[s] = 0;
  }

  // Paths between two vertices of a face, other than the face's own boundary arcs.
  for (int f = 0; f < C.face_count(); ++f) {
    const std::set<int> fe(C.face_edges(f).begin(), C.face_edges(f).end());
    const auto& verts = C.faces()[f];
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j) {
        const int target = verts[j];
        std::function<void(int, double, bool)> walk = [&](int v, double acc, bool left_face) {
          if (v == target) {
            if (left_face) r.min_path = std::min(r.min_path, acc);
            return;
          }
          for (int e : C.vertex_edges(v)) {
            const int u = other(e, v);
            if (on[u]) continue;
            on[u] = 1;
            walk(u, acc + w.values[e], left_face || !fe.count(e));
            on[u] = 0;
          }
        };
        on[verts[i]] = 1;
        walk(verts[i], 0.0, false);
        on[verts[i]] = 0;
      }
  }
  return r;
}

bool has_condition(const CheckReport& r, const std::string& c) {
  for (const auto& v : r.violations)
    if (v.condition == c) return true;
  return false;
}

double family_slack(const SlackReport& s, const std::string& fam) {
  for (const auto& f : s.families)
    if (f.family == fam) return f.slack;
  FAIL("missing family " << fam);
  return 0;
}

}  // namespace

TEST_SUITE("angle_space") {
  TEST_CASE("combinatorics") {
    const auto cube = shape("cube_right_andreev");
    CHECK(cube.vertex_count() == 8);
    CHECK(cube.edge_count() == 12);
    CHECK(cube.face_count() == 6);
    CHECK(cube.edge_between(cube.index_of_label(0), cube.index_of_label(7)) == -1);
    CHECK_THROWS_AS(AbstractPolyhedron::from_faces({{0, 1, 2}, {0, 2, 1}}), InputError);
    CHECK_THROWS_AS(AbstractPolyhedron::from_faces({{0, 1, 2, 3}, {0, 3, 2, 1}}), InputError);
  }

  TEST_CASE("prismatic circuits against brute force") {
    const auto cube = shape("cube_right_andreev");
    const auto dod = shape("dodecahedron_right_andreev");
    const auto prism = shape("prism_right_andreev");
    CHECK(enumerate_prismatic_circuits(cube, 3).size() == 0);
    CHECK(enumerate_prismatic_circuits(cube, 4).size() == 3);
    CHECK(enumerate_prismatic_circuits(dod, 3).size() == 0);
    CHECK(enumerate_prismatic_circuits(dod, 4).size() == 0);
    CHECK(enumerate_prismatic_circuits(prism, 3).size() == 1);
    for (const auto* C : {&cube, &dod, &prism})
      for (int k : {3, 4}) {
        std::set<std::vector<int>> got;
        for (const auto& c : enumerate_prismatic_circuits(*C, k)) got.insert(c.edges);
        CHECK(got == brute_prismatic(*C, k));
      }
  }

  TEST_CASE("Andreev fixtures") {
    const auto in = fixture("cube_right_andreev");
    const auto cube = AbstractPolyhedron::from_faces(in.faces);
    const auto r = andreev_check(cube, EdgeWeights::from_labels(cube, in.weights, in.mode));
    CHECK_FALSE(r.accepted);
    REQUIRE(has_condition(r, "andreev-4"));
    int fours = 0;
    for (const auto& v : r.violations) {
      if (v.condition == "andreev-4") {
        ++fours;
        CHECK(v.witness.edges.size() == 4);
        CHECK(v.lhs == doctest::Approx(2 * kPi).epsilon(1e-15));
        CHECK(v.relation == "<");
      } else {
        CHECK(v.condition == "andreev-5");  // every face is a right-angled quadrilateral
        CHECK(v.witness.edges.size() == 6);
        CHECK(v.lhs == doctest::Approx(3 * kPi).epsilon(1e-15));
      }
    }
    CHECK(fours == 3);

    const auto dod = shape("dodecahedron_right_andreev");
    const auto rd = andreev_check(dod, EdgeWeights::uniform(dod, kPi / 2, WeightMode::Andreev));
    CHECK(rd.accepted);

    const auto prism = shape("prism_right_andreev");
    const auto rp = andreev_check(prism, EdgeWeights::uniform(prism, kPi / 2, WeightMode::Andreev));
    CHECK_FALSE(rp.accepted);
    CHECK(has_condition(rp, "andreev-3"));

    // Three pi/3 edges at one cube vertex sum to exactly pi.
    auto w = EdgeWeights::uniform(cube, kPi / 2, WeightMode::Andreev);
    for (int e : cube.vertex_edges(0)) w.values[e] = kPi / 3;
    CHECK(has_condition(andreev_check(cube, w), "andreev-2"));

    CHECK_THROWS_AS(andreev_check(cube, EdgeWeights::uniform(cube, 1.0, WeightMode::BaoBonahon)), Error);
    const auto tet = shape("tetrahedron_right_bb");
    CHECK_THROWS_AS(andreev_check(tet, EdgeWeights::uniform(tet, 1.0, WeightMode::Andreev)), Error);
  }

  TEST_CASE("Bao-Bonahon fixtures") {
    const auto in = fixture("tetrahedron_ideal_bb");
    const auto tet = AbstractPolyhedron::from_faces(in.faces);
    const auto w = EdgeWeights::from_labels(tet, in.weights, in.mode);
    const auto r = bao_bonahon_check(tet, w);
    CHECK(r.accepted);
    CHECK(r.min_circuit_weight == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(r.min_nonelementary_circuit_weight == doctest::Approx(8 * kPi / 3).epsilon(1e-14));
    const auto s = boundary_slack(tet, w);
    CHECK(std::abs(s.min_circuit_excess) < 1e-12);
    CHECK(s.min_nonelementary_excess == doctest::Approx(2 * kPi / 3).epsilon(1e-12));

    const auto rr = bao_bonahon_check(tet, EdgeWeights::uniform(tet, kPi / 2, WeightMode::BaoBonahon));
    CHECK_FALSE(rr.accepted);
    CHECK(has_condition(rr, "bao-bonahon-circuit"));
    CHECK_THROWS_AS(boundary_slack(tet, EdgeWeights::uniform(tet, kPi / 2, WeightMode::BaoBonahon)), Error);

    std::map<std::pair<int, int>, double> bad = in.weights;
    bad.begin()->second = kPi;
    CHECK_THROWS_AS(EdgeWeights::from_labels(tet, bad, in.mode), Error);
  }

  TEST_CASE("Bao-Bonahon extremes against exhaustive enumeration") {
    Philox rng(51, 0);
    for (const char* name : {"tetrahedron_ideal_bb", "cube_right_andreev", "prism_right_andreev"}) {
      const auto C = shape(name);
      for (int trial = 0; trial < 20; ++trial) {
        auto w = EdgeWeights::uniform(C, 1.0, WeightMode::BaoBonahon);
        for (auto& x : w.values) x = rng.uniform(0.3, 3.0);
        const auto r = bao_bonahon_check(C, w);
        const auto b = brute_bao_bonahon(C, w);
        CHECK(r.min_circuit_weight == doctest::Approx(b.min_cycle).epsilon(1e-12));
        CHECK(r.min_nonelementary_circuit_weight == doctest::Approx(b.min_nonelementary).epsilon(1e-12));
        CHECK(r.min_path_weight == doctest::Approx(b.min_path).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("slack values") {
    const auto dod = shape("dodecahedron_right_andreev");
    const auto s = boundary_slack(dod, EdgeWeights::uniform(dod, kPi / 2, WeightMode::Andreev));
    CHECK(family_slack(s, "andreev-2") == doctest::Approx(kPi / (2 * std::sqrt(3.0))).epsilon(1e-12));
    CHECK(std::abs(s.minimum) < 1e-12);  // all weights sit on the pi/2 cap
    const double d = 1e-3;
    const auto s2 = boundary_slack(dod, EdgeWeights::uniform(dod, kPi / 2 - d, WeightMode::Andreev));
    CHECK(family_slack(s2, "andreev-2") - family_slack(s, "andreev-2") ==
          doctest::Approx(-3 * d / std::sqrt(3.0)).epsilon(1e-9));
  }

  TEST_CASE("slack is 1-Lipschitz") {
    const auto dod = shape("dodecahedron_right_andreev");
    Philox rng(52, 0);
    for (int trial = 0; trial < 50; ++trial) {
      auto w1 = EdgeWeights::uniform(dod, 1.3, WeightMode::Andreev), w2 = w1;
      double norm2 = 0;
      for (size_t e = 0; e < w1.values.size(); ++e) {
        w1.values[e] += rng.uniform(-0.05, 0.05);
        w2.values[e] = w1.values[e] + rng.uniform(-0.02, 0.02);
        norm2 += (w2.values[e] - w1.values[e]) * (w2.values[e] - w1.values[e]);
      }
      const double a = boundary_slack(dod, w1).minimum, b = boundary_slack(dod, w2).minimum;
      CHECK(std::abs(a - b) <= std::sqrt(norm2) + 1e-12);
    }
  }

  TEST_CASE("monotone directions") {
    const auto cube = shape("cube_right_andreev");
    Philox rng(53, 0);
    for (int trial = 0; trial < 100; ++trial) {
      auto w = EdgeWeights::uniform(cube, 1.0, WeightMode::Andreev);
      for (auto& x : w.values) x = rng.uniform(0.9, 1.57);
      auto lower = w;
      lower.values[static_cast<size_t>(rng.uniform(0, 12))] *= 0.9;
      const auto r = andreev_check(cube, w), rl = andreev_check(cube, lower);
      if (!has_condition(r, "andreev-3")) CHECK_FALSE(has_condition(rl, "andreev-3"));
      if (!has_condition(r, "andreev-4")) CHECK_FALSE(has_condition(rl, "andreev-4"));
      if (!has_condition(rl, "andreev-2")) CHECK_FALSE(has_condition(r, "andreev-2"));
    }
  }
}
