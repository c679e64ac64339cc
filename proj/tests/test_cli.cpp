#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hvol/commands.hpp"
#include "hvol/io.hpp"
#include "schema_check.hpp"
#include "test_support.hpp"

using namespace hvol;
using namespace hvol::testing;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("hvol_cli_" + name);
  std::ofstream(p) << body;
  return p.string();
}

std::string fixture(const std::string& name) { return std::string(HVOL_FIXTURES) + "/" + name + ".json"; }

SchemaCheck schema(const std::string& name) {
  return SchemaCheck(nlohmann::json::parse(read_file(std::string(HVOL_SCHEMAS) + "/" + name + ".schema.json")));
}

void require_schema(const std::string& name, const Json& j) {
  const auto err = schema(name)(j);
  INFO(name << ": " << err.value_or(""));
  CHECK_FALSE(err.has_value());
}

RunConfig config(const std::string& sub) {
  RunConfig c;
  c.subcommand = sub;
  return c;
}

std::string simplex_file(const std::string& tag, const std::string& curvature, double theta) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"dimension\": 3, \"curvature\": \"" << curvature << "\", \"angles\": [";
  for (int i = 0; i < 6; ++i) os << (i ? ", " : "") << theta;
  os << "]}";
  return temp_file(tag + ".json", os.str());
}

std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.push_back("");
    rows.push_back(f);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  REQUIRE(it != header.end());
  return static_cast<int>(it - header.begin());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("input schemas accept the fixtures") {
    for (const char* f : {"cube_right_andreev", "dodecahedron_right_andreev", "prism_right_andreev",
                          "tetrahedron_ideal_bb", "tetrahedron_right_bb"})
      CHECK_FALSE(schema("abstract-input")(parse_json_text(read_file(fixture(f)))).has_value());
    CHECK_FALSE(schema("simplex-input")(parse_json_text(read_file(simplex_file("in", "spherical", 1.0)))).has_value());
    CHECK(schema("simplex-input")(parse_json_text(read_file(simplex_file("bad", "spherical", 3.5)))).has_value());
  }

  TEST_CASE("simplex") {
    auto c = config("simplex");
    c.input = simplex_file("orthant", "spherical", kPi / 2);
    auto r = run_command(c);
    CHECK(r.exit_code == 0);
    Json j = parse_json_text(r.output);
    require_schema("simplex", j);
    CHECK(std::abs(j["volume"]["value"].get<double>() - kPi * kPi / 8) < 1e-10);
    CHECK(j["classification"]["kind"] == "Spherical");

    // Vertex links of the regular tetrahedron are spherical triangles with all
    // angles theta: finite when 3 theta > pi, hyperideal when 3 theta < pi.
    c.input = simplex_file("reg12", "hyperbolic", 1.2);
    c.samples = 20000;
    r = run_command(c);
    CHECK(r.exit_code == 0);
    j = parse_json_text(r.output);
    require_schema("simplex", j);
    CHECK(j["classification"]["kind"] == "Hyperbolic");
    for (const auto& v : j["classification"]["vertex_types"]) CHECK(v == "Finite");
    CHECK(j["volume"]["value"].get<double>() > 0);

    c.input = simplex_file("reg10", "hyperbolic", 1.0);
    r = run_command(c);
    CHECK(r.exit_code == 0);
    j = parse_json_text(r.output);
    require_schema("simplex", j);
    CHECK(j["classification"]["kind"] == "Hyperbolic");
    for (const auto& v : j["classification"]["vertex_types"]) CHECK(v == "Hyperideal");
    CHECK(j["volume"].is_null());

    c.input = simplex_file("bad", "hyperbolic", 3.5);
    r = run_command(c);
    CHECK(r.exit_code == 1);
    j = parse_json_text(r.output);
    require_schema("error", j);
    CHECK(j["error"] == "InvalidInput");
    CHECK(j["message"].get<std::string>().find("angles[0]") != std::string::npos);

    c.input = simplex_file("wrong", "spherical", 1.2);
    r = run_command(c);
    CHECK(r.exit_code == 2);
    require_schema("error", parse_json_text(r.output));

    c.input = temp_file("broken.json", "{\"dimension\": 3, \"angles\": [1.2,");
    r = run_command(c);
    CHECK(r.exit_code == 1);
    CHECK(parse_json_text(r.output)["message"].get<std::string>().find("byte") != std::string::npos);

    c.input = "/nonexistent/hvol.json";
    CHECK(run_command(c).exit_code == 1);
    c.input = simplex_file("orthant", "spherical", kPi / 2);
    c.format = "csv";
    CHECK(run_command(c).exit_code == 1);
  }

  TEST_CASE("validate") {
    auto c = config("validate");
    c.input = fixture("cube_right_andreev");
    auto r = run_command(c);
    CHECK(r.exit_code == 2);
    Json j = parse_json_text(r.output);
    require_schema("validate", j);
    bool equator = false;
    for (const auto& v : j["check"]["violations"])
      if (v["condition"] == "andreev-4" && v["witness"]["edges"].size() == 4 &&
          std::abs(v["lhs"].get<double>() - 2 * kPi) < 1e-15)
        equator = true;
    CHECK(equator);

    c.input = fixture("dodecahedron_right_andreev");
    r = run_command(c);
    CHECK(r.exit_code == 0);
    require_schema("validate", parse_json_text(r.output));

    c.input = fixture("tetrahedron_ideal_bb");
    r = run_command(c);
    CHECK(r.exit_code == 0);
    j = parse_json_text(r.output);
    require_schema("validate", j);
    CHECK(j["slack"]["min_nonelementary_excess"].get<double>() == doctest::Approx(2 * kPi / 3).epsilon(1e-12));

    c.input = fixture("prism_right_andreev");
    CHECK(run_command(c).exit_code == 2);
    c.input = temp_file("nomode.json", "{\"faces\": [[0,1,2]], \"weights\": {}}");
    CHECK(run_command(c).exit_code == 1);
  }

  TEST_CASE("polyhedron") {
    // Klein cube [-0.3, 0.3]^3, faces counterclockwise from outside.
    std::ostringstream os;
    os << "{\"model\": \"klein\", \"vertices\": [";
    for (int i = 0; i < 8; ++i)
      os << (i ? ", " : "") << "[" << (i & 1 ? 0.3 : -0.3) << ", " << (i & 2 ? 0.3 : -0.3) << ", " << (i & 4 ? 0.3 : -0.3)
         << "]";
    os << "], \"faces\": [[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]]}";
    auto c = config("polyhedron");
    c.input = temp_file("cube.json", os.str());
    CHECK_FALSE(schema("polyhedron-input")(parse_json_text(read_file(c.input))).has_value());
    auto r = run_command(c);
    CHECK(r.exit_code == 0);
    Json j = parse_json_text(r.output);
    require_schema("polyhedron", j);
    for (const auto& f : j["geometry"]["faces"])
      CHECK(f["cone_angle"].get<double>() == doctest::Approx(2 * kPi + f["area"].get<double>()).epsilon(1e-12));
    for (const auto& e : j["geometry"]["edges"])
      CHECK(e["interior"].get<double>() + e["exterior"].get<double>() == doctest::Approx(kPi));

    c.input = temp_file("open.json",
                        "{\"model\": \"klein\", \"vertices\": [[0,0,0],[0.1,0,0],[0,0.1,0],[0,0,0.1]], "
                        "\"faces\": [[0,2,1],[0,1,3],[0,3,2]]}");
    r = run_command(c);
    CHECK(r.exit_code == 2);
    j = parse_json_text(r.output);
    require_schema("polyhedron", j);
    CHECK(j["geometry"].is_null());

    c.input = temp_file("outside.json", "{\"model\": \"klein\", \"vertices\": [[2,0,0]], \"faces\": [[0]]}");
    CHECK(run_command(c).exit_code == 1);
  }

  TEST_CASE("degenerate") {
    auto c = config("degenerate");
    c.k = 6;
    c.tau_min = 3;
    c.tau_max = 12;
    c.tau_steps = 10;
    const auto r = run_command(c);
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 11);
    const auto& h = rows[0];
    const int N = column(h, "N"), rho = column(h, "rho"), ex = column(h, "excess"), bd = column(h, "bound"),
              tau = column(h, "tau"), st = column(h, "status");
    for (size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i][st] == "ok");
      const double n = std::stod(rows[i][N]), p = std::stod(rows[i][rho]);
      CHECK(std::stod(rows[i][bd]) == doctest::Approx(12 * n * std::exp(-p / (2 * n))).epsilon(1e-14));
      CHECK(std::stod(rows[i][ex]) <= std::stod(rows[i][bd]));
      if (i > 1) {
        CHECK(std::stod(rows[i][ex]) < std::stod(rows[i - 1][ex]));
        CHECK(std::stod(rows[i][tau]) > std::stod(rows[i - 1][tau]));
      }
    }
    CHECK(run_command(c).output == r.output);

    c.format = "json";
    c.tau_steps = 3;
    const Json j = parse_json_text(run_command(c).output);
    require_schema("degenerate", j);
    CHECK(j.size() == 3);

    c.k = 2;
    CHECK(run_command(c).exit_code == 1);
  }

  TEST_CASE("regularity") {
    auto c = config("regularity");
    c.points = 10;
    auto r = run_command(c);
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 11);
    const int slope = column(rows[0], "edge_slope"), vol = column(rows[0], "volume"), d = column(rows[0], "d");
    const double b = std::stod(rows[1][slope]);
    CHECK(b >= 0.8);
    CHECK(b <= 1.2);
    for (size_t i = 3; i < rows.size(); ++i) {
      const double d1 = std::stod(rows[i][vol]) - std::stod(rows[i - 1][vol]);
      const double d0 = std::stod(rows[i - 1][vol]) - std::stod(rows[i - 2][vol]);
      CHECK(std::abs(d1) < std::abs(d0));
      CHECK(std::stod(rows[i][d]) < std::stod(rows[i - 1][d]));
    }

    c.format = "json";
    c.points = 5;
    const Json j = parse_json_text(run_command(c).output);
    require_schema("regularity", j);

    c.format = "";
    c.direction = std::vector<double>(6, 1.0);
    r = run_command(c);
    CHECK(r.exit_code == 2);
    CHECK(parse_json_text(r.output)["error"] == "NoBoundaryOnRay");
  }

  TEST_CASE("lemmas") {
    auto c = config("lemmas");
    c.trials = 500;
    const auto r = run_command(c);
    CHECK(r.exit_code == 0);
    const Json j = parse_json_text(r.output);
    require_schema("lemmas", j);
    for (const char* lemma : {"angle", "distance", "spherical"})
      for (const auto& t : j[lemma]) CHECK(t["violations"] == 0);
    CHECK(j["angle"].size() == 3);
    CHECK(j["spherical"].size() == 2);
    CHECK(run_command(c).output == r.output);

    c.trials = 0;
    const auto e = run_command(c);
    CHECK(e.exit_code == 0);
    const Json je = parse_json_text(e.output);
    require_schema("lemmas", je);
    CHECK(je["angle"].empty());
    CHECK(je["distance"].empty());
    CHECK(je["spherical"].empty());

    c.trials = 10;
    c.eps_list = {1.5};
    CHECK(run_command(c).exit_code == 1);
  }

  TEST_CASE("unknown subcommand") {
    const auto r = run_command(config("nope"));
    CHECK(r.exit_code == 1);
    require_schema("error", parse_json_text(r.output));
  }
}
