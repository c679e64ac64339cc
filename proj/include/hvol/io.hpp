#pragma once

// File formats: simplex, polyhedron and abstract-polyhedron JSON inputs,
// JSON reports and RFC 4180 CSV with 17 significant digits.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "hvol/angle_space.hpp"
#include "hvol/degeneration.hpp"
#include "hvol/polyhedron.hpp"

namespace hvol {

using Json = nlohmann::ordered_json;

struct SimplexInput {
  int dimension = 3;
  std::string curvature;  // "spherical" | "hyperbolic" | "" (not given)
  Eigen::VectorXd angles;
};

struct AbstractInput {
  std::vector<std::vector<int>> faces;
  std::map<std::pair<int, int>, double> weights;
  WeightMode mode = WeightMode::Andreev;
};

/// All parsers throw InputError naming the offending field (and the byte
/// offset for malformed JSON).
Json parse_json_text(const std::string& text);
SimplexInput parse_simplex(const Json& j);
PolyhedronGeometry<double> parse_polyhedron(const Json& j);
AbstractInput parse_abstract(const Json& j);

std::string read_file(const std::string& path);

/// One CSV field: %.17g for numbers, quoted when needed for strings.
std::string csv_number(double v);
std::string csv_field(const std::string& s);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  size_t columns_;
  std::string out_;
};

/// Non-finite numbers become null.
Json json_number(double v);

Json to_json(const CheckReport& r, const AbstractPolyhedron& C);
Json to_json(const SlackReport& r, const AbstractPolyhedron& C);
Json to_json(const TrialReport& r);
Json to_json(const BeltReport& r);

}  // namespace hvol
