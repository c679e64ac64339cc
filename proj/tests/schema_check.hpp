#pragma once

// Enough of JSON Schema 2020-12 for the report schemas: type, enum,
// properties, required, additionalProperties, items, anyOf, local $ref,
// minimum and the exclusive bounds. Returns the first mismatch as a path.

#include <optional>
#include <string>

#include <json.hpp>

namespace hvol::testing {

class SchemaCheck {
 public:
  explicit SchemaCheck(nlohmann::json root) : root_(std::move(root)) {}

  std::optional<std::string> operator()(const nlohmann::ordered_json& v) const { return check(root_, v, "$"); }

 private:
  nlohmann::json root_;

  static bool has_type(const nlohmann::ordered_json& v, const std::string& t) {
    if (t == "null") return v.is_null();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == std::floor(v.get<double>()));
    if (t == "number") return v.is_number();
    if (t == "string") return v.is_string();
    if (t == "array") return v.is_array();
    if (t == "object") return v.is_object();
    return false;
  }

  const nlohmann::json& resolve(const std::string& ref) const {
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
    return root_.at("$defs").at(ref.substr(prefix.size()));
  }

  std::optional<std::string> check(const nlohmann::json& s, const nlohmann::ordered_json& v, const std::string& at) const {
    if (s.contains("$ref")) return check(resolve(s["$ref"]), v, at);
    if (s.contains("anyOf")) {
      for (const auto& alt : s["anyOf"])
        if (!check(alt, v, at)) return std::nullopt;
      return at + ": matches no alternative";
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) return at + ": wrong type";
    }
    if (s.contains("enum")) {
      bool ok = false;
      for (const auto& e : s["enum"]) ok = ok || nlohmann::ordered_json(e) == v;
      if (!ok) return at + ": not in enum";
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (s.contains("minimum") && x < s["minimum"].get<double>()) return at + ": below minimum";
      if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) return at + ": below minimum";
      if (s.contains("exclusiveMaximum") && x >= s["exclusiveMaximum"].get<double>()) return at + ": above maximum";
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& k : s["required"])
          if (!v.contains(k.get<std::string>())) return at + ": missing " + k.get<std::string>();
      for (const auto& [k, x] : v.items()) {
        const std::string here = at + "." + k;
        if (s.contains("properties") && s["properties"].contains(k)) {
          if (auto e = check(s["properties"][k], x, here)) return e;
        } else if (s.contains("additionalProperties")) {
          const auto& ap = s["additionalProperties"];
          if (ap.is_boolean()) {
            if (!ap.get<bool>()) return here + ": unexpected key";
          } else if (auto e = check(ap, x, here)) {
            return e;
          }
        }
      }
    }
    if (v.is_array() && s.contains("items"))
      for (size_t i = 0; i < v.size(); ++i)
        if (auto e = check(s["items"], v[i], at + "[" + std::to_string(i) + "]")) return e;
    return std::nullopt;
  }
};

}  // namespace hvol::testing
