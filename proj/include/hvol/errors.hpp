#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hvol {

/// Base class for every error raised by the library. `name()` is the stable
/// identifier reported by the CLI (e.g. "PathExitsDomain").
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message, bool domain = true)
      : std::runtime_error(message), name_(std::move(name)), domain_(domain) {}

  const std::string& name() const noexcept { return name_; }

  /// Domain errors mean "the mathematical object is not in the supported
  /// region"; the rest are operational failures (bad input, I/O).
  bool is_domain() const noexcept { return domain_; }

 private:
  std::string name_;
  bool domain_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& message) : Error("InvalidInput", message, false) {}
};

class PathExitsDomain : public Error {
 public:
  PathExitsDomain(double s, const std::string& message)
      : Error("PathExitsDomain", message), s_(s) {}
  /// Path parameter in [0, 1] (global over the whole polyline) where the exit was located.
  double s() const noexcept { return s_; }

 private:
  double s_;
};

class NotASimplex : public Error {
 public:
  NotASimplex(std::string signature, const std::string& message)
      : Error("NotASimplex", message), signature_(std::move(signature)) {}
  const std::string& signature() const noexcept { return signature_; }

 private:
  std::string signature_;
};

class IdealOrHyperidealVertex : public Error {
 public:
  IdealOrHyperidealVertex(int vertex, const std::string& message)
      : Error("IdealOrHyperidealVertex", message), vertex_(vertex) {}
  int vertex() const noexcept { return vertex_; }

 private:
  int vertex_;
};

}  // namespace hvol
