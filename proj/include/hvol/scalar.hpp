#pragma once

// Scalar types used by the templated geometry. `double` is the default;
// `Extended` is a 160-digit binary float used where coordinates reach
// cosh(60) and angle excesses fall far below double's cancellation floor.

#include <cmath>
#include <limits>

#include <Eigen/Core>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace hvol {

using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>,
                                               boost::multiprecision::et_off>;

template <typename S>
inline S pi() {
  return boost::math::constants::pi<S>();
}

template <typename S>
inline double to_double(const S& x) {
  return static_cast<double>(x);
}

}  // namespace hvol

namespace Eigen {

// Boost 1.74's own Eigen adaptor predates Eigen 3.4 (missing infinity/quiet_NaN).
template <>
struct NumTraits<hvol::Extended> : GenericNumTraits<hvol::Extended> {
  using Real = hvol::Extended;
  using NonInteger = hvol::Extended;
  using Nested = hvol::Extended;
  using Literal = hvol::Extended;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16
  };
  static inline Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static inline Real dummy_precision() { return 1000 * epsilon(); }
  static inline Real highest() { return (std::numeric_limits<Real>::max)(); }
  static inline Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static inline int digits10() { return std::numeric_limits<Real>::digits10; }
  static inline int digits() { return std::numeric_limits<Real>::digits; }
  static inline Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static inline Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
};

}  // namespace Eigen
