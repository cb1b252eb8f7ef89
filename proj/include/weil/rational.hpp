#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace weil {

// Exact scalar kind used for proofs-by-computation. Never silently
// converted to floating point; see to_double for the explicit bridge.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  return r.str();
}

// Parses "p", "-p", "p/q" or a decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

}  // namespace weil
