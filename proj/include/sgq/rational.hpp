#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace sgq {

// Exact arbitrary-precision rational scalar used everywhere in the library.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& q) { return q.str(); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

}  // namespace sgq
