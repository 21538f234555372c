#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

namespace opw {

// Ground field: arbitrary-precision rationals, always kept in lowest terms
// with positive denominator (the GMP canonical form).
using Rational = boost::multiprecision::mpq_rational;

inline std::string to_string(const Rational& q) { return q.str(); }

inline Rational rational_from_string(const std::string& s) { return Rational(s); }

}  // namespace opw
