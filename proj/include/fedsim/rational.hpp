#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace fedsim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Floor toward negative infinity. All shares are nonnegative, but keep it general.
BigInt rational_floor(const Rational& r);

// Fixed-point decimal rendering with round-half-even, e.g. 4/3 -> "1.333333".
// Used for all exported decimals; exact values travel as num/den next to it.
std::string decimal_string(const Rational& r, int fractional_digits = 6);

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Accepts "3", "-1/20", or a plain decimal like "0.05". Throws std::runtime_error.
Rational parse_rational(const std::string& text);

}  // namespace fedsim
