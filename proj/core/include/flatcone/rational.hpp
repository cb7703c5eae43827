#ifndef FLATCONE_RATIONAL_HPP_
#define FLATCONE_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace flatcone {

// Exact arithmetic used by the rational code paths (monomial filtrations,
// rational piecewise-linear functions, submultiplicativity brute force).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p/q", integers and finite decimals ("-0.125", "3e-2"); decimals
// are converted exactly, so "0.1" is 1/10 and not the nearest double.
Rational ParseRational(std::string_view text);

// Exact conversion of a finite double (every double is a dyadic rational).
Rational RationalFromDouble(double value);

inline double ToDouble(const Rational& value) { return value.convert_to<double>(); }
inline double ToDouble(double value) { return value; }

std::string ToString(const Rational& value);

}  // namespace flatcone

#endif  // FLATCONE_RATIONAL_HPP_
