#ifndef FILTALG_RATIONAL_HPP
#define FILTALG_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "filtalg/errors.hpp"

namespace filtalg {

// Exact arithmetic everywhere.  cpp_rational keeps the canonical reduced
// form (gcd 1, positive denominator) for us.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

// "p/q" or plain "p".  Throws SchemaError on malformed input or q = 0.
Rational parse_rational(const std::string& s, const std::string& where = "rational");

// Inverse of parse_rational: "p" when the denominator is 1, else "p/q".
std::string rational_str(const Rational& q);

}  // namespace filtalg

#endif
