#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "error.hpp"

namespace lucid {

using Integer = boost::multiprecision::cpp_int;
// cpp_rational keeps gcd(num, den) = 1 and den > 0 on its own; zero is 0/1.
using Rational = boost::multiprecision::cpp_rational;

inline Integer rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const Rational& r) { return r.str(); }
inline std::string to_string(const Integer& i) { return i.str(); }

// "12", "-3", "3/4", "-3/4". Anything else is a parse error.
Rational parse_rational(const std::string& text);

// r^e for any integer e; e < 0 with r == 0 raises a singularity error.
Rational rat_pow(const Rational& r, long long e);

// gcd(a/b, c/d) = gcd(a,c)/lcm(b,d), nonnegative. gcd(0, x) = |x|.
Rational rat_gcd(const Rational& a, const Rational& b);

}  // namespace lucid
