#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

namespace ncsphere {

// All rational arithmetic in the coefficient ring is arbitrary precision.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Int factorial(long n);

// binomial(n, k) with the convention that out-of-range k gives 0.
Int binomial(long n, long k);

// Floor square root of a nonnegative integer.
Int isqrt(const Int& n);

// Decomposes n > 0 as a^2 * d with d squarefree; returns (a, d).
// Trial division; inputs here are products of small factorials.
std::pair<Int, Int> extract_square(Int n);

// Rising factorial (a)_s = a (a+1) ... (a+s-1).
Rational pochhammer(const Rational& a, long s);

double to_double(const Rational& q);

// "3", "-1/2" -> exact rational. Throws std::invalid_argument on junk.
Rational parse_rational(const std::string& s);

// Half-integer labels are stored doubled: "3/2" -> 3, "2" -> 4, "-1/2" -> -1.
int parse_half_doubled(const std::string& s);
std::string half_to_string(long doubled);

}  // namespace ncsphere
