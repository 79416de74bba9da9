#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace toeplitz {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational frac(std::int64_t num, std::int64_t den) { return Rational(num, den); }

// "a/b" (or "a" when the denominator is 1)
std::string to_string(const Rational& q);
std::string numerator_string(const Rational& q);
std::string denominator_string(const Rational& q);
double to_double(const Rational& q);

}  // namespace toeplitz
