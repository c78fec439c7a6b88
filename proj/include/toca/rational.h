#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace toca {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p/q", integers and plain decimals ("0.5", "1e-3" is rejected).
// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

BigInt ceil(const Rational& r);
BigInt floor(const Rational& r);

// Best rational approximation of `value` with denominator <= max_den, found by
// continued fractions. Used to re-read solver doubles as exact values.
Rational recover_rational(double value, std::int64_t max_den = 1'000'000);

// Exact rational value of a finite double.
Rational exact_rational(double value);

std::int64_t to_int64(const BigInt& v);

}  // namespace toca
