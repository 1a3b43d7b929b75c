#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mero {

// Exact rationals. mpq_class keeps values canonical (reduced, den > 0) after
// every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "p/q" and an optional leading sign. Throws InvalidArgument.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

// Nearest long double (at least 60 correct bits for values in range).
long double to_long_double(const Rational& value);

Rational abs(const Rational& value);

}  // namespace mero
