#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mctree {

// Exact rational scalar. gmp keeps every arithmetic result in lowest terms
// with a positive denominator; values built from raw parts must go through
// make_rational() or parse_rational() so that invariant survives.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

// Accepts "p/q", "p", "-p/q" with optional surrounding blanks.
// Throws ParseError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical form: "num/den" in lowest terms, "/den" omitted when den == 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

// Decimal rendering with 12 significant digits, for --float output.
double rounded_12(const Rational& value);

} // namespace mctree
