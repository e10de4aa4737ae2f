#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace isoperim {

using Rational = mpq_class;

// Parses an exact rational literal. Accepted forms: "29/32", "-3", "0.01",
// "1e-6", "2.5E+3". Decimal and scientific literals are converted exactly
// (0.01 becomes 1/100), never through a binary float. Throws ParseError.
Rational parse_rational(std::string_view text);

// Like parse_rational but only accepts "NUM/DEN" or plain integers.
Rational parse_fraction(std::string_view text);

// Canonical "num/den" (or "num" when den == 1).
std::string to_string(const Rational& q);

}  // namespace isoperim
