#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "arithdyn/exact/integer.hpp"
#include "arithdyn/exact/multipoly.hpp"
#include "arithdyn/exact/poly_z.hpp"

namespace arithdyn {

// Integer polynomial text: a sum of terms `c*v1^e1*v2^e2`. The `*` before a
// variable may be omitted after a coefficient; `**` is accepted for `^`.
// Unknown identifiers and non-integer coefficients raise ParseError.
MultiPoly parse_multipoly(std::string_view text, const std::vector<std::string>& names);

PolyZ parse_poly(std::string_view text, std::string_view var = "x");

// Optional sign followed by decimal digits.
Integer parse_integer(std::string_view text);

// `a`, `a/b`; the denominator must be nonzero.
Rational parse_rational(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace arithdyn
