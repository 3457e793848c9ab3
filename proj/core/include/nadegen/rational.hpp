#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace nadegen {

/// Exact rational number. Always kept in canonical (reduced) form.
using Rational = mpq_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Parses "p/q" or "p" (optional leading sign). Throws ValidationError on
/// malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are printed without the "/1".
std::string to_string(const Rational& q);

double to_double(const Rational& q);

}  // namespace nadegen
