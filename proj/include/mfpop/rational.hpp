#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace mfpop {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p" or "p/q" (optional sign on p, q > 0 after canonicalization).
/// Throws Error{Parse} on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical lowest-terms form: "p" for integers, "p/q" with q > 0 otherwise.
std::string to_string(const Rational& q);

using RationalMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<long>>;
using IntVector = std::vector<long>;

}  // namespace mfpop
