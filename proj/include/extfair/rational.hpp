#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace extfair {

// All arithmetic in the library is exact. Rat is a canonicalized
// arbitrary-precision rational.
using Rat = mpq_class;

// Accepts "p", "p/q" and plain decimal strings ("0.8", "-1.25", ".5").
// No exponents, no whitespace. Throws Error{ParseError}.
Rat parse_rational(std::string_view s);

// Canonical form: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

// Display helper only; never used for decisions.
double rat_to_double(const Rat& r);

inline Rat rat_int(long v) { return Rat(v); }

// p/q with canonicalization; q must be nonzero.
Rat rat_frac(long p, long q);

Rat vec_sum(const std::vector<Rat>& v);

} // namespace extfair
