#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace bblab {

using Int = mpz_class;
using Rat = mpq_class;

// Parses a non-negative integer written either as a plain decimal string
// (underscores and commas allowed as digit separators) or in scientific
// notation with a non-negative decimal mantissa, e.g. "3.8e21132".
// Scientific values must denote exact integers.
std::optional<Int> parse_big(const std::string& text);

// Renders n in scientific notation with the given number of significant
// digits, e.g. "4.6e1439". Small numbers are rendered exactly.
std::string to_sci(const Int& n, int sig_digits = 3);

}  // namespace bblab
