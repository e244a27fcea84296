#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace opmin {

using Rational = mpq_class;
using QVector = std::vector<Rational>;

// "p/q" or "p"; throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace opmin
