#pragma once

#include <string>
#include <string_view>

namespace cachemodel {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// The double nearest to the decimal number `literal` * 10^exponent. The shift
// is applied to the decimal exponent, so no binary rounding happens before the
// final conversion.
double decimal_shift_literal(std::string_view literal, int exponent);

// decimal_shift_literal(format_double(value), exponent), so that e.g. 0.049
// scaled by -9 is the double nearest 4.9e-11.
double decimal_shift(double value, int exponent);

// A JSON-compatible decimal literal for `value` * 10^exponent, built from the
// shortest digits of `value`. Always contains '.' or 'e', and
// decimal_shift_literal(result, -exponent) == value.
std::string shifted_literal(double value, int exponent);

} // namespace cachemodel
