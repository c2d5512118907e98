#pragma once

#include <string>
#include <string_view>

namespace capflow {

/// Locale-independent decimal text with 17 significant digits (round-trips
/// every double). NaN is written as "nan".
std::string format_double(double value);

/// Strict locale-independent parse; throws std::invalid_argument.
double parse_double(std::string_view text);

}  // namespace capflow
