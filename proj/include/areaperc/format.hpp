#pragma once

#include <string>
#include <string_view>

namespace areaperc {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Parses the whole of `s` as a double; throws std::invalid_argument otherwise.
double parse_double(std::string_view s);

}  // namespace areaperc
