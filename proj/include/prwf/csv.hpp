#pragma once

#include <optional>
#include <string>

namespace prwf {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Fixed 17 significant digits.
std::string format_double17(double v);

/// Empty string for nullopt.
std::string format_optional(const std::optional<double>& v);

}  // namespace prwf
