#pragma once

#include <string>

namespace netmorph {

/// Shortest decimal text that parses back to the same double; "nan", "inf"
/// and "-inf" for non-finite values.
std::string format_double(double v);

/// Strict parse of a whole string as a double. Returns false on any
/// leftover characters.
bool parse_double(const std::string& text, double& out);

}  // namespace netmorph
