#pragma once

// RFC 4180 field formatting shared by every CSV writer.

#include <string>
#include <string_view>

namespace windffs {

/// Shortest round-trip-stable text used in all numeric columns (%.10g).
std::string csv_number(double v);

/// Quotes a text field when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);

}  // namespace windffs
