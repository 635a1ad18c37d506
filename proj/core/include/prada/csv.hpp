#pragma once

#include <istream>
#include <string>
#include <vector>

namespace prada {

/// Parse comma-delimited rows. Whitespace around cells is trimmed; blank
/// lines and lines starting with '#' are skipped.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// Fixed decimal places, e.g. 0.010700.
std::string format_fixed(double value, int decimals);

/// Significant digits, e.g. 1829.73 with 6 digits.
std::string format_general(double value, int significant_digits);

std::string join_csv(const std::vector<std::string>& cells);

}  // namespace prada
