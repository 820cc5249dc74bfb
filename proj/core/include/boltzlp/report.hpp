#pragma once

#include <string>
#include <vector>

#include "boltzlp/inequalities.hpp"

namespace boltzlp {

/// Fixed-format float for reports: 17 significant digits, so identical
/// inputs serialize to byte-identical output.
std::string format_double(double value);

/// JSON array of reports with deterministic key order and number formatting.
std::string reports_to_json(const std::vector<InequalityReport>& reports);

}  // namespace boltzlp
