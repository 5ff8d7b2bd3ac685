#pragma once

#include <string>
#include <string_view>

#include "blochdiff/criteria.hpp"

namespace blochdiff {

/// Serializes a report with its provenance (grid, schedules, thresholds,
/// library version).  Non-finite numbers are written as strings.
std::string report_to_json(const CriterionReport& report, int indent = 2);

/// Inverse of report_to_json.  Throws ConfigError on malformed input.
CriterionReport report_from_json(std::string_view text);

}  // namespace blochdiff
