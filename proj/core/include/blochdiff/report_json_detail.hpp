#pragma once

// nlohmann-level report and configuration codecs for in-tree consumers.

#include <json.hpp>

#include "blochdiff/criteria.hpp"

namespace blochdiff::detail {

nlohmann::json report_to_json_value(const CriterionReport& report);
CriterionReport report_from_json_value(const nlohmann::json& j);

nlohmann::json config_to_json_value(const CriteriaConfig& config);
/// Missing keys keep their defaults from `base`.
CriteriaConfig config_from_json_value(const nlohmann::json& j, CriteriaConfig base = {});

nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

}  // namespace blochdiff::detail
