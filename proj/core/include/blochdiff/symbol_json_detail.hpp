#pragma once

// nlohmann-level access to the expression format, for in-tree consumers
// (report serialization, the harness) that already hold parsed JSON.
// Not installed as part of the public surface.

#include <optional>

#include <json.hpp>

#include "blochdiff/symbol_expr.hpp"

namespace blochdiff::detail {

SymbolExpr symbol_from_json(const nlohmann::json& j, std::optional<double> t);
nlohmann::json symbol_to_json_value(const SymbolExpr& f);

}  // namespace blochdiff::detail
