#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "blochdiff/symbol_expr.hpp"

namespace blochdiff {

/// Parses the tagged-record expression format, e.g.
///   {"type":"compose","outer":{"type":"mobius","lambda":[0.5,0]},
///    "inner":{"type":"power","base":{"type":"identity"},"n":2}}
///
/// Complex numbers are written [re, im] or as a bare real.  When `t` is given,
/// the string "t" may stand for any complex number (it becomes t + 0i), which
/// is how parametric families are expressed.  Throws ConfigError.
SymbolExpr parse_symbol(std::string_view json_text, std::optional<double> t = std::nullopt);

/// Inverse of parse_symbol.  Output is compact and key-ordered.
std::string symbol_to_json(const SymbolExpr& f);

}  // namespace blochdiff
