#include "blochdiff/symbol_json.hpp"

#include <json.hpp>

#include "blochdiff/errors.hpp"
#include "blochdiff/symbol_json_detail.hpp"

namespace blochdiff {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j, std::optional<double> t, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string() && j.get<std::string>() == "t") {
    if (!t) throw ConfigError(std::string(what) + ": \"t\" used outside a family");
    return {*t, 0.0};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(std::string(what) + ": expected [re, im], a number or \"t\"");
}

DiskPoint parse_disk_point(const json& j, std::optional<double> t, const char* what) {
  try {
    return DiskPoint(parse_complex(j, t, what));
  } catch (const DomainError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

unsigned parse_exponent(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(std::string(what) + ": exponent must be a non-negative integer");
  }
  return static_cast<unsigned>(j.get<long long>());
}

const json& field(const json& j, const char* key, const std::string& type) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError("expression of type \"" + type + "\" is missing \"" + key + "\"");
  }
  return *it;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

}  // namespace

namespace detail {

SymbolExpr symbol_from_json(const json& j, std::optional<double> t) {
  if (!j.is_object()) throw ConfigError("expression must be a JSON object");
  auto it = j.find("type");
  if (it == j.end() || !it->is_string()) {
    throw ConfigError("expression is missing a string \"type\"");
  }
  const std::string type = it->get<std::string>();

  if (type == "constant") return SymbolExpr::constant(parse_complex(field(j, "c", type), t, "constant.c"));
  if (type == "identity") return SymbolExpr::identity();
  if (type == "monomial") return SymbolExpr::monomial(parse_exponent(field(j, "n", type), "monomial.n"));
  if (type == "mobius") return SymbolExpr::mobius(parse_disk_point(field(j, "lambda", type), t, "mobius.lambda"));
  if (type == "blaschke") {
    const json& zs = field(j, "zeros", type);
    if (!zs.is_array() || zs.empty()) throw ConfigError("blaschke.zeros must be a non-empty array");
    std::vector<DiskPoint> zeros;
    for (const auto& z : zs) zeros.push_back(parse_disk_point(z, t, "blaschke.zeros"));
    return SymbolExpr::blaschke(std::move(zeros));
  }
  if (type == "scale") {
    return SymbolExpr::scale(parse_complex(field(j, "c", type), t, "scale.c"),
                             symbol_from_json(field(j, "inner", type), t));
  }
  if (type == "power") {
    return SymbolExpr::power(symbol_from_json(field(j, "base", type), t),
                             parse_exponent(field(j, "n", type), "power.n"));
  }
  if (type == "compose") {
    return SymbolExpr::compose(symbol_from_json(field(j, "outer", type), t),
                               symbol_from_json(field(j, "inner", type), t));
  }
  if (type == "sum" || type == "product") {
    const char* key = type == "sum" ? "terms" : "factors";
    const json& items = field(j, key, type);
    if (!items.is_array() || items.empty()) {
      throw ConfigError(type + "." + key + " must be a non-empty array");
    }
    std::vector<SymbolExpr> children;
    for (const auto& c : items) children.push_back(symbol_from_json(c, t));
    if (type == "product") return SymbolExpr::product(std::move(children));
    std::vector<Complex> coeffs;
    if (auto c = j.find("coeffs"); c != j.end()) {
      if (!c->is_array() || c->size() != children.size()) {
        throw ConfigError("sum.coeffs must match sum.terms in length");
      }
      for (const auto& x : *c) coeffs.push_back(parse_complex(x, t, "sum.coeffs"));
    }
    return SymbolExpr::sum(std::move(children), std::move(coeffs));
  }
  throw ConfigError("unknown expression type \"" + type + "\"");
}

json symbol_to_json_value(const SymbolExpr& f) {
  using Kind = SymbolExpr::Kind;
  switch (f.kind()) {
    case Kind::kConstant:
      return {{"type", "constant"}, {"c", complex_json(f.parameter())}};
    case Kind::kIdentity:
      return {{"type", "identity"}};
    case Kind::kMonomial:
      return {{"type", "monomial"}, {"n", f.exponent()}};
    case Kind::kMobius:
      return {{"type", "mobius"}, {"lambda", complex_json(f.parameter())}};
    case Kind::kBlaschke: {
      json zs = json::array();
      for (const Complex& a : f.zeros()) zs.push_back(complex_json(a));
      return {{"type", "blaschke"}, {"zeros", zs}};
    }
    case Kind::kPower:
      return {{"type", "power"}, {"base", symbol_to_json_value(f.children()[0])}, {"n", f.exponent()}};
    case Kind::kCompose:
      return {{"type", "compose"},
              {"outer", symbol_to_json_value(f.children()[0])},
              {"inner", symbol_to_json_value(f.children()[1])}};
    case Kind::kProduct: {
      json fs = json::array();
      for (const auto& c : f.children()) fs.push_back(symbol_to_json_value(c));
      return {{"type", "product"}, {"factors", fs}};
    }
    case Kind::kSum: {
      if (f.children().size() == 1) {
        return {{"type", "scale"},
                {"c", complex_json(f.coefficients()[0])},
                {"inner", symbol_to_json_value(f.children()[0])}};
      }
      json ts = json::array();
      json cs = json::array();
      for (const auto& c : f.children()) ts.push_back(symbol_to_json_value(c));
      for (const Complex& c : f.coefficients()) cs.push_back(complex_json(c));
      return {{"type", "sum"}, {"terms", ts}, {"coeffs", cs}};
    }
  }
  return {};
}

}  // namespace detail

SymbolExpr parse_symbol(std::string_view json_text, std::optional<double> t) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed expression JSON: ") + e.what());
  }
  return detail::symbol_from_json(j, t);
}

std::string symbol_to_json(const SymbolExpr& f) { return detail::symbol_to_json_value(f).dump(); }

}  // namespace blochdiff
