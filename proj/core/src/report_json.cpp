#include "blochdiff/report_json.hpp"

#include <cmath>
#include <limits>

#include "blochdiff/errors.hpp"
#include "blochdiff/report_json_detail.hpp"
#include "blochdiff/symbol_json_detail.hpp"
#include "blochdiff/version.hpp"

namespace blochdiff {

namespace detail {

using nlohmann::json;

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("expected a number, got " + j.dump());
}

namespace {

json numbers_to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

std::vector<double> numbers_from_json(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number_from_json(x));
  return v;
}

json complex_to_json(Complex z) { return json::array({number_to_json(z.real()), number_to_json(z.imag())}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected [re, im], got " + j.dump());
  return {number_from_json(j[0]), number_from_json(j[1])};
}

json witnesses_to_json(const std::vector<Witness>& ws) {
  json a = json::array();
  for (const auto& w : ws) {
    a.push_back({{"label", w.label}, {"point", complex_to_json(w.point)},
                 {"value", number_to_json(w.value)}});
  }
  return a;
}

std::vector<Witness> witnesses_from_json(const json& j) {
  std::vector<Witness> ws;
  for (const auto& w : j) {
    ws.push_back({w.at("label").get<std::string>(), complex_from_json(w.at("point")),
                  number_from_json(w.at("value"))});
  }
  return ws;
}

json quantity_to_json(const Quantity& q) {
  return {{"value", number_to_json(q.value)},
          {"diverging", q.diverging},
          {"schedule", numbers_to_json(q.schedule)},
          {"trace", numbers_to_json(q.trace)},
          {"witnesses", witnesses_to_json(q.witnesses)}};
}

Quantity quantity_from_json(const json& j) {
  Quantity q;
  q.value = number_from_json(j.at("value"));
  q.diverging = j.at("diverging").get<bool>();
  q.schedule = numbers_from_json(j.at("schedule"));
  q.trace = numbers_from_json(j.at("trace"));
  q.witnesses = witnesses_from_json(j.at("witnesses"));
  return q;
}

json ess_a_to_json(const EssentialA& e) {
  return {{"r_schedule", numbers_to_json(e.r_schedule)},
          {"phi_term", numbers_to_json(e.phi_term)},
          {"psi_term", numbers_to_json(e.psi_term)},
          {"joint_term", numbers_to_json(e.joint_term)},
          {"total", numbers_to_json(e.total)},
          {"value", number_to_json(e.value)},
          {"monotone", e.monotone},
          {"diverging", e.diverging},
          {"witnesses", witnesses_to_json(e.witnesses)}};
}

EssentialA ess_a_from_json(const json& j) {
  EssentialA e;
  e.r_schedule = numbers_from_json(j.at("r_schedule"));
  e.phi_term = numbers_from_json(j.at("phi_term"));
  e.psi_term = numbers_from_json(j.at("psi_term"));
  e.joint_term = numbers_from_json(j.at("joint_term"));
  e.total = numbers_from_json(j.at("total"));
  e.value = number_from_json(j.at("value"));
  e.monotone = j.at("monotone").get<bool>();
  e.diverging = j.at("diverging").get<bool>();
  e.witnesses = witnesses_from_json(j.at("witnesses"));
  return e;
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "Yes") return Verdict::kYes;
  if (s == "No") return Verdict::kNo;
  if (s == "Inconclusive") return Verdict::kInconclusive;
  throw ConfigError("unknown verdict '" + s + "'");
}

json grid_to_json(const GridParams& g) {
  return {{"levels", g.levels},
          {"angular_density", g.angular_density},
          {"refinement_depth", g.refinement_depth}};
}

GridParams grid_from_json(const json& j, GridParams g) {
  if (!j.is_object()) throw ConfigError("grid parameters must be an object");
  if (j.contains("levels")) g.levels = j.at("levels").get<int>();
  if (j.contains("angular_density")) g.angular_density = j.at("angular_density").get<double>();
  if (j.contains("refinement_depth")) g.refinement_depth = j.at("refinement_depth").get<int>();
  return g;
}

json quad_to_json(const SymbolQuadruple& q) {
  return {{"phi", symbol_to_json_value(q.phi)},
          {"psi", symbol_to_json_value(q.psi)},
          {"g", symbol_to_json_value(q.g)},
          {"h", symbol_to_json_value(q.h)},
          {"alpha", q.alpha},
          {"beta", q.beta},
          {"declared_self_map", q.declared_self_map}};
}

SymbolQuadruple quad_from_json(const json& j) {
  SymbolQuadruple q;
  q.phi = symbol_from_json(j.at("phi"), std::nullopt);
  q.psi = symbol_from_json(j.at("psi"), std::nullopt);
  q.g = symbol_from_json(j.at("g"), std::nullopt);
  q.h = symbol_from_json(j.at("h"), std::nullopt);
  q.alpha = j.at("alpha").get<double>();
  q.beta = j.at("beta").get<double>();
  q.declared_self_map = j.value("declared_self_map", false);
  return q;
}

}  // namespace

json config_to_json_value(const CriteriaConfig& c) {
  const Thresholds& t = c.thresholds;
  return {{"grid", grid_to_json(c.grid)},
          {"inner_grid", grid_to_json(c.inner_grid)},
          {"n_schedule", c.n_schedule},
          {"r_schedule", c.r_schedule},
          {"a_samples",
           {{"per_ring", c.a_samples.per_ring}, {"witness_images", c.a_samples.witness_images}}},
          {"thresholds",
           {{"divergence_factor", t.divergence_factor},
            {"divergence_window", t.divergence_window},
            {"compact_epsilon", t.compact_epsilon},
            {"stagnation_ratio", t.stagnation_ratio},
            {"tail_n0", t.tail_n0},
            {"zero_floor", t.zero_floor}}},
          {"self_map", {{"margin", c.self_map_margin}, {"samples", c.self_map_samples}}}};
}

CriteriaConfig config_from_json_value(const json& j, CriteriaConfig c) {
  try {
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"), c.grid);
    if (j.contains("inner_grid")) c.inner_grid = grid_from_json(j.at("inner_grid"), c.inner_grid);
    if (j.contains("n_schedule")) c.n_schedule = j.at("n_schedule").get<std::vector<unsigned>>();
    if (j.contains("r_schedule")) c.r_schedule = j.at("r_schedule").get<std::vector<double>>();
    if (j.contains("a_samples")) {
      const auto& a = j.at("a_samples");
      c.a_samples.per_ring = a.value("per_ring", c.a_samples.per_ring);
      c.a_samples.witness_images = a.value("witness_images", c.a_samples.witness_images);
    }
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      Thresholds& d = c.thresholds;
      d.divergence_factor = t.value("divergence_factor", d.divergence_factor);
      d.divergence_window = t.value("divergence_window", d.divergence_window);
      d.compact_epsilon = t.value("compact_epsilon", d.compact_epsilon);
      d.stagnation_ratio = t.value("stagnation_ratio", d.stagnation_ratio);
      d.tail_n0 = t.value("tail_n0", d.tail_n0);
      d.zero_floor = t.value("zero_floor", d.zero_floor);
    }
    if (j.contains("self_map")) {
      const auto& s = j.at("self_map");
      c.self_map_margin = s.value("margin", c.self_map_margin);
      c.self_map_samples = s.value("samples", c.self_map_samples);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad criteria configuration: ") + e.what());
  }
  return c;
}

json report_to_json_value(const CriterionReport& r) {
  json cross = json::object();
  for (const auto& [k, v] : r.cross_ratios) cross[k] = number_to_json(v);
  json j;
  j["member_id"] = r.member_id;
  j["t"] = r.t ? json(number_to_json(*r.t)) : json(nullptr);
  j["quadruple"] = quad_to_json(r.quad);
  j["Q_iia"] = quantity_to_json(r.q_iia);
  j["Q_iib"] = quantity_to_json(r.q_iib);
  j["Q_iii"] = quantity_to_json(r.q_iii);
  j["Q_iv"] = quantity_to_json(r.q_iv);
  j["ess_A"] = ess_a_to_json(r.ess_a);
  j["ess_B"] = quantity_to_json(r.ess_b);
  j["ess_lower"] = quantity_to_json(r.ess_lower);
  j["bounded_verdict"] = to_string(r.bounded_verdict);
  j["compact_verdict"] = r.compact_verdict ? to_string(*r.compact_verdict) : "HypothesisUnmet";
  j["single_operators"] = {{"phi_g", to_string(r.phi_operator_bounded)},
                           {"psi_h", to_string(r.psi_operator_bounded)}};
  j["cross_ratios"] = std::move(cross);
  j["witnesses"] = witnesses_to_json(r.witnesses);
  j["provenance"] = {
      {"library_version", kVersion},
      {"config", config_to_json_value(r.config)},
      {"d_weight", "D_{phi,g}(z) = (1-|z|^2)^beta g(z) / (1-|phi(z)|^2)^alpha"},
  };
  return j;
}

CriterionReport report_from_json_value(const json& j) {
  try {
    CriterionReport r;
    r.member_id = j.at("member_id").get<std::string>();
    if (!j.at("t").is_null()) r.t = number_from_json(j.at("t"));
    r.quad = quad_from_json(j.at("quadruple"));
    r.q_iia = quantity_from_json(j.at("Q_iia"));
    r.q_iib = quantity_from_json(j.at("Q_iib"));
    r.q_iii = quantity_from_json(j.at("Q_iii"));
    r.q_iv = quantity_from_json(j.at("Q_iv"));
    r.ess_a = ess_a_from_json(j.at("ess_A"));
    r.ess_b = quantity_from_json(j.at("ess_B"));
    r.ess_lower = quantity_from_json(j.at("ess_lower"));
    r.bounded_verdict = verdict_from_string(j.at("bounded_verdict").get<std::string>());
    const auto cv = j.at("compact_verdict").get<std::string>();
    if (cv != "HypothesisUnmet") r.compact_verdict = verdict_from_string(cv);
    r.phi_operator_bounded =
        verdict_from_string(j.at("single_operators").at("phi_g").get<std::string>());
    r.psi_operator_bounded =
        verdict_from_string(j.at("single_operators").at("psi_h").get<std::string>());
    for (const auto& [k, v] : j.at("cross_ratios").items()) r.cross_ratios[k] = number_from_json(v);
    r.witnesses = witnesses_from_json(j.at("witnesses"));
    r.config = config_from_json_value(j.at("provenance").at("config"));
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace detail

std::string report_to_json(const CriterionReport& report, int indent) {
  return detail::report_to_json_value(report).dump(indent);
}

CriterionReport report_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  return detail::report_from_json_value(j);
}

}  // namespace blochdiff
