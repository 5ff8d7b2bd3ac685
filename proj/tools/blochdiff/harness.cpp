#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "blochdiff/errors.hpp"
#include "blochdiff/report_json.hpp"
#include "blochdiff/report_json_detail.hpp"
#include "blochdiff/symbol_json_detail.hpp"
#include "blochdiff/version.hpp"

namespace blochdiff::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config parsing.

SymbolExpr symbol_field(const json& j, const char* key, std::optional<double> t,
                        const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing symbol '" + key + "'");
  try {
    return detail::symbol_from_json(j.at(key), t);
  } catch (const ConfigError& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void check_id(const std::string& id) {
  static const std::regex ok("[A-Za-z0-9_.-]+");
  if (!std::regex_match(id, ok)) {
    throw ConfigError("member id '" + id + "' must match [A-Za-z0-9_.-]+");
  }
}

SymbolQuadruple quadruple_from(const json& j, std::optional<double> t, const std::string& where,
                               double alpha, double beta) {
  SymbolQuadruple q;
  q.phi = symbol_field(j, "phi", t, where);
  q.psi = symbol_field(j, "psi", t, where);
  q.g = symbol_field(j, "g", t, where);
  q.h = symbol_field(j, "h", t, where);
  q.alpha = j.value("alpha", alpha);
  q.beta = j.value("beta", beta);
  q.declared_self_map = j.value("declared_self_map", false);
  return q;
}

void check_increasing(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw ConfigError(std::string(name) + " must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ConfigError(std::string(name) + " must be strictly increasing");
  }
}

void validate(ExperimentConfig& cfg) {
  const CriteriaConfig& c = cfg.criteria;
  if (cfg.members.empty()) throw ConfigError("config defines no quadruples");
  check_increasing({c.n_schedule.begin(), c.n_schedule.end()}, "n_schedule");
  check_increasing(c.r_schedule, "r_schedule");
  if (!(c.r_schedule.front() > 0.0) || !(c.r_schedule.back() < 1.0)) {
    throw ConfigError("r_schedule must lie in (0, 1)");
  }
  if (c.n_schedule.back() < c.thresholds.tail_n0) {
    throw ConfigError("n_schedule must reach thresholds.tail_n0");
  }
  try {
    SamplingGrid{c.grid};
    SamplingGrid{c.inner_grid};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  std::set<std::string> ids;
  for (const MemberSpec& m : cfg.members) {
    check_id(m.id);
    if (!ids.insert(m.id).second) throw ConfigError("duplicate member id '" + m.id + "'");
    try {
      validate_quadruple(m.quad, c.self_map_margin, c.self_map_samples);
    } catch (const std::exception& e) {
      throw ConfigError("member " + m.id + ": " + e.what());
    }
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, p);
}

// ---------------------------------------------------------------------------
// CSV formatting.

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(double v, bool diverging) { return diverging ? "Diverging" : num(v); }

std::string compact_string(const CriterionReport& r) {
  return r.compact_verdict ? to_string(*r.compact_verdict) : "HypothesisUnmet";
}

bool same_inputs(const CriterionReport& old, const MemberSpec& m, const CriteriaConfig& c) {
  CriterionReport probe;
  probe.member_id = m.id;
  probe.t = m.t;
  probe.quad = m.quad;
  probe.config = c;
  const json a = detail::report_to_json_value(old);
  const json b = detail::report_to_json_value(probe);
  return a.at("member_id") == b.at("member_id") && a.at("t") == b.at("t") &&
         a.at("quadruple") == b.at("quadruple") && a.at("provenance") == b.at("provenance");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const Overrides& overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    cfg.criteria = detail::config_from_json_value(j);
    const double alpha = j.value("alpha", 1.0);
    const double beta = j.value("beta", 1.0);
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("quadruples")) {
      for (const auto& q : j.at("quadruples")) {
        const std::string id = q.at("id").get<std::string>();
        cfg.members.push_back({id, std::nullopt, quadruple_from(q, std::nullopt, id, alpha, beta)});
      }
    }
    if (j.contains("family")) {
      const json families = j.at("family").is_array() ? j.at("family") : json::array({j.at("family")});
      for (const auto& f : families) {
        const std::string id = f.at("id").get<std::string>();
        const auto ts = f.at("t").get<std::vector<double>>();
        for (std::size_t k = 0; k < ts.size(); ++k) {
          const std::string mid = id + "_" + std::to_string(k);
          cfg.members.push_back({mid, ts[k], quadruple_from(f, ts[k], mid, alpha, beta)});
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  if (overrides.grid_levels) {
    cfg.criteria.grid.levels = *overrides.grid_levels;
    cfg.criteria.inner_grid.levels = *overrides.grid_levels;
  }
  if (overrides.nmax) cfg.criteria.n_schedule = CriteriaConfig::default_n_schedule(*overrides.nmax);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path, const Overrides& overrides) {
  return parse_experiment_config(read_file(path), overrides);
}

std::vector<CriterionReport> SweepResult::reports() const {
  std::vector<CriterionReport> out;
  for (const auto& m : members) {
    if (m.report) out.push_back(*m.report);
  }
  return out;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(members.begin(), members.end(), [](const auto& m) { return !m.report; }));
}

// ---------------------------------------------------------------------------
// Coherence.

double frozen_ratio_band(double alpha, double beta) {
  struct Band {
    double alpha, beta, c;
  };
  static constexpr Band kBands[] = {
      {1.0, 1.0, 4.0},
      {2.0, 1.0, 4.0},
  };
  for (const Band& b : kBands) {
    if (b.alpha == alpha && b.beta == beta) return b.c;
  }
  return 16.0;
}

std::string ratio_key(double alpha, double beta) {
  return "alpha=" + num(alpha) + ",beta=" + num(beta);
}

namespace {

std::map<std::string, double> ratios_of(const CriterionReport& r) {
  return boundedness_verdict(r.q_iia, r.q_iib, r.q_iii, r.q_iv, r.config.thresholds).cross_ratios;
}

}  // namespace

std::map<std::string, std::map<std::string, RatioStats>> ratio_statistics(
    const std::vector<CriterionReport>& reports) {
  std::map<std::string, std::map<std::string, RatioStats>> out;
  for (const auto& r : reports) {
    auto& table = out[ratio_key(r.quad.alpha, r.quad.beta)];
    for (const auto& [name, v] : ratios_of(r)) {
      RatioStats& s = table[name];
      if (s.count == 0) {
        s.min = s.max = v;
      } else {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
      }
      ++s.count;
    }
  }
  return out;
}

std::vector<Finding> coherence_audit(const std::vector<CriterionReport>& reports) {
  std::vector<Finding> findings;
  for (const auto& r : reports) {
    const bool flags[4] = {r.q_iia.diverging, r.q_iib.diverging, r.q_iii.diverging,
                           r.q_iv.diverging};
    if (!std::all_of(flags, flags + 4, [&](bool f) { return f == flags[0]; })) {
      std::ostringstream os;
      os << "diverging flags (iia, iib, iii, iv) = (" << flags[0] << ", " << flags[1] << ", "
         << flags[2] << ", " << flags[3] << ")";
      findings.push_back({r.member_id, "flags", os.str()});
      continue;
    }
    const double c = frozen_ratio_band(r.quad.alpha, r.quad.beta);
    for (const auto& [name, v] : ratios_of(r)) {
      if (!(v <= c && v >= 1.0 / c)) {
        findings.push_back({r.member_id, "ratio_band",
                            name + " = " + num(v) + " outside [1/" + num(c) + ", " + num(c) + "]"});
      }
    }
  }
  return findings;
}

// ---------------------------------------------------------------------------
// Artifacts.

std::string quantities_csv(const std::vector<CriterionReport>& reports) {
  std::string s = "member_id,t,Q_iia,Q_iib,Q_iii,Q_iv,essA,essB,essLower,bounded,compact\n";
  for (const auto& r : reports) {
    s += r.member_id + "," + (r.t ? num(*r.t) : "") + "," +
         cell(r.q_iia.value, r.q_iia.diverging) + "," + cell(r.q_iib.value, r.q_iib.diverging) +
         "," + cell(r.q_iii.value, r.q_iii.diverging) + "," +
         cell(r.q_iv.value, r.q_iv.diverging) + "," + cell(r.ess_a.value, r.ess_a.diverging) +
         "," + cell(r.ess_b.value, r.ess_b.diverging) + "," +
         cell(r.ess_lower.value, r.ess_lower.diverging) + "," + to_string(r.bounded_verdict) +
         "," + compact_string(r) + "\n";
  }
  return s;
}

std::string n_trace_csv(const std::vector<CriterionReport>& reports) {
  std::string s = "member_id,quantity,n,value\n";
  for (const auto& r : reports) {
    const std::pair<const char*, const Quantity*> qs[] = {{"Q_iv", &r.q_iv},
                                                          {"essLower", &r.ess_lower}};
    for (const auto& [name, q] : qs) {
      for (std::size_t k = 0; k < q->trace.size(); ++k) {
        s += r.member_id + "," + name + "," + num(q->schedule[k]) + "," + num(q->trace[k]) + "\n";
      }
    }
  }
  return s;
}

std::string r_trace_csv(const std::vector<CriterionReport>& reports) {
  std::string s = "member_id,quantity,r,value\n";
  for (const auto& r : reports) {
    const std::pair<const char*, const Quantity*> qs[] = {
        {"Q_iia", &r.q_iia}, {"Q_iib", &r.q_iib}, {"Q_iii", &r.q_iii}};
    for (const auto& [name, q] : qs) {
      for (std::size_t k = 0; k < q->trace.size(); ++k) {
        s += r.member_id + "," + name + "," + num(q->schedule[k]) + "," + num(q->trace[k]) + "\n";
      }
    }
    const std::pair<const char*, const std::vector<double>*> es[] = {
        {"essA_phi", &r.ess_a.phi_term},
        {"essA_psi", &r.ess_a.psi_term},
        {"essA_joint", &r.ess_a.joint_term},
        {"essA", &r.ess_a.total}};
    for (const auto& [name, v] : es) {
      for (std::size_t k = 0; k < v->size(); ++k) {
        s += r.member_id + "," + name + "," + num(r.ess_a.r_schedule[k]) + "," + num((*v)[k]) +
             "\n";
      }
    }
  }
  return s;
}

std::string sweep_json(const SweepResult& result) {
  json members = json::array();
  json reports = json::array();
  for (const auto& m : result.members) {
    json e = {{"member_id", m.id}, {"status", m.report ? "ok" : "failed"}};
    e["t"] = m.t ? detail::number_to_json(*m.t) : json(nullptr);
    if (!m.report) e["error"] = m.error;
    members.push_back(std::move(e));
    if (m.report) reports.push_back(detail::report_to_json_value(*m.report));
  }
  json stats = json::object();
  for (const auto& [key, table] : result.ratio_stats) {
    json t = json::object();
    for (const auto& [name, s] : table) {
      t[name] = {{"min", detail::number_to_json(s.min)},
                 {"max", detail::number_to_json(s.max)},
                 {"count", s.count}};
    }
    stats[key] = std::move(t);
  }
  json findings = json::array();
  for (const auto& f : result.counterexamples) {
    findings.push_back({{"member_id", f.member_id}, {"kind", f.kind}, {"detail", f.detail}});
  }
  const json doc = {{"library_version", kVersion},
                    {"members", std::move(members)},
                    {"ratio_stats", std::move(stats)},
                    {"counterexamples", std::move(findings)},
                    {"reports", std::move(reports)}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Running.

SweepResult run_experiment(const ExperimentConfig& config, const fs::path& out, unsigned threads) {
  const fs::path members_dir = out / "members";
  fs::create_directories(members_dir);

  SweepResult result;
  result.members.resize(config.members.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < config.members.size(); i = next++) {
      const MemberSpec& m = config.members[i];
      MemberOutcome& o = result.members[i];
      o.id = m.id;
      o.t = m.t;
      const fs::path file = members_dir / (m.id + ".json");
      if (fs::exists(file)) {
        try {
          CriterionReport old = report_from_json(read_file(file));
          if (same_inputs(old, m, config.criteria)) {
            o.report = std::move(old);
            o.reused = true;
          }
        } catch (const std::exception&) {
          // unreadable: recompute
        }
      }
      const auto t0 = std::chrono::steady_clock::now();
      if (!o.report) {
        try {
          o.report = evaluate_quadruple(m.quad, config.criteria, m.id, m.t);
          write_file(file, report_to_json(*o.report) + "\n");
        } catch (const std::exception& e) {
          o.report.reset();
          o.error = e.what();
        }
      }
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::lock_guard lock(log_mutex);
      std::cerr << "[blochdiff] " << m.id << ": "
                << (o.reused ? "reused" : o.report ? "done" : "FAILED: " + o.error);
      if (!o.reused) std::cerr << " (" << std::fixed << std::setprecision(1) << secs << " s)";
      std::cerr << "\n";
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, config.members.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  const auto reports = result.reports();
  result.ratio_stats = ratio_statistics(reports);
  result.counterexamples = coherence_audit(reports);
  write_file(out / "report.json", sweep_json(result));
  write_file(out / "quantities.csv", quantities_csv(reports));
  write_file(out / "n_trace.csv", n_trace_csv(reports));
  write_file(out / "r_trace.csv", r_trace_csv(reports));
  return result;
}

SweepResult load_sweep(const fs::path& dir) {
  SweepResult result;
  std::vector<std::string> ids;
  const fs::path index = dir / "report.json";
  if (fs::exists(index)) {
    try {
      const json j = json::parse(read_file(index));
      for (const auto& m : j.at("members")) {
        MemberOutcome o;
        o.id = m.at("member_id").get<std::string>();
        if (m.contains("error")) o.error = m.at("error").get<std::string>();
        result.members.push_back(std::move(o));
      }
    } catch (const json::exception& e) {
      throw ConfigError("malformed " + index.string() + ": " + e.what());
    }
  } else if (fs::is_directory(dir / "members")) {
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(dir / "members")) {
      if (e.path().extension() == ".json") found.push_back(e.path().stem().string());
    }
    std::sort(found.begin(), found.end());
    for (auto& id : found) result.members.push_back({id, std::nullopt, std::nullopt, "", false});
  } else {
    throw ConfigError("no sweep found in " + dir.string());
  }
  for (auto& m : result.members) {
    const fs::path file = dir / "members" / (m.id + ".json");
    if (!fs::exists(file)) continue;
    m.report = report_from_json(read_file(file));
    m.t = m.report->t;
    m.reused = true;
  }
  const auto reports = result.reports();
  result.ratio_stats = ratio_statistics(reports);
  result.counterexamples = coherence_audit(reports);
  return result;
}

}  // namespace blochdiff::harness
