#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blochdiff/criteria.hpp"

namespace blochdiff::harness {

struct MemberSpec {
  std::string id;
  std::optional<double> t;
  SymbolQuadruple quad;
};

struct ExperimentConfig {
  std::vector<MemberSpec> members;
  CriteriaConfig criteria;
  std::optional<std::filesystem::path> out_dir;
};

/// Command-line overrides applied on top of the file.
struct Overrides {
  std::optional<int> grid_levels;
  std::optional<unsigned> nmax;
};

/// Parses and validates a config document.  Family members are expanded in
/// the order of their t list.  Throws ConfigError.
ExperimentConfig parse_experiment_config(const std::string& text, const Overrides& overrides = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const Overrides& overrides = {});

struct MemberOutcome {
  std::string id;
  std::optional<double> t;
  std::optional<CriterionReport> report;
  std::string error;  // non-empty when the member failed
  bool reused = false;
};

struct RatioStats {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct Finding {
  std::string member_id;
  std::string kind;  // "flags" or "ratio_band"
  std::string detail;
};

struct SweepResult {
  std::vector<MemberOutcome> members;
  /// Keyed by "alpha=..,beta=.." then by ratio name.
  std::map<std::string, std::map<std::string, RatioStats>> ratio_stats;
  std::vector<Finding> counterexamples;

  [[nodiscard]] std::vector<CriterionReport> reports() const;
  [[nodiscard]] std::size_t failures() const;
};

/// Frozen upper bound C for max(r, 1/r) over the cross ratios at (alpha, beta).
double frozen_ratio_band(double alpha, double beta);

std::string ratio_key(double alpha, double beta);

std::map<std::string, std::map<std::string, RatioStats>> ratio_statistics(
    const std::vector<CriterionReport>& reports);

/// Members whose four finiteness flags disagree, or whose finite cross ratios
/// leave the frozen band.  Empty means coherent.
std::vector<Finding> coherence_audit(const std::vector<CriterionReport>& reports);

/// Evaluates every member, reusing out/members/<id>.json when it matches the
/// member and configuration, and writes the sweep artifacts.
SweepResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out,
                           unsigned threads = 1);

/// Reads the per-member reports of a previous run, in report.json order.
SweepResult load_sweep(const std::filesystem::path& dir);

std::string quantities_csv(const std::vector<CriterionReport>& reports);
std::string n_trace_csv(const std::vector<CriterionReport>& reports);
std::string r_trace_csv(const std::vector<CriterionReport>& reports);
std::string sweep_json(const SweepResult& result);

}  // namespace blochdiff::harness
