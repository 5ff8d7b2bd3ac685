#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "blochdiff/errors.hpp"
#include "blochdiff/version.hpp"
#include "harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kIncoherent = 2;
constexpr int kConfigError = 3;
constexpr int kMemberFailures = 4;

void print_findings(const blochdiff::harness::SweepResult& r) {
  for (const auto& f : r.counterexamples) {
    std::cout << "violation " << f.member_id << " [" << f.kind << "]: " << f.detail << "\n";
  }
  for (const auto& m : r.members) {
    if (!m.report) std::cout << "failed " << m.id << ": " << m.error << "\n";
  }
}

int exit_code(const blochdiff::harness::SweepResult& r) {
  if (!r.counterexamples.empty()) return kIncoherent;
  if (r.failures() > 0) return kMemberFailures;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  namespace bh = blochdiff::harness;
  CLI::App app{"Numerical criteria for differences of generalized composition operators "
               "between Bloch-type spaces"};
  app.set_version_flag("--version", std::string(blochdiff::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bh::Overrides overrides;
  int grid_levels = 0;
  unsigned nmax = 0;
  unsigned threads = 1;
  auto* run = app.add_subcommand("run", "Evaluate every quadruple of a config");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  auto* levels_opt = run->add_option("--grid-levels", grid_levels, "Radial levels J")
                         ->check(CLI::Range(4, 36));
  auto* nmax_opt = run->add_option("--nmax", nmax, "Largest n of the power schedule")
                       ->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "Members evaluated concurrently")
      ->check(CLI::Range(1u, 256u));

  std::string in_dir;
  auto* audit = app.add_subcommand("audit", "Re-run the coherence audit on a finished sweep");
  audit->add_option("--in", in_dir, "Directory written by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      if (*levels_opt) overrides.grid_levels = grid_levels;
      if (*nmax_opt) overrides.nmax = nmax;
      const bh::ExperimentConfig cfg = bh::load_experiment_config(config_path, overrides);
      if (out_dir.empty()) {
        if (!cfg.out_dir) throw blochdiff::ConfigError("no output directory (--out or out_dir)");
        out_dir = cfg.out_dir->string();
      }
      const bh::SweepResult r = bh::run_experiment(cfg, out_dir, threads);
      print_findings(r);
      std::cout << r.members.size() << " members, " << r.failures() << " failed, "
                << r.counterexamples.size() << " coherence violations\n";
      return exit_code(r);
    }
    const bh::SweepResult r = bh::load_sweep(in_dir);
    print_findings(r);
    std::cout << r.reports().size() << " reports audited, " << r.counterexamples.size()
              << " coherence violations\n";
    return exit_code(r);
  } catch (const blochdiff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
