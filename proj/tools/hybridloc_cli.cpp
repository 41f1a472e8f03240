// hybridloc: simulate, replay, and evaluate EKF/UKF tracking over a hybrid
// BLE RSS / UWB TDOA measurement schedule.

#include "hybridloc/config.hpp"
#include "hybridloc/errors.hpp"
#include "hybridloc/experiment.hpp"
#include "hybridloc/measurement_log.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace hybridloc;

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Experiment config (JSON)")->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "Output directory (default: config output_dir)");
  cmd->add_option("--seed", args.seed, "Master seed, overrides the config");
  cmd->add_option("--jobs", args.jobs, "Worker threads for Monte Carlo runs")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  if (!args.out.empty()) cfg.output_dir = args.out;
  return cfg;
}

void report(const ExperimentResult& result, const ExperimentConfig& cfg) {
  std::cout << "filter  median_m  p90_m";
  for (double t : cfg.thresholds) std::cout << "  >" << format_double(t) << "m";
  std::cout << '\n';
  for (const FilterSummary& s : result.summaries) {
    std::cout << to_string(s.kind) << "  " << s.summary.median << "  " << s.summary.p90;
    for (double e : s.summary.exceedance) std::cout << "  " << e;
    if (s.counters.skipped > 0)
      std::cerr << "warning: " << to_string(s.kind) << " skipped " << s.counters.skipped
                << " singular updates\n";
    if (s.flagged_runs > 0)
      std::cerr << "warning: " << to_string(s.kind) << " has " << s.flagged_runs
                << " runs with PSD repairs above 1% of updates\n";
    std::cout << '\n';
  }
  std::cout << "results written to " << cfg.output_dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid BLE/UWB EKF and UKF localization harness"};
  app.require_subcommand(1);

  CommonArgs sim_args;
  bool write_logs = false;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation and evaluation");
  add_common(sim, sim_args);
  sim->add_flag("--write-logs", write_logs, "Also write each run's measurement log");

  CommonArgs replay_args;
  std::string log_file;
  std::optional<int> decimate;
  auto* replay = app.add_subcommand("replay", "Track and evaluate a recorded measurement log");
  add_common(replay, replay_args);
  replay->add_option("--log", log_file, "Measurement log CSV")->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--decimate", decimate, "Keep one UWB frame in D")
      ->check(CLI::PositiveNumber);

  CommonArgs eval_args;
  std::string in_dir;
  auto* evaluate = app.add_subcommand("evaluate", "Re-evaluate trajectory CSVs");
  add_common(evaluate, eval_args);
  evaluate->add_option("--in", in_dir, "Directory holding run_*.csv trajectories")
      ->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const ExperimentConfig cfg = resolve(sim_args);
      const ExperimentResult result = simulate_experiment(cfg, sim_args.jobs);
      write_results(result, cfg, cfg.output_dir);
      if (write_logs) {
        for (std::size_t i = 0; i < static_cast<std::size_t>(cfg.runs); ++i) {
          const std::string name = "log_" + std::to_string(i) + ".csv";
          write_log(std::filesystem::path(cfg.output_dir) / name, simulate_stream(cfg, i));
        }
      }
      report(result, cfg);
    } else if (replay->parsed()) {
      ExperimentConfig cfg = resolve(replay_args);
      if (decimate) cfg.schedule.decimation = *decimate;
      const auto records = read_log(std::filesystem::path(log_file));
      const ExperimentResult result = replay_experiment(cfg, records);
      write_results(result, cfg, cfg.output_dir);
      report(result, cfg);
    } else if (evaluate->parsed()) {
      const ExperimentConfig cfg = resolve(eval_args);
      const ExperimentResult result = evaluate_directory(cfg, in_dir);
      write_results(result, cfg, cfg.output_dir);
      report(result, cfg);
    }
  } catch (const hybridloc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
