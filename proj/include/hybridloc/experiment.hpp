#pragma once

#include "hybridloc/config.hpp"
#include "hybridloc/evaluation.hpp"
#include "hybridloc/fusion.hpp"
#include "hybridloc/path.hpp"
#include "hybridloc/records.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hybridloc {

struct TrackedPoint {
  double t = 0.0;
  StateVector state = StateVector::Zero();
  double trajectory_error = 0.0;
  // Time-aligned distance to the truth; only when truth is known.
  std::optional<Point2> truth;
  std::optional<double> position_error;
};

struct FilterRun {
  FilterKind kind = FilterKind::kEkf;
  std::vector<TrackedPoint> points;
  TrackCounters counters;
  bool flagged = false;
};

struct RunResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t frames = 0;
  std::vector<FilterRun> filters;  // in config order
};

struct FilterSummary {
  FilterKind kind = FilterKind::kEkf;
  RunSummary summary;
  std::optional<double> position_rmse;
  TrackCounters counters;
  std::size_t flagged_runs = 0;
};

struct ExperimentResult {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<RunResult> runs;
  std::vector<FilterSummary> summaries;  // in config order
  std::vector<std::vector<double>> pooled_errors;  // sample-pooled per filter
};

// Simulate cfg.runs Monte Carlo runs on up to `jobs` threads. Run i uses
// run_seed(cfg.seed, i); results do not depend on `jobs`.
ExperimentResult simulate_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Track and evaluate a recorded stream against cfg.path (trajectory error
// only). cfg.schedule.decimation applies.
ExperimentResult replay_experiment(const ExperimentConfig& cfg,
                                   std::span<const MeasurementRecord> records);

// Re-evaluate trajectory CSVs previously written to `in_dir`.
ExperimentResult evaluate_directory(const ExperimentConfig& cfg,
                                    const std::filesystem::path& in_dir);

// Synthetic measurement stream of Monte Carlo run `run_index`.
std::vector<MeasurementRecord> simulate_stream(const ExperimentConfig& cfg,
                                               std::size_t run_index);

// One run of the pipeline from a stream; `truth` may be null.
RunResult process_stream(const ExperimentConfig& cfg,
                         std::span<const MeasurementRecord> records,
                         const ReferencePath* truth, std::size_t index,
                         std::uint64_t seed);

// Writes run_<i>_<filter>.csv, ecdf_<filter>_<rate>.csv, comparison.csv,
// manifest.txt.
void write_results(const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::filesystem::path& out_dir);

// "3Hz", "0.5Hz", "0Hz": effective UWB rate label used in file names.
std::string rate_label(const ScheduleConfig& sched);

}  // namespace hybridloc
