#include "hybridloc/experiment.hpp"

#include "hybridloc/errors.hpp"
#include "hybridloc/measurement_log.hpp"
#include "hybridloc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace hybridloc {
namespace {

std::string run_file_name(std::size_t index, FilterKind kind) {
  std::ostringstream name;
  name << "run_" << std::setw(3) << std::setfill('0') << index << '_'
       << to_string(kind) << ".csv";
  return name.str();
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  return out;
}

void summarize_runs(const ExperimentConfig& cfg, ExperimentResult& result) {
  result.summaries.clear();
  result.pooled_errors.clear();
  for (std::size_t f = 0; f < cfg.filters.size(); ++f) {
    FilterSummary s;
    s.kind = cfg.filters[f];
    std::vector<double> pooled;
    double sq_sum = 0.0;
    std::size_t truth_count = 0;
    for (const RunResult& run : result.runs) {
      const FilterRun& fr = run.filters[f];
      for (const TrackedPoint& p : fr.points) {
        pooled.push_back(p.trajectory_error);
        if (p.position_error) {
          sq_sum += *p.position_error * *p.position_error;
          ++truth_count;
        }
      }
      s.counters.updates += fr.counters.updates;
      s.counters.skipped += fr.counters.skipped;
      s.counters.psd_repairs += fr.counters.psd_repairs;
      s.counters.cholesky_repairs += fr.counters.cholesky_repairs;
      if (fr.flagged) ++s.flagged_runs;
    }
    if (truth_count > 0) s.position_rmse = std::sqrt(sq_sum / static_cast<double>(truth_count));
    s.summary = summarize(std::string(to_string(s.kind)), Ecdf(pooled), cfg.thresholds);
    result.summaries.push_back(std::move(s));
    result.pooled_errors.push_back(std::move(pooled));
  }
}

// Minimal CSV reader for the trajectory files this module writes.
std::vector<TrackedPoint> read_trajectory(const std::filesystem::path& file,
                                          const ReferencePath& path) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  std::string line;
  std::getline(in, line);
  std::vector<TrackedPoint> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() < 5) throw LogFormatError(line_no, "short trajectory row in " + file.string());
    TrackedPoint p;
    try {
      p.t = std::stod(f[0]);
      p.state = make_state(std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4]));
      if (f.size() >= 8 && !f[6].empty() && !f[7].empty()) {
        p.truth = Point2(std::stod(f[6]), std::stod(f[7]));
      }
    } catch (const std::exception&) {
      throw LogFormatError(line_no, "bad number in " + file.string());
    }
    p.trajectory_error = trajectory_error(position_of(p.state), path);
    if (p.truth) p.position_error = (position_of(p.state) - *p.truth).norm();
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::string rate_label(const ScheduleConfig& sched) {
  return format_double(sched.effective_uwb_rate()) + "Hz";
}

RunResult process_stream(const ExperimentConfig& cfg,
                         std::span<const MeasurementRecord> records,
                         const ReferencePath* truth, std::size_t index,
                         std::uint64_t seed) {
  const std::vector<MeasurementFrame> frames = assemble_epochs(records, cfg.schedule);
  const TrackerModels models = cfg.tracker_models();
  TrackRunOptions opts;
  opts.init = cfg.init;
  opts.init_frames = cfg.init_frames;

  RunResult run;
  run.index = index;
  run.seed = seed;
  run.frames = frames.size();
  for (FilterKind kind : cfg.filters) {
    FilterRun fr;
    fr.kind = kind;
    const std::vector<Track> tracks = run_track(frames, cfg.layout, models, kind, opts);
    fr.points.reserve(tracks.size());
    for (const Track& t : tracks) {
      TrackedPoint p;
      p.t = t.timestamp;
      p.state = t.estimate.mean;
      p.trajectory_error = trajectory_error(position_of(t.estimate.mean), cfg.path);
      if (truth != nullptr) {
        p.truth = truth->at(t.timestamp).position;
        p.position_error = (position_of(t.estimate.mean) - *p.truth).norm();
      }
      fr.points.push_back(std::move(p));
    }
    if (!tracks.empty()) {
      fr.counters = tracks.back().counters;
      fr.flagged = tracks.back().flagged();
    }
    run.filters.push_back(std::move(fr));
  }
  return run;
}

std::vector<MeasurementRecord> simulate_stream(const ExperimentConfig& cfg,
                                               std::size_t run_index) {
  NoiseConfig noise = cfg.noise;
  noise.seed = run_seed(cfg.seed, run_index);
  const std::vector<TruthSample> truth = sample_path(cfg.path, cfg.schedule.ble_rate);
  return synthesize_stream(truth, cfg.layout, cfg.path_loss, cfg.schedule, noise);
}

ExperimentResult simulate_experiment(const ExperimentConfig& cfg, int jobs) {
  ExperimentResult result;
  result.command = "simulate";
  result.seed = cfg.seed;
  result.runs.resize(static_cast<std::size_t>(cfg.runs));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.runs.size()) return;
      try {
        const auto stream = simulate_stream(cfg, i);
        result.runs[i] = process_stream(cfg, stream, &cfg.path, i, run_seed(cfg.seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = result.runs.size();
      }
    }
  };

  const int n_threads = std::clamp(jobs, 1, std::max(1, cfg.runs));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  summarize_runs(cfg, result);
  return result;
}

ExperimentResult replay_experiment(const ExperimentConfig& cfg,
                                   std::span<const MeasurementRecord> records) {
  ExperimentResult result;
  result.command = "replay";
  result.seed = cfg.seed;
  result.runs.push_back(process_stream(cfg, records, nullptr, 0, cfg.seed));
  summarize_runs(cfg, result);
  return result;
}

ExperimentResult evaluate_directory(const ExperimentConfig& cfg,
                                    const std::filesystem::path& in_dir) {
  ExperimentResult result;
  result.command = "evaluate";
  result.seed = cfg.seed;
  for (std::size_t i = 0;; ++i) {
    if (!std::filesystem::exists(in_dir / run_file_name(i, cfg.filters.front()))) break;
    RunResult run;
    run.index = i;
    run.seed = run_seed(cfg.seed, i);
    for (FilterKind kind : cfg.filters) {
      FilterRun fr;
      fr.kind = kind;
      fr.points = read_trajectory(in_dir / run_file_name(i, kind), cfg.path);
      run.frames = fr.points.size();
      run.filters.push_back(std::move(fr));
    }
    result.runs.push_back(std::move(run));
  }
  if (result.runs.empty())
    throw Error("no trajectory files " + run_file_name(0, cfg.filters.front()) + " in " +
                in_dir.string());
  summarize_runs(cfg, result);
  return result;
}

void write_results(const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string rate = rate_label(cfg.schedule);

  for (const RunResult& run : result.runs) {
    for (const FilterRun& fr : run.filters) {
      std::ofstream out = open_output(out_dir / run_file_name(run.index, fr.kind));
      out << "t,x,vx,y,vy,trajectory_error,true_x,true_y,position_error\n";
      for (const TrackedPoint& p : fr.points) {
        out << format_double(p.t) << ',' << format_double(p.state(kX)) << ','
            << format_double(p.state(kVx)) << ',' << format_double(p.state(kY)) << ','
            << format_double(p.state(kVy)) << ',' << format_double(p.trajectory_error) << ',';
        if (p.truth) {
          out << format_double(p.truth->x()) << ',' << format_double(p.truth->y()) << ','
              << format_double(*p.position_error);
        } else {
          out << ",,";
        }
        out << '\n';
      }
    }
  }

  for (std::size_t f = 0; f < result.summaries.size(); ++f) {
    const auto name = "ecdf_" + std::string(to_string(result.summaries[f].kind)) + "_" +
                      rate + ".csv";
    std::ofstream out = open_output(out_dir / name);
    out << "error,F\n";
    for (const auto& [e, F] : Ecdf(result.pooled_errors[f]).points())
      out << format_double(e) << ',' << format_double(F) << '\n';
  }

  {
    std::ofstream out = open_output(out_dir / "comparison.csv");
    out << "filter,uwb_rate,runs,samples,median,p90";
    for (double t : cfg.thresholds) out << ",exceed_" << format_double(t);
    out << ",position_rmse,updates,skipped,psd_repairs,cholesky_repairs,flagged_runs\n";
    for (const FilterSummary& s : result.summaries) {
      out << to_string(s.kind) << ',' << rate << ',' << result.runs.size() << ','
          << s.summary.samples << ',' << format_double(s.summary.median) << ','
          << format_double(s.summary.p90);
      for (double e : s.summary.exceedance) out << ',' << format_double(e);
      out << ',' << (s.position_rmse ? format_double(*s.position_rmse) : std::string())
          << ',' << s.counters.updates << ',' << s.counters.skipped << ','
          << s.counters.psd_repairs << ',' << s.counters.cholesky_repairs << ','
          << s.flagged_runs << '\n';
    }
  }

  std::ofstream out = open_output(out_dir / "manifest.txt");
  out << "command: " << result.command << '\n'
      << "master_seed: " << result.seed << '\n'
      << "runs: " << result.runs.size() << '\n'
      << "seed_scheme: run_seed(master, i) = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15)\n"
      << "uwb_rate_effective: " << rate << '\n';
  for (const FilterSummary& s : result.summaries) {
    out << "filter " << to_string(s.kind) << ": updates=" << s.counters.updates
        << " skipped=" << s.counters.skipped << " psd_repairs=" << s.counters.psd_repairs
        << " cholesky_repairs=" << s.counters.cholesky_repairs
        << " flagged_runs=" << s.flagged_runs << '\n';
  }
  out << "config:\n" << config_to_json(cfg) << '\n';
}

}  // namespace hybridloc
