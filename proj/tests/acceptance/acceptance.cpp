// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "hybridloc/config.hpp"
#include "hybridloc/ekf.hpp"
#include "hybridloc/experiment.hpp"
#include "hybridloc/fusion.hpp"
#include "hybridloc/linalg.hpp"
#include "hybridloc/simulator.hpp"
#include "hybridloc/ukf.hpp"
#include "../oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace hybridloc;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0.0 && secs >= limit_s) {
    out.pass = false;
    out.detail += " (over time budget)";
  }
  if (!out.pass) ++failures;
  std::string timing = fmt("%.2f s", secs);
  if (limit_s > 0.0) timing += fmt(" (budget %.0f s)", limit_s);
  std::printf("%s criterion %d [%s]: %s; %s\n", out.pass ? "PASS" : "FAIL", id, name,
              out.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}


// Covariance health over every accepted update of every tracked run.
struct Health {
  long accepted = 0;
  long bad = 0;
  long ukf_updates = 0;
  long ukf_repairs = 0;

  void track(std::span<const MeasurementFrame> frames, const ExperimentConfig& cfg) {
    TrackRunOptions opts;
    opts.init = cfg.init;
    opts.init_frames = cfg.init_frames;
    for (FilterKind kind : cfg.filters) {
      int prev_updates = 0;
      const auto tracks = run_track(frames, cfg.layout, cfg.tracker_models(), kind, opts,
                                    [&](const Track& t) {
                                      if (t.counters.updates == prev_updates) return;
                                      prev_updates = t.counters.updates;
                                      ++accepted;
                                      if (!is_symmetric(t.estimate.cov) || !is_psd(t.estimate.cov))
                                        ++bad;
                                    });
      if (uses_ukf(kind) && !tracks.empty()) {
        ukf_updates += tracks.back().counters.updates;
        ukf_repairs += tracks.back().counters.psd_repairs + tracks.back().counters.cholesky_repairs;
      }
    }
  }

  void track_experiment(const ExperimentConfig& cfg) {
    for (int i = 0; i < cfg.runs; ++i) {
      const auto frames =
          assemble_epochs(simulate_stream(cfg, static_cast<std::size_t>(i)), cfg.schedule);
      track(frames, cfg);
    }
  }
};

Health health;

Outcome linear_equivalence() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> rows(1, 6);
  std::uniform_real_distribution<double> var(0.05, 4.0);
  double worst_x = 0.0, worst_p = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Gaussian prior{testing::random_state(rng), testing::random_spd(rng)};
    const int k = rows(rng);
    const Eigen::MatrixXd m = testing::random_matrix(rng, k, 4, 2.0);
    Eigen::VectorXd r(k);
    for (int i = 0; i < k; ++i) r(i) = var(rng);
    const Eigen::VectorXd z = testing::random_matrix(rng, k, 1, 5.0);
    LinearMeasurementModel model(m, r);
    const auto oracle = testing::closed_form_kf(prior.mean, prior.cov, m, r, z);
    const UpdateResult e = ekf_update(prior, model, z);
    const UpdateResult u = ukf_update(prior, model, z);
    for (const UpdateResult* upd : {&e, &u}) {
      worst_x = std::max(worst_x, (upd->posterior.mean - oracle.mean).cwiseAbs().maxCoeff());
      worst_p = std::max(worst_p, (upd->posterior.cov - oracle.cov).cwiseAbs().maxCoeff());
    }
    worst_x = std::max(worst_x, (e.posterior.mean - u.posterior.mean).cwiseAbs().maxCoeff());
    worst_p = std::max(worst_p, (e.posterior.cov - u.posterior.cov).cwiseAbs().maxCoeff());
  }
  return {worst_x < 1e-9 && worst_p < 1e-8,
          fmt("200 cases, max state diff %.3g (< 1e-9), max covariance diff %.3g (< 1e-8)",
              worst_x, worst_p)};
}

Outcome jacobian_check() {
  const AnchorLayout layout = default_layout();
  const PathLossParams params;
  MeasurementFrame frame;
  for (const Anchor* a : layout.ble_anchors()) frame.rss.push_back({a->id, 0.0, 16.0});
  for (const Anchor* a : layout.uwb_anchors())
    if (a->id != layout.reference()->id)
      frame.tdoa.push_back({a->id, layout.reference()->id, 0.0, 2e-18});

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> ux(-1.0, 13.0), uy(-1.0, 7.0), uv(-2.0, 2.0);
  double worst = 0.0;
  int states = 0;
  while (states < 100) {
    const StateVector x = make_state(ux(rng), uv(rng), uy(rng), uv(rng));
    bool clear = true;
    for (const Anchor& a : layout.anchors())
      clear = clear && (position_of(x) - a.position).norm() >= 0.5;
    if (!clear) continue;
    ++states;
    const Eigen::MatrixXd h = *predict_frame(x, frame, layout, params, true).jacobian;
    const Eigen::MatrixXd fd = testing::central_difference(
        [&](const StateVector& s) { return predict_frame(s, frame, layout, params, false).values; },
        x, 1e-6);
    worst = std::max(worst, testing::max_row_relative_error(h, fd));
  }
  return {worst < 1e-5,
          fmt("100 states >= 0.5 m from anchors, 17 rows each, max relative error %.3g (< 1e-5)",
              worst)};
}

Outcome unscented_identity() {
  std::mt19937_64 rng(777);
  const UkfParams p{};
  double worst_m = 0.0, worst_c = 0.0, worst_w = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector mean = testing::random_state(rng);
    const Covariance4 cov = testing::random_spd(rng);
    const SigmaPointSet s = sigma_points(mean, cov, p);
    StateVector m = StateVector::Zero();
    for (int i = 0; i < kSigmaCount; ++i) m += s.mean_weights(i) * s.points[i];
    Covariance4 c = Covariance4::Zero();
    for (int i = 0; i < kSigmaCount; ++i)
      c += s.cov_weights(i) * (s.points[i] - m) * (s.points[i] - m).transpose();
    worst_m = std::max(worst_m, (m - mean).cwiseAbs().maxCoeff());
    worst_c = std::max(worst_c, (c - cov).cwiseAbs().maxCoeff());
    worst_w = std::max(worst_w, std::abs(s.mean_weights.sum() - 1.0));
  }
  const SigmaPointSet s = sigma_points(StateVector::Zero(), Covariance4::Identity(), p);
  bool weights = s.mean_weights(0) == -3.0 && s.cov_weights(0) == -0.25;
  for (int i = 1; i < kSigmaCount; ++i)
    weights = weights && s.mean_weights(i) == 0.5 && s.cov_weights(i) == 0.5;
  return {worst_m < 1e-9 && worst_c < 1e-9 && worst_w < 1e-12 && weights,
          fmt("mean err %.3g, cov err %.3g (< 1e-9), |sum Wm - 1| %.3g (< 1e-12), ", worst_m,
              worst_c, worst_w) +
              (weights ? "weights (-3, 0.5 x8) / (-0.25, 0.5 x8)" : "weights WRONG")};
}

Outcome filter_consistency() {
  // Noiseless: the measurement equals the model at the true state, for
  // both filters' prediction paths.
  ExperimentConfig quiet = preset_config("default");
  quiet.noise.rss_sigma = 0.0;
  quiet.noise.toa_sigma = 0.0;
  const auto truth = sample_path(quiet.path, quiet.schedule.ble_rate);
  const auto frames = assemble_epochs(simulate_stream(quiet, 0), quiet.schedule);
  double worst_ekf = 0.0, worst_ukf = 0.0;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const StateVector x = make_state(truth[k].position.x(), truth[k].velocity.x(),
                                     truth[k].position.y(), truth[k].velocity.y());
    const Gaussian at_truth{x, Covariance4::Identity() * 1e-2};
    const UpdateResult e = ekf_update(at_truth, frames[k], quiet.layout, quiet.path_loss);
    worst_ekf = std::max(worst_ekf, e.innovation.residual.cwiseAbs().maxCoeff());
    const auto um = unscented_measurement(sigma_points(x, Covariance4::Zero(), quiet.ukf),
                                          frames[k], quiet.layout, quiet.path_loss);
    worst_ukf = std::max(worst_ukf, (frames[k].values() - um.z_hat).cwiseAbs().maxCoeff());
  }

  ExperimentConfig cfg = preset_config("default");
  cfg.runs = 20;
  cfg.seed = 4;
  const ExperimentResult r = simulate_experiment(cfg, 4);
  health.track_experiment(cfg);
  const double ekf = *r.summaries[0].position_rmse;
  const double ukf = *r.summaries[1].position_rmse;
  const bool pass = worst_ekf == 0.0 && worst_ukf == 0.0 && ekf < 0.5 && ukf < 0.5;
  return {pass, fmt("noiseless max |innovation| EKF %.3g, UKF %.3g (== 0); ", worst_ekf, worst_ukf) +
                    fmt("20 runs position RMSE EKF %.3f m, UKF %.3f m (< 0.5)", ekf, ukf)};
}

Outcome high_rate() {
  ExperimentConfig cfg = preset_config("paper-highrate");
  const ExperimentResult r = simulate_experiment(cfg, 4);
  health.track_experiment(cfg);
  const double ekf = r.summaries[0].summary.median;
  const double ukf = r.summaries[1].summary.median;
  return {std::abs(ukf - ekf) < 0.1,
          fmt("100 runs, median trajectory error EKF %.4f m, UKF %.4f m, |diff| %.4f (< 0.1)", ekf,
              ukf, std::abs(ukf - ekf))};
}

ExperimentConfig lowrate_config() {
  ExperimentConfig cfg = preset_config("paper-lowrate");
  cfg.filters = {FilterKind::kEkf, FilterKind::kUkf};
  return cfg;
}

Outcome low_rate() {
  const ExperimentConfig cfg = lowrate_config();
  const ExperimentResult r = simulate_experiment(cfg, 4);
  health.track_experiment(cfg);
  const auto& e = r.summaries[0].summary.exceedance;
  const auto& u = r.summaries[1].summary.exceedance;
  int held = 0;
  std::ostringstream detail;
  detail << "100 runs, exceedance UKF/EKF:";
  bool at_two = false;
  for (std::size_t i = 0; i < cfg.thresholds.size(); ++i) {
    if (u[i] <= e[i]) ++held;
    if (cfg.thresholds[i] == 2.0) at_two = u[i] <= e[i];
    detail << ' ' << cfg.thresholds[i] << "m " << fmt("%.4f/%.4f", u[i], e[i]);
  }
  detail << "; UKF <= EKF at 2 m: " << (at_two ? "yes" : "no") << ", at " << held << "/"
         << cfg.thresholds.size() << " thresholds (>= 3)";
  return {at_two && held >= 3, detail.str()};
}

Outcome covariance_health() {
  const double rate = health.ukf_updates > 0
                          ? static_cast<double>(health.ukf_repairs) / health.ukf_updates
                          : 0.0;
  std::ostringstream d;
  d << health.accepted << " accepted updates, " << health.bad
    << " failing symmetry/PSD; UKF repairs " << health.ukf_repairs << "/" << health.ukf_updates
    << fmt(" = %.4f%% (< 1%%)", 100.0 * rate);
  return {health.accepted > 0 && health.bad == 0 && rate < 0.01, d.str()};
}

Outcome determinism() {
  const ExperimentConfig cfg = lowrate_config();
  const fs::path root = fs::temp_directory_path() / "hybridloc_acceptance";
  fs::remove_all(root);
  write_results(simulate_experiment(cfg, 1), cfg, root / "first");
  write_results(simulate_experiment(cfg, 4), cfg, root / "second");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  int files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "first")) {
    ++files;
    const fs::path other = root / "second" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differing;
  }
  int second_files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(root / "second")) ++second_files;
  fs::remove_all(root);
  std::ostringstream d;
  d << files << " result files compared (1 vs 4 worker threads), " << differing << " differ";
  return {files > 0 && differing == 0 && files == second_files, d.str()};
}

}  // namespace

int main() {
  report(1, "linear equivalence", 1.0, linear_equivalence);
  report(2, "Jacobian vs finite differences", 1.0, jacobian_check);
  report(3, "unscented transform identity", 1.0, unscented_identity);
  report(4, "filter consistency", 30.0, filter_consistency);
  report(5, "high UWB rate, no significant difference", 180.0, high_rate);
  report(6, "low UWB rate, UKF tail no worse", 180.0, low_rate);
  report(7, "covariance health", 0.0, covariance_health);
  report(8, "determinism", 360.0, determinism);
  std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
