#pragma once

#include "hybridloc/ekf.hpp"
#include "hybridloc/motion.hpp"
#include "hybridloc/records.hpp"
#include "hybridloc/sensors.hpp"
#include "hybridloc/types.hpp"
#include "hybridloc/ukf.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridloc {

// BLE packets arrive at ble_rate; UWB at uwb_rate (0 disables UWB). Recorded
// UWB frames are thinned keep-1-in-decimation after the fact.
struct ScheduleConfig {
  double ble_rate = 3.0;  // Hz
  double uwb_rate = 3.0;  // Hz, <= ble_rate
  int decimation = 1;
  double epoch_origin = 0.0;  // s, centre of epoch 0

  double epoch_period() const { return 1.0 / ble_rate; }
  // UWB rate after decimation.
  double effective_uwb_rate() const {
    return uwb_rate / static_cast<double>(decimation);
  }
};

void validate(const ScheduleConfig& s);

// Groups a time-sorted record stream into one frame per BLE epoch. Epoch k
// covers [origin + (k - 1/2) T, origin + (k + 1/2) T) with T = 1/ble_rate
// and is stamped origin + k T. Only every decimation-th frame that carries
// TDOA entries keeps them. Frames left empty are dropped. Throws
// UnsortedInput.
std::vector<MeasurementFrame> assemble_epochs(
    std::span<const MeasurementRecord> raw, const ScheduleConfig& sched);

enum class FilterKind { kEkf, kUkf, kBleOnlyEkf, kBleOnlyUkf };

std::string_view to_string(FilterKind kind);
// Accepts EKF, UKF, BLE-EKF, BLE-UKF (case-insensitive). Throws
// InvalidArgument.
FilterKind parse_filter_kind(std::string_view name);
bool uses_ukf(FilterKind kind);
bool uses_tdoa(FilterKind kind);

struct TrackCounters {
  int updates = 0;           // accepted measurement updates
  int skipped = 0;           // SingularInnovation, prediction kept
  int psd_repairs = 0;       // eigenvalue clips (UKF)
  int cholesky_repairs = 0;  // sigma-point root needed jitter

  bool operator==(const TrackCounters&) const = default;
};

struct Track {
  Gaussian estimate;
  double timestamp = 0.0;
  FilterKind kind = FilterKind::kEkf;
  TrackCounters counters;

  // More than 1% of updates needed a PSD repair.
  bool flagged() const {
    return counters.psd_repairs * 100 > counters.updates;
  }
};

struct TrackerModels {
  double sigma_ax2 = 0.35;
  PathLossParams path_loss;
  UkfParams ukf;
  EkfConfig ekf;
};

struct InitConfig {
  double sigma_p = 3.0;  // m
  double sigma_v = 1.0;  // m/s
};

// Position = inverse-distance weighted centroid of the three anchors with
// the strongest mean RSS over the batch, velocity = 0, covariance
// diag(sp^2, sv^2, sp^2, sv^2). Timestamp = first frame's. Throws
// InsufficientAnchors.
Track initialize_track(std::span<const MeasurementFrame> first_frames,
                       const AnchorLayout& layout,
                       const PathLossParams& params, FilterKind kind,
                       const InitConfig& init = {});

// Time update over dt = frame.timestamp - track.timestamp followed by the
// measurement update of the track's filter kind. BLE-only kinds drop TDOA
// entries. Throws TimeRegression.
Track step(const Track& track, const MeasurementFrame& frame,
           const AnchorLayout& layout, const TrackerModels& models);

// Same, with an explicit measurement model and measurement vector. An empty
// z performs the time update only.
Track step(const Track& track, double timestamp, const MeasurementModel& model,
           const Eigen::VectorXd& z, const TrackerModels& models);

struct TrackRunOptions {
  InitConfig init;
  int init_frames = 1;  // frames used for initialization
};

// Initializes from the first frames, then steps through every frame
// (starting with the first, at dt = 0). Returns the track after each step;
// `observer`, when set, sees each one as it is produced.
std::vector<Track> run_track(std::span<const MeasurementFrame> frames,
                             const AnchorLayout& layout,
                             const TrackerModels& models, FilterKind kind,
                             const TrackRunOptions& opts = {},
                             const std::function<void(const Track&)>& observer = {});

}  // namespace hybridloc
