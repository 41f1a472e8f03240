#include "hybridloc/fusion.hpp"

#include "hybridloc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace hybridloc {

void validate(const ScheduleConfig& s) {
  if (!(s.ble_rate > 0.0) || !std::isfinite(s.ble_rate))
    throw ValidationError("schedule.ble_rate must be > 0");
  if (!(s.uwb_rate >= 0.0) || !std::isfinite(s.uwb_rate))
    throw ValidationError("schedule.uwb_rate must be >= 0");
  if (s.uwb_rate > s.ble_rate)
    throw ValidationError("schedule.uwb_rate must not exceed ble_rate");
  if (s.decimation < 1) throw ValidationError("schedule.decimation must be >= 1");
  if (!std::isfinite(s.epoch_origin))
    throw ValidationError("schedule.epoch_origin must be finite");
}

std::vector<MeasurementFrame> assemble_epochs(
    std::span<const MeasurementRecord> raw, const ScheduleConfig& sched) {
  validate(sched);
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].timestamp < raw[i - 1].timestamp) {
      std::ostringstream msg;
      msg << "record " << i << " at t=" << raw[i].timestamp
          << " precedes t=" << raw[i - 1].timestamp;
      throw UnsortedInput(msg.str());
    }
  }

  const double period = sched.epoch_period();
  std::vector<MeasurementFrame> frames;
  long long current = 0;
  for (const MeasurementRecord& rec : raw) {
    if (!std::isfinite(rec.timestamp))
      throw UnsortedInput("non-finite record timestamp");
    const long long epoch = static_cast<long long>(
        std::floor((rec.timestamp - sched.epoch_origin) * sched.ble_rate + 0.5));
    if (frames.empty() || epoch != current) {
      current = epoch;
      MeasurementFrame f;
      f.timestamp = sched.epoch_origin + static_cast<double>(epoch) * period;
      frames.push_back(std::move(f));
    }
    MeasurementFrame& f = frames.back();
    if (rec.kind == MeasurementKind::kRss) {
      f.rss.push_back({rec.anchor, rec.value, rec.variance});
    } else {
      f.tdoa.push_back({rec.anchor, rec.reference, rec.value, rec.variance});
    }
  }

  // Keep one UWB frame in D, counted over frames that carry UWB data.
  std::size_t uwb_ordinal = 0;
  for (MeasurementFrame& f : frames) {
    if (f.tdoa.empty()) continue;
    if (uwb_ordinal % static_cast<std::size_t>(sched.decimation) != 0) f.tdoa.clear();
    ++uwb_ordinal;
  }

  std::erase_if(frames, [](const MeasurementFrame& f) { return f.empty(); });
  return frames;
}

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::kEkf: return "EKF";
    case FilterKind::kUkf: return "UKF";
    case FilterKind::kBleOnlyEkf: return "BLE-EKF";
    case FilterKind::kBleOnlyUkf: return "BLE-UKF";
  }
  return "?";
}

FilterKind parse_filter_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (FilterKind k : {FilterKind::kEkf, FilterKind::kUkf, FilterKind::kBleOnlyEkf,
                       FilterKind::kBleOnlyUkf}) {
    if (upper == to_string(k)) return k;
  }
  throw InvalidArgument("unknown filter kind '" + std::string(name) + "'");
}

bool uses_ukf(FilterKind kind) {
  return kind == FilterKind::kUkf || kind == FilterKind::kBleOnlyUkf;
}

bool uses_tdoa(FilterKind kind) {
  return kind == FilterKind::kEkf || kind == FilterKind::kUkf;
}

Track initialize_track(std::span<const MeasurementFrame> first_frames,
                       const AnchorLayout& layout,
                       const PathLossParams& params, FilterKind kind,
                       const InitConfig& init) {
  struct Accum {
    double sum = 0.0;
    int count = 0;
  };
  std::map<AnchorId, Accum> rss;
  for (const MeasurementFrame& f : first_frames) {
    for (const RssEntry& e : f.rss) {
      layout.at(e.anchor);
      Accum& a = rss[e.anchor];
      a.sum += e.value;
      ++a.count;
    }
  }
  if (rss.size() < 3) {
    throw InsufficientAnchors("initialization needs RSS from 3 distinct anchors, got " +
                              std::to_string(rss.size()));
  }

  std::vector<std::pair<double, AnchorId>> ranked;
  for (const auto& [id, a] : rss) ranked.emplace_back(a.sum / a.count, id);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  Point2 centroid = Point2::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const Anchor& anchor = layout.at(ranked[i].second);
    const double p0 = anchor.p0.value_or(params.p0);
    // Invert the path-loss model for a range estimate.
    const double range =
        params.d0 * std::pow(10.0, (p0 - ranked[i].first) / (10.0 * params.gamma));
    const double w = 1.0 / std::max(range, kDistanceFloor);
    centroid += w * anchor.position;
    total += w;
  }
  centroid /= total;

  Track t;
  t.kind = kind;
  t.timestamp = first_frames.front().timestamp;
  t.estimate.mean = make_state(centroid.x(), 0.0, centroid.y(), 0.0);
  const double vp = init.sigma_p * init.sigma_p;
  const double vv = init.sigma_v * init.sigma_v;
  t.estimate.cov = Eigen::Vector4d(vp, vv, vp, vv).asDiagonal();
  return t;
}

Track step(const Track& track, double timestamp, const MeasurementModel& model,
           const Eigen::VectorXd& z, const TrackerModels& models) {
  if (timestamp < track.timestamp) {
    std::ostringstream msg;
    msg << "frame at t=" << timestamp << " precedes track time " << track.timestamp;
    throw TimeRegression(msg.str());
  }

  Track next = track;
  next.timestamp = timestamp;
  next.estimate = predict(track.estimate, MotionModel{timestamp - track.timestamp,
                                                      models.sigma_ax2});
  if (z.size() == 0) return next;

  try {
    const UpdateResult upd = uses_ukf(track.kind)
                                 ? ukf_update(next.estimate, model, z, models.ukf)
                                 : ekf_update(next.estimate, model, z, models.ekf);
    next.estimate = upd.posterior;
    ++next.counters.updates;
    next.counters.psd_repairs += upd.psd_repairs;
    next.counters.cholesky_repairs += upd.cholesky_repairs;
  } catch (const SingularInnovation&) {
    ++next.counters.skipped;
  }
  return next;
}

Track step(const Track& track, const MeasurementFrame& frame,
           const AnchorLayout& layout, const TrackerModels& models) {
  validate_frame(frame, layout);
  if (uses_tdoa(track.kind) || frame.tdoa.empty()) {
    FrameMeasurementModel model(frame, layout, models.path_loss);
    return step(track, frame.timestamp, model, frame.values(), models);
  }
  MeasurementFrame ble_only;
  ble_only.timestamp = frame.timestamp;
  ble_only.rss = frame.rss;
  FrameMeasurementModel model(ble_only, layout, models.path_loss);
  return step(track, ble_only.timestamp, model, ble_only.values(), models);
}

std::vector<Track> run_track(std::span<const MeasurementFrame> frames,
                             const AnchorLayout& layout,
                             const TrackerModels& models, FilterKind kind,
                             const TrackRunOptions& opts,
                             const std::function<void(const Track&)>& observer) {
  std::vector<Track> out;
  if (frames.empty()) return out;
  const std::size_t n_init =
      std::min<std::size_t>(frames.size(), static_cast<std::size_t>(std::max(1, opts.init_frames)));
  Track track = initialize_track(frames.first(n_init), layout, models.path_loss,
                                 kind, opts.init);
  out.reserve(frames.size());
  for (const MeasurementFrame& f : frames) {
    track = step(track, f, layout, models);
    if (observer) observer(track);
    out.push_back(track);
  }
  return out;
}

}  // namespace hybridloc
