#include "hybridloc/simulator.hpp"

#include "hybridloc/errors.hpp"

#include <cmath>
#include <random>

namespace hybridloc {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void validate(const NoiseConfig& n) {
  if (!(n.rss_sigma >= 0.0) || !std::isfinite(n.rss_sigma))
    throw ValidationError("noise.rss_sigma must be >= 0");
  if (!(n.toa_sigma >= 0.0) || !std::isfinite(n.toa_sigma))
    throw ValidationError("noise.toa_sigma must be >= 0");
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t run_index) {
  return splitmix64(master + (run_index + 1) * 0x9E3779B97F4A7C15ULL);
}

std::vector<TruthSample> sample_path(const ReferencePath& path, double rate) {
  if (!(rate > 0.0)) throw ValidationError("sample rate must be > 0");
  const auto last = static_cast<std::size_t>(std::floor(path.duration() * rate + 1e-9));
  std::vector<TruthSample> out;
  out.reserve(last + 1);
  for (std::size_t k = 0; k <= last; ++k) out.push_back(path.at(static_cast<double>(k) / rate));
  return out;
}

std::vector<bool> uwb_epoch_mask(std::size_t epochs, const ScheduleConfig& sched) {
  std::vector<bool> mask(epochs, false);
  if (sched.uwb_rate <= 0.0) return mask;
  const double ratio = sched.uwb_rate / sched.ble_rate;
  double prev = -1.0;
  for (std::size_t k = 0; k < epochs; ++k) {
    const double slot = std::floor(static_cast<double>(k) * ratio + 1e-9);
    mask[k] = slot != prev;
    prev = slot;
  }
  return mask;
}

std::vector<MeasurementRecord> synthesize_stream(
    std::span<const TruthSample> truth, const AnchorLayout& layout,
    const PathLossParams& params, const ScheduleConfig& sched,
    const NoiseConfig& noise) {
  validate(params);
  validate(sched);
  validate(noise);

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  const auto ble = layout.ble_anchors();
  const auto uwb = layout.uwb_anchors();
  const Anchor* ref = layout.reference();
  const std::vector<bool> uwb_epoch = uwb_epoch_mask(truth.size(), sched);

  const double rss_var = std::max(noise.rss_sigma * noise.rss_sigma, kMinRssVariance);
  const double tdoa_var = std::max(2.0 * noise.toa_sigma * noise.toa_sigma, kMinTdoaVariance);

  std::vector<MeasurementRecord> out;
  std::vector<double> toa_noise(uwb.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const TruthSample& s = truth[k];
    for (const Anchor* a : ble) {
      MeasurementRecord r;
      r.timestamp = s.t;
      r.kind = MeasurementKind::kRss;
      r.anchor = a->id;
      r.value = predict_rss(s.position, *a, params) + noise.rss_sigma * unit(rng);
      r.variance = rss_var;
      out.push_back(std::move(r));
    }
    if (!uwb_epoch[k] || ref == nullptr || uwb.size() < 2) continue;

    double ref_noise = 0.0;
    for (std::size_t i = 0; i < uwb.size(); ++i) {
      toa_noise[i] = noise.toa_sigma * unit(rng);
      if (uwb[i] == ref) ref_noise = toa_noise[i];
    }
    for (std::size_t i = 0; i < uwb.size(); ++i) {
      if (uwb[i] == ref) continue;
      MeasurementRecord r;
      r.timestamp = s.t;
      r.kind = MeasurementKind::kTdoa;
      r.anchor = uwb[i]->id;
      r.reference = ref->id;
      r.value = predict_tdoa(s.position, *uwb[i], *ref) + (toa_noise[i] - ref_noise);
      r.variance = tdoa_var;
      out.push_back(std::move(r));
    }
  }
  return out;
}

AnchorLayout default_layout() {
  std::vector<Anchor> anchors;
  auto add = [&](const char* id, double x, double y) {
    Anchor a;
    a.id = id;
    a.position = {x, y};
    anchors.push_back(std::move(a));
  };
  add("A1", 0.5, 0.5);
  add("A2", 3.25, 0.5);
  add("A3", 6.0, 0.5);
  add("A4", 8.75, 0.5);
  add("A5", 11.5, 0.5);
  add("A6", 1.875, 5.5);
  add("A7", 4.625, 5.5);
  add("A8", 7.375, 5.5);
  add("A9", 10.125, 5.5);
  return AnchorLayout(std::move(anchors), "A3");
}

ReferencePath default_path() {
  return ReferencePath({{1, 3}, {2, 3}, {2, 5}, {2, 3}, {6, 3}, {6, 5}, {6, 3},
                        {10, 3}, {10, 5}, {10, 1}, {4, 1}, {4, 3}, {1, 3}, {1, 1}},
                       1.0);
}

}  // namespace hybridloc
