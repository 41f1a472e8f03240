#pragma once

#include "hybridloc/fusion.hpp"
#include "hybridloc/path.hpp"
#include "hybridloc/records.hpp"
#include "hybridloc/sensors.hpp"
#include "hybridloc/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hybridloc {

struct NoiseConfig {
  double rss_sigma = 4.0;    // dB
  double toa_sigma = 1e-9;   // s, per-anchor TOA jitter
  std::uint64_t seed = 1;
};

void validate(const NoiseConfig& n);

// Variances written for noiseless records, which must stay positive.
inline constexpr double kMinRssVariance = 1e-6;   // dBm^2
inline constexpr double kMinTdoaVariance = 1e-24; // s^2

// Samples at t = k / rate for k = 0 .. floor(duration * rate).
std::vector<TruthSample> sample_path(const ReferencePath& path, double rate);

// Noisy RSS (every BLE anchor, every sample) and TDOA records (every UWB
// anchor against the reference, on the samples scheduled for UWB). `truth`
// is taken to be sampled at sched.ble_rate. TDOA noise is the difference
// of two independent TOA errors, variance 2 toa_sigma^2. Decimation is not
// applied here. Output is time-sorted and a pure function of the inputs.
std::vector<MeasurementRecord> synthesize_stream(
    std::span<const TruthSample> truth, const AnchorLayout& layout,
    const PathLossParams& params, const ScheduleConfig& sched,
    const NoiseConfig& noise);

// Indices of BLE epochs that carry a UWB transmission at sched.uwb_rate.
std::vector<bool> uwb_epoch_mask(std::size_t epochs, const ScheduleConfig& sched);

// Nine anchors on a staggered two-row grid over a 12 m x 6 m floor,
// reference anchor "A3".
AnchorLayout default_layout();

// 36 m walk at 1 m/s over the default floor.
ReferencePath default_path();

// Seed of Monte Carlo run `run_index`: splitmix64(master + (index + 1) *
// 0x9E3779B97F4A7C15).
std::uint64_t run_seed(std::uint64_t master, std::uint64_t run_index);

}  // namespace hybridloc
