#pragma once

#include "hybridloc/ekf.hpp"
#include "hybridloc/fusion.hpp"
#include "hybridloc/path.hpp"
#include "hybridloc/sensors.hpp"
#include "hybridloc/simulator.hpp"
#include "hybridloc/types.hpp"
#include "hybridloc/ukf.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hybridloc {

struct ExperimentConfig {
  std::string preset = "default";
  AnchorLayout layout = default_layout();
  ReferencePath path = default_path();
  PathLossParams path_loss;
  double sigma_ax2 = 0.35;
  NoiseConfig noise;  // seed is replaced per run
  ScheduleConfig schedule;
  UkfParams ukf;
  EkfConfig ekf;
  InitConfig init;
  int init_frames = 1;
  std::vector<FilterKind> filters{FilterKind::kEkf, FilterKind::kUkf};
  std::vector<double> thresholds{1.0, 1.5, 2.0, 3.0};
  int runs = 1;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  TrackerModels tracker_models() const;
};

// Named starting points, overlaid by the keys of a config document:
//   default         defaults listed in the README
//   paper-highrate  3 Hz UWB, 100 runs
//   paper-lowrate   one UWB epoch per 2 s (D = 6), rss_sigma 6 dB,
//                   toa_sigma 2 ns, 100 runs
// Throws ValidationError for unknown names.
ExperimentConfig preset_config(std::string_view name);

// JSON document; see the README for the schema. Unknown keys are rejected.
// Throws ParseError (syntax, wrong types; message names line or key) and
// ValidationError (violated invariant).
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);

// Fully resolved config, every default explicit. parse_config accepts it.
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace hybridloc
