#pragma once

#include "hybridloc/types.hpp"

namespace hybridloc {

enum class MeasurementKind { kRss, kTdoa };

// One raw measurement as it appears in a measurement log.
struct MeasurementRecord {
  double timestamp = 0.0;  // s
  MeasurementKind kind = MeasurementKind::kRss;
  AnchorId anchor;
  AnchorId reference;      // TDOA only
  double value = 0.0;      // dBm or s
  double variance = 1.0;   // dBm^2 or s^2

  bool operator==(const MeasurementRecord&) const = default;
};

}  // namespace hybridloc
