#pragma once

#include "hybridloc/types.hpp"

#include <vector>

namespace hybridloc {

struct TruthSample {
  double t = 0.0;
  Point2 position = Point2::Zero();
  Point2 velocity = Point2::Zero();
};

// Polyline walked at constant speed. Requires >= 2 waypoints, distinct
// consecutive waypoints, and speed > 0 (ValidationError otherwise).
class ReferencePath {
 public:
  ReferencePath(std::vector<Point2> waypoints, double speed);

  const std::vector<Point2>& waypoints() const { return waypoints_; }
  double speed() const { return speed_; }
  double length() const { return cumulative_.back(); }
  double duration() const { return length() / speed_; }

  // Position and velocity after walking for t seconds, clamped to the
  // endpoints. At a corner the outgoing segment's velocity is reported.
  TruthSample at(double t) const;

 private:
  std::vector<Point2> waypoints_;
  double speed_;
  std::vector<double> cumulative_;  // arc length at each waypoint
};

}  // namespace hybridloc
