#include "hybridloc/path.hpp"

#include "hybridloc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hybridloc {

ReferencePath::ReferencePath(std::vector<Point2> waypoints, double speed)
    : waypoints_(std::move(waypoints)), speed_(speed) {
  if (waypoints_.size() < 2)
    throw ValidationError("reference path needs at least 2 waypoints");
  if (!(speed_ > 0.0) || !std::isfinite(speed_))
    throw ValidationError("reference path speed must be > 0");
  cumulative_.reserve(waypoints_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (!waypoints_[i].allFinite() || !waypoints_[i - 1].allFinite())
      throw ValidationError("reference path waypoints must be finite");
    const double len = (waypoints_[i] - waypoints_[i - 1]).norm();
    if (len == 0.0)
      throw ValidationError("reference path has repeated consecutive waypoint " +
                            std::to_string(i));
    cumulative_.push_back(cumulative_.back() + len);
  }
}

TruthSample ReferencePath::at(double t) const {
  const double s = std::clamp(t * speed_, 0.0, length());
  // Segment j spans [cumulative_[j], cumulative_[j + 1]).
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t j = static_cast<std::size_t>(it - cumulative_.begin());
  j = std::clamp<std::size_t>(j, 1, waypoints_.size() - 1) - 1;

  const Point2 a = waypoints_[j];
  const Point2 b = waypoints_[j + 1];
  const Point2 dir = (b - a) / (b - a).norm();

  TruthSample out;
  out.t = t;
  out.velocity = speed_ * dir;
  out.position = s >= length() ? waypoints_.back() : Point2(a + (s - cumulative_[j]) * dir);
  return out;
}

}  // namespace hybridloc
