#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hybridloc {

// State layout is (x, vx, y, vy), column convention.
inline constexpr int kStateDim = 4;
inline constexpr int kX = 0;
inline constexpr int kVx = 1;
inline constexpr int kY = 2;
inline constexpr int kVy = 3;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using Covariance4 = Eigen::Matrix<double, kStateDim, kStateDim>;
using Point2 = Eigen::Vector2d;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact SI

inline Point2 position_of(const StateVector& s) { return {s(kX), s(kY)}; }
inline Point2 velocity_of(const StateVector& s) { return {s(kVx), s(kVy)}; }

inline StateVector make_state(double x, double vx, double y, double vy) {
  StateVector s;
  s << x, vx, y, vy;
  return s;
}

// Filter belief: mean and covariance.
struct Gaussian {
  StateVector mean = StateVector::Zero();
  Covariance4 cov = Covariance4::Zero();
};

using AnchorId = std::string;

struct Capabilities {
  bool ble = true;
  bool uwb = true;
};

struct Anchor {
  AnchorId id;
  Point2 position = Point2::Zero();
  Capabilities caps;
  // Per-anchor received power at the reference distance, dBm. Falls back
  // to the shared path-loss value when empty.
  std::optional<double> p0;
};

// Fixed receiver set. The constructor validates: unique ids, finite
// positions, at least three BLE anchors, and a UWB-capable reference anchor
// whenever any UWB anchor exists.
class AnchorLayout {
 public:
  AnchorLayout(std::vector<Anchor> anchors, AnchorId reference);

  const std::vector<Anchor>& anchors() const { return anchors_; }
  const AnchorId& reference_id() const { return reference_; }

  // Throws UnknownAnchor.
  const Anchor& at(const AnchorId& id) const;
  const Anchor* find(const AnchorId& id) const;
  bool contains(const AnchorId& id) const { return find(id) != nullptr; }

  std::vector<const Anchor*> ble_anchors() const;
  std::vector<const Anchor*> uwb_anchors() const;
  bool has_uwb() const;
  const Anchor* reference() const { return find(reference_); }

 private:
  std::vector<Anchor> anchors_;
  AnchorId reference_;
  std::unordered_map<AnchorId, std::size_t> index_;
};

}  // namespace hybridloc
