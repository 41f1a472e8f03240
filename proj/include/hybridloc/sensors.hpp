#pragma once

#include "hybridloc/types.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace hybridloc {

// Distances below this are clamped when evaluating RSS and TDOA gradients.
inline constexpr double kDistanceFloor = 0.1;  // m

struct PathLossParams {
  double p0 = -45.0;    // dBm at d0, shared default
  double gamma = 2.7;   // path-loss exponent
  double d0 = 1.0;      // m, fixed
};

void validate(const PathLossParams& p);

struct RssEntry {
  AnchorId anchor;
  double value = 0.0;     // dBm
  double variance = 1.0;  // dBm^2
};

// Time difference of arrival of `anchor` relative to `reference`.
struct TdoaEntry {
  AnchorId anchor;
  AnchorId reference;
  double value = 0.0;     // s
  double variance = 1.0;  // s^2
};

// One epoch: stacked RSS then TDOA entries.
struct MeasurementFrame {
  double timestamp = 0.0;
  std::vector<RssEntry> rss;
  std::vector<TdoaEntry> tdoa;

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(rss.size() + tdoa.size());
  }
  bool empty() const { return rss.empty() && tdoa.empty(); }
  Eigen::VectorXd values() const;
  Eigen::VectorXd variances() const;
};

// Checks ids against the layout, TDOA pairing against the reference anchor,
// capabilities, and positive finite variances. Throws UnknownAnchor or
// ValidationError. An empty frame is accepted here; the filters reject it.
void validate_frame(const MeasurementFrame& frame, const AnchorLayout& layout);

struct MeasurementPrediction {
  Eigen::VectorXd values;
  std::optional<Eigen::MatrixXd> jacobian;  // (m+n) x 4
};

double predict_rss(const Point2& pos, const Anchor& anchor,
                   const PathLossParams& params);

double predict_tdoa(const Point2& pos, const Anchor& anchor_k,
                    const Anchor& anchor_l, double c = kSpeedOfLight);

// Analytic gradient rows of the two models with respect to the state.
Eigen::RowVector4d rss_gradient(const Point2& pos, const Anchor& anchor,
                                const PathLossParams& params);
Eigen::RowVector4d tdoa_gradient(const Point2& pos, const Anchor& anchor_k,
                                 const Anchor& anchor_l,
                                 double c = kSpeedOfLight);

MeasurementPrediction predict_frame(const StateVector& state,
                                    const MeasurementFrame& frame,
                                    const AnchorLayout& layout,
                                    const PathLossParams& params,
                                    bool want_jacobian);

// Measurement function h(x) with additive diagonal noise, as seen by the
// filters.
class MeasurementModel {
 public:
  virtual ~MeasurementModel() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual Eigen::VectorXd predict(const StateVector& x) const = 0;
  virtual Eigen::MatrixXd jacobian(const StateVector& x) const = 0;
  // Diagonal of R.
  virtual Eigen::VectorXd noise_variances() const = 0;
};

// h(x) for the entries of one frame. Keeps references; the frame, layout,
// and params must outlive the model.
class FrameMeasurementModel final : public MeasurementModel {
 public:
  FrameMeasurementModel(const MeasurementFrame& frame,
                        const AnchorLayout& layout,
                        const PathLossParams& params);

  Eigen::Index dimension() const override { return frame_.size(); }
  Eigen::VectorXd predict(const StateVector& x) const override;
  Eigen::MatrixXd jacobian(const StateVector& x) const override;
  Eigen::VectorXd noise_variances() const override {
    return frame_.variances();
  }

 private:
  const MeasurementFrame& frame_;
  const AnchorLayout& layout_;
  const PathLossParams& params_;
  std::vector<const Anchor*> rss_anchors_;
  std::vector<std::pair<const Anchor*, const Anchor*>> tdoa_pairs_;
};

// h(x) = M x.
class LinearMeasurementModel final : public MeasurementModel {
 public:
  LinearMeasurementModel(Eigen::MatrixXd m, Eigen::VectorXd variances);

  Eigen::Index dimension() const override { return m_.rows(); }
  Eigen::VectorXd predict(const StateVector& x) const override { return m_ * x; }
  Eigen::MatrixXd jacobian(const StateVector&) const override { return m_; }
  Eigen::VectorXd noise_variances() const override { return variances_; }

 private:
  Eigen::MatrixXd m_;
  Eigen::VectorXd variances_;
};

}  // namespace hybridloc
