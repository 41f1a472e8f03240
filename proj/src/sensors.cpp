#include "hybridloc/sensors.hpp"

#include "hybridloc/errors.hpp"

#include <cmath>
#include <numbers>

namespace hybridloc {
namespace {

void require_finite(const Point2& p, const char* what) {
  if (!p.allFinite()) throw InvalidArgument(std::string(what) + ": NaN or infinite position");
}

double anchor_p0(const Anchor& a, const PathLossParams& params) {
  return a.p0.value_or(params.p0);
}

// Unit vector from the anchor to the tag, with the distance clamped to the
// floor so the gradient stays bounded on top of an anchor.
Point2 clamped_direction(const Point2& pos, const Point2& anchor) {
  const Point2 diff = pos - anchor;
  return diff / std::max(diff.norm(), kDistanceFloor);
}

}  // namespace

void validate(const PathLossParams& p) {
  if (!std::isfinite(p.p0)) throw ValidationError("path_loss.p0 must be finite");
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw ValidationError("path_loss.gamma must be > 0");
  if (p.d0 != 1.0) throw ValidationError("path_loss.d0 is fixed at 1.0 m");
}

Eigen::VectorXd MeasurementFrame::values() const {
  Eigen::VectorXd z(size());
  Eigen::Index i = 0;
  for (const auto& e : rss) z(i++) = e.value;
  for (const auto& e : tdoa) z(i++) = e.value;
  return z;
}

Eigen::VectorXd MeasurementFrame::variances() const {
  Eigen::VectorXd r(size());
  Eigen::Index i = 0;
  for (const auto& e : rss) r(i++) = e.variance;
  for (const auto& e : tdoa) r(i++) = e.variance;
  return r;
}

void validate_frame(const MeasurementFrame& frame, const AnchorLayout& layout) {
  auto check_variance = [](double v, const std::string& who) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("non-positive variance for " + who);
  };
  for (const auto& e : frame.rss) {
    const Anchor& a = layout.at(e.anchor);
    if (!a.caps.ble) throw ValidationError("anchor " + e.anchor + " is not BLE-capable");
    if (!std::isfinite(e.value)) throw ValidationError("non-finite RSS from " + e.anchor);
    check_variance(e.variance, "RSS " + e.anchor);
  }
  for (const auto& e : frame.tdoa) {
    const Anchor& k = layout.at(e.anchor);
    const Anchor& l = layout.at(e.reference);
    if (e.anchor == e.reference)
      throw ValidationError("TDOA pair uses anchor " + e.anchor + " twice");
    if (e.reference != layout.reference_id())
      throw ValidationError("TDOA pair " + e.anchor + "," + e.reference +
                            " does not use the reference anchor " + layout.reference_id());
    if (!k.caps.uwb || !l.caps.uwb)
      throw ValidationError("TDOA pair " + e.anchor + "," + e.reference + " is not UWB-capable");
    if (!std::isfinite(e.value)) throw ValidationError("non-finite TDOA from " + e.anchor);
    check_variance(e.variance, "TDOA " + e.anchor);
  }
}

double predict_rss(const Point2& pos, const Anchor& anchor,
                   const PathLossParams& params) {
  require_finite(pos, "predict_rss");
  const double d = std::max((pos - anchor.position).norm(), kDistanceFloor);
  return anchor_p0(anchor, params) - 10.0 * params.gamma * std::log10(d / params.d0);
}

double predict_tdoa(const Point2& pos, const Anchor& anchor_k,
                    const Anchor& anchor_l, double c) {
  require_finite(pos, "predict_tdoa");
  return ((pos - anchor_k.position).norm() - (pos - anchor_l.position).norm()) / c;
}

Eigen::RowVector4d rss_gradient(const Point2& pos, const Anchor& anchor,
                                const PathLossParams& params) {
  const Point2 diff = pos - anchor.position;
  const double d = std::max(diff.norm(), kDistanceFloor);
  const double k = -10.0 * params.gamma / std::numbers::ln10 / (d * d);
  Eigen::RowVector4d row = Eigen::RowVector4d::Zero();
  row(kX) = k * diff.x();
  row(kY) = k * diff.y();
  return row;
}

Eigen::RowVector4d tdoa_gradient(const Point2& pos, const Anchor& anchor_k,
                                 const Anchor& anchor_l, double c) {
  const Point2 g = (clamped_direction(pos, anchor_k.position) -
                    clamped_direction(pos, anchor_l.position)) / c;
  Eigen::RowVector4d row = Eigen::RowVector4d::Zero();
  row(kX) = g.x();
  row(kY) = g.y();
  return row;
}

FrameMeasurementModel::FrameMeasurementModel(const MeasurementFrame& frame,
                                             const AnchorLayout& layout,
                                             const PathLossParams& params)
    : frame_(frame), layout_(layout), params_(params) {
  rss_anchors_.reserve(frame.rss.size());
  for (const auto& e : frame.rss) rss_anchors_.push_back(&layout.at(e.anchor));
  tdoa_pairs_.reserve(frame.tdoa.size());
  for (const auto& e : frame.tdoa)
    tdoa_pairs_.emplace_back(&layout.at(e.anchor), &layout.at(e.reference));
}

Eigen::VectorXd FrameMeasurementModel::predict(const StateVector& x) const {
  const Point2 pos = position_of(x);
  Eigen::VectorXd h(dimension());
  Eigen::Index i = 0;
  for (const Anchor* a : rss_anchors_) h(i++) = predict_rss(pos, *a, params_);
  for (const auto& [k, l] : tdoa_pairs_) h(i++) = predict_tdoa(pos, *k, *l);
  return h;
}

Eigen::MatrixXd FrameMeasurementModel::jacobian(const StateVector& x) const {
  const Point2 pos = position_of(x);
  Eigen::MatrixXd jac(dimension(), kStateDim);
  Eigen::Index i = 0;
  for (const Anchor* a : rss_anchors_) jac.row(i++) = rss_gradient(pos, *a, params_);
  for (const auto& [k, l] : tdoa_pairs_) jac.row(i++) = tdoa_gradient(pos, *k, *l);
  return jac;
}

MeasurementPrediction predict_frame(const StateVector& state,
                                    const MeasurementFrame& frame,
                                    const AnchorLayout& layout,
                                    const PathLossParams& params,
                                    bool want_jacobian) {
  FrameMeasurementModel model(frame, layout, params);
  MeasurementPrediction out;
  out.values = model.predict(state);
  if (want_jacobian) out.jacobian = model.jacobian(state);
  return out;
}

LinearMeasurementModel::LinearMeasurementModel(Eigen::MatrixXd m,
                                               Eigen::VectorXd variances)
    : m_(std::move(m)), variances_(std::move(variances)) {
  if (m_.cols() != kStateDim)
    throw InvalidArgument("linear model must have 4 columns");
  if (variances_.size() != m_.rows())
    throw InvalidArgument("linear model variance count mismatch");
}

}  // namespace hybridloc
