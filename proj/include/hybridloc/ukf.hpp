#pragma once

#include "hybridloc/innovation.hpp"
#include "hybridloc/sensors.hpp"
#include "hybridloc/types.hpp"

#include <Eigen/Dense>

#include <array>

namespace hybridloc {

inline constexpr int kSigmaCount = 2 * kStateDim + 1;

struct UkfParams {
  double alpha = 0.5;
  double kappa = 0.0;
  double beta = 2.0;

  double lambda() const { return alpha * alpha * (kStateDim + kappa) - kStateDim; }
  // L + lambda; must be positive.
  double scale() const { return kStateDim + lambda(); }
};

// Throws InvalidArgument unless alpha in (0, 1] and L + lambda > 0.
void validate(const UkfParams& p);

struct SigmaPointSet {
  std::array<StateVector, kSigmaCount> points;
  Eigen::Matrix<double, kSigmaCount, 1> mean_weights;
  Eigen::Matrix<double, kSigmaCount, 1> cov_weights;
  bool repaired = false;  // the covariance root needed diagonal jitter
};

// X0 = mean, X_i = mean +/- column i of chol((L + lambda) P).
SigmaPointSet sigma_points(const StateVector& mean, const Covariance4& cov,
                           const UkfParams& p);

struct UnscentedMeasurement {
  Eigen::VectorXd z_hat;
  Eigen::MatrixXd p_zz;  // includes R
  Eigen::MatrixXd p_xz;  // 4 x (m+n)
  std::array<Eigen::VectorXd, kSigmaCount> transformed;
  bool repaired = false;  // P_zz needed eigenvalue clipping
};

UnscentedMeasurement unscented_measurement(const SigmaPointSet& points,
                                           const MeasurementModel& model);

UnscentedMeasurement unscented_measurement(const SigmaPointSet& points,
                                           const MeasurementFrame& frame,
                                           const AnchorLayout& layout,
                                           const PathLossParams& params);

// K = P_xz P_zz^-1, x+ = x + K (z - z_hat), P+ = P - K P_zz K^T.
// Throws SingularInnovation, IndefiniteBeyondRepair.
UpdateResult ukf_update(const Gaussian& prior, const MeasurementModel& model,
                        const Eigen::VectorXd& z, const UkfParams& p = {});

UpdateResult ukf_update(const Gaussian& prior, const MeasurementFrame& frame,
                        const AnchorLayout& layout,
                        const PathLossParams& params, const UkfParams& p = {});

}  // namespace hybridloc
