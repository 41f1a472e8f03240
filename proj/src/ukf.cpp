#include "hybridloc/ukf.hpp"

#include "hybridloc/errors.hpp"
#include "hybridloc/linalg.hpp"

#include <cmath>

namespace hybridloc {
namespace {

// Eigenvalue floor for P_zz in equilibrated (unit-diagonal) scale.
constexpr double kPzzEigenFloor = 1e-12;

// P_zz can lose definiteness when W0 is negative. Clip in the equilibrated
// scale so RSS and TDOA entries are treated alike.
bool repair_innovation_covariance(Eigen::MatrixXd& p_zz) {
  if (!(p_zz.diagonal().array() > 0.0).all()) return false;
  Eigen::VectorXd inv_sqrt;
  const Eigen::MatrixXd normalized = symmetrize(equilibrate(p_zz, &inv_sqrt));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() >= kPzzEigenFloor) return false;
  const Eigen::VectorXd sqrt_diag = inv_sqrt.cwiseInverse();
  p_zz = symmetrize(sqrt_diag.asDiagonal() *
                    clip_eigenvalues(normalized, kPzzEigenFloor) *
                    sqrt_diag.asDiagonal());
  return true;
}

}  // namespace

void validate(const UkfParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0))
    throw InvalidArgument("ukf: alpha must lie in (0, 1]");
  if (!std::isfinite(p.kappa) || !std::isfinite(p.beta))
    throw InvalidArgument("ukf: kappa and beta must be finite");
  if (!(p.scale() > 0.0))
    throw InvalidArgument("ukf: L + lambda must be positive");
}

SigmaPointSet sigma_points(const StateVector& mean, const Covariance4& cov,
                           const UkfParams& p) {
  validate(p);
  const double scale = p.scale();
  const double lambda = p.lambda();

  const CholeskyResult root = cholesky_psd(scale * cov);

  SigmaPointSet set;
  set.repaired = root.repaired;
  set.points[0] = mean;
  for (int i = 0; i < kStateDim; ++i) {
    const StateVector col = root.factor.col(i);
    set.points[1 + i] = mean + col;
    set.points[1 + kStateDim + i] = mean - col;
  }

  set.mean_weights.setConstant(1.0 / (2.0 * scale));
  set.cov_weights.setConstant(1.0 / (2.0 * scale));
  set.mean_weights(0) = lambda / scale;
  set.cov_weights(0) = lambda / scale + (1.0 - p.alpha * p.alpha + p.beta);
  return set;
}

UnscentedMeasurement unscented_measurement(const SigmaPointSet& points,
                                           const MeasurementModel& model) {
  const Eigen::Index m = model.dimension();
  UnscentedMeasurement out;
  for (int i = 0; i < kSigmaCount; ++i) out.transformed[i] = model.predict(points.points[i]);
  // Weighted mean accumulated about the centre point; the weights sum to 1,
  // and the large negative centre weight no longer cancels.
  out.z_hat = out.transformed[0];
  for (int i = 1; i < kSigmaCount; ++i)
    out.z_hat += points.mean_weights(i) * (out.transformed[i] - out.transformed[0]);

  const StateVector& mean = points.points[0];
  out.p_zz = Eigen::MatrixXd::Zero(m, m);
  out.p_xz = Eigen::MatrixXd::Zero(kStateDim, m);
  for (int i = 0; i < kSigmaCount; ++i) {
    const Eigen::VectorXd dz = out.transformed[i] - out.z_hat;
    const StateVector dx = points.points[i] - mean;
    out.p_zz.noalias() += points.cov_weights(i) * dz * dz.transpose();
    out.p_xz.noalias() += points.cov_weights(i) * dx * dz.transpose();
  }
  out.p_zz.diagonal() += model.noise_variances();
  out.p_zz = symmetrize(out.p_zz);
  out.repaired = repair_innovation_covariance(out.p_zz);
  return out;
}

UnscentedMeasurement unscented_measurement(const SigmaPointSet& points,
                                           const MeasurementFrame& frame,
                                           const AnchorLayout& layout,
                                           const PathLossParams& params) {
  FrameMeasurementModel model(frame, layout, params);
  return unscented_measurement(points, model);
}

UpdateResult ukf_update(const Gaussian& prior, const MeasurementModel& model,
                        const Eigen::VectorXd& z, const UkfParams& p) {
  if (z.size() == 0) throw InvalidArgument("ukf_update: empty measurement");
  if (z.size() != model.dimension())
    throw InvalidArgument("ukf_update: measurement size mismatch");

  const SigmaPointSet points = sigma_points(prior.mean, prior.cov, p);
  const UnscentedMeasurement um = unscented_measurement(points, model);

  InnovationSolver solver(um.p_zz);
  // K^T = P_zz^-1 P_xz^T
  const Eigen::MatrixXd gain = solver.solve(um.p_xz.transpose()).transpose();

  UpdateResult out;
  out.innovation.residual = z - um.z_hat;
  out.innovation.covariance = um.p_zz;
  out.innovation.log_det = solver.log_det();
  out.innovation.condition = solver.condition();
  out.psd_repairs = (um.repaired ? 1 : 0);
  out.cholesky_repairs = (points.repaired ? 1 : 0);

  out.posterior.mean = prior.mean + gain * out.innovation.residual;
  Covariance4 post = prior.cov - gain * um.p_zz * gain.transpose();
  post = 0.5 * (post + post.transpose()).eval();
  if (!is_psd(post)) {
    post = clip_eigenvalues(post, 0.0);
    ++out.psd_repairs;
  }
  out.posterior.cov = post;
  return out;
}

UpdateResult ukf_update(const Gaussian& prior, const MeasurementFrame& frame,
                        const AnchorLayout& layout,
                        const PathLossParams& params, const UkfParams& p) {
  FrameMeasurementModel model(frame, layout, params);
  return ukf_update(prior, model, frame.values(), p);
}

}  // namespace hybridloc
