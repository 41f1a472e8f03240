#include "hybridloc/ekf.hpp"

#include "hybridloc/errors.hpp"
#include "hybridloc/linalg.hpp"

namespace hybridloc {

UpdateResult ekf_update(const Gaussian& prior, const MeasurementModel& model,
                        const Eigen::VectorXd& z, const EkfConfig& cfg) {
  if (z.size() == 0) throw InvalidArgument("ekf_update: empty measurement");
  if (z.size() != model.dimension())
    throw InvalidArgument("ekf_update: measurement size mismatch");

  const Covariance4& p = prior.cov;
  const Eigen::MatrixXd h = model.jacobian(prior.mean);
  const Eigen::VectorXd r = model.noise_variances();

  Eigen::MatrixXd s = h * p * h.transpose();
  s.diagonal() += r;
  s = symmetrize(s);

  InnovationSolver solver(s);
  // K^T = S^-1 H P  (S and P symmetric)
  const Eigen::MatrixXd gain = solver.solve(h * p).transpose();

  UpdateResult out;
  out.innovation.residual = z - model.predict(prior.mean);
  out.innovation.covariance = s;
  out.innovation.log_det = solver.log_det();
  out.innovation.condition = solver.condition();

  out.posterior.mean = prior.mean + gain * out.innovation.residual;

  const Covariance4 i_kh = Covariance4::Identity() - gain * h;
  Covariance4 post;
  if (cfg.form == CovarianceForm::kJoseph) {
    post = i_kh * p * i_kh.transpose() +
           gain * r.asDiagonal() * gain.transpose();
  } else {
    post = i_kh * p;
  }
  out.posterior.cov = 0.5 * (post + post.transpose());
  return out;
}

UpdateResult ekf_update(const Gaussian& prior, const MeasurementFrame& frame,
                        const AnchorLayout& layout,
                        const PathLossParams& params, const EkfConfig& cfg) {
  FrameMeasurementModel model(frame, layout, params);
  return ekf_update(prior, model, frame.values(), cfg);
}

}  // namespace hybridloc
