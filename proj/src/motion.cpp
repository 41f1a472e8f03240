#include "hybridloc/motion.hpp"

#include "hybridloc/errors.hpp"
#include "hybridloc/linalg.hpp"

#include <cmath>

namespace hybridloc {

void validate(const MotionModel& m) {
  if (!(m.dt >= 0.0) || !std::isfinite(m.dt))
    throw InvalidArgument("motion: dt must be finite and >= 0");
  if (!(m.sigma_ax2 >= 0.0) || !std::isfinite(m.sigma_ax2))
    throw InvalidArgument("motion: sigma_ax2 must be finite and >= 0");
}

Covariance4 transition_matrix(const MotionModel& m) {
  Covariance4 f = Covariance4::Identity();
  f(kX, kVx) = m.dt;
  f(kY, kVy) = m.dt;
  return f;
}

Covariance4 process_noise(const MotionModel& m) {
  const double dt = m.dt;
  const double dt2 = dt * dt;
  Eigen::Matrix2d block;
  block << dt2 * dt2 / 4.0, dt2 * dt / 2.0,
           dt2 * dt / 2.0,  dt2;
  block *= m.sigma_ax2;

  Covariance4 q = Covariance4::Zero();
  q.block<2, 2>(kX, kX) = block;
  q.block<2, 2>(kY, kY) = block;
  return q;
}

Gaussian predict(const Gaussian& prior, const MotionModel& m) {
  validate(m);
  const Covariance4 f = transition_matrix(m);
  Gaussian out;
  out.mean = f * prior.mean;
  out.cov = f * prior.cov * f.transpose() + process_noise(m);
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

}  // namespace hybridloc
