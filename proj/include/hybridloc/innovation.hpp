#pragma once

#include "hybridloc/types.hpp"

#include <Eigen/Dense>

namespace hybridloc {

// Condition number (of the diagonally equilibrated innovation covariance)
// above which an update is refused.
inline constexpr double kMaxInnovationCondition = 1e12;

struct InnovationReport {
  Eigen::VectorXd residual;    // z - predicted measurement
  Eigen::MatrixXd covariance;  // S (EKF) or P_zz (UKF)
  double log_det = 0.0;        // log det of covariance
  double condition = 1.0;      // of the equilibrated covariance
};

struct UpdateResult {
  Gaussian posterior;
  InnovationReport innovation;
  int psd_repairs = 0;       // eigenvalue clips applied during this update
  int cholesky_repairs = 0;  // covariance root needed diagonal jitter
};

// Factorization of an innovation covariance S. RSS entries (dBm^2) and TDOA
// entries (s^2) differ by ~19 orders of magnitude, so S is equilibrated
// with D = diag(S)^(-1/2) before the conditioning check and the solve.
class InnovationSolver {
 public:
  // Throws SingularInnovation when S is not positive definite or its
  // equilibrated condition number exceeds kMaxInnovationCondition.
  explicit InnovationSolver(const Eigen::MatrixXd& s);

  // S^-1 * b
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

  double log_det() const { return log_det_; }
  double condition() const { return condition_; }

 private:
  Eigen::VectorXd inv_sqrt_diag_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
  double condition_ = 1.0;
};

// Equilibrated matrix D S D with D = diag(S)^(-1/2). Requires positive
// diagonal.
Eigen::MatrixXd equilibrate(const Eigen::MatrixXd& s,
                            Eigen::VectorXd* inv_sqrt_diag = nullptr);

}  // namespace hybridloc
