#include "hybridloc/innovation.hpp"

#include "hybridloc/errors.hpp"
#include "hybridloc/linalg.hpp"

#include <cmath>
#include <sstream>

namespace hybridloc {

Eigen::MatrixXd equilibrate(const Eigen::MatrixXd& s,
                            Eigen::VectorXd* inv_sqrt_diag) {
  const Eigen::VectorXd d = s.diagonal().cwiseSqrt().cwiseInverse();
  if (inv_sqrt_diag != nullptr) *inv_sqrt_diag = d;
  return d.asDiagonal() * s * d.asDiagonal();
}

InnovationSolver::InnovationSolver(const Eigen::MatrixXd& s) {
  if (s.rows() == 0 || s.rows() != s.cols())
    throw InvalidArgument("innovation covariance must be square and non-empty");
  if (!s.allFinite() || !(s.diagonal().array() > 0.0).all())
    throw SingularInnovation("innovation covariance has a non-positive diagonal");

  const Eigen::MatrixXd normalized = symmetrize(equilibrate(s, &inv_sqrt_diag_));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized,
                                                    Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  condition_ = lo > 0.0 ? hi / lo : INFINITY;
  if (!(condition_ <= kMaxInnovationCondition)) {
    std::ostringstream msg;
    msg << "innovation covariance condition number " << condition_
        << " exceeds " << kMaxInnovationCondition;
    throw SingularInnovation(msg.str());
  }

  llt_.compute(normalized);
  if (llt_.info() != Eigen::Success)
    throw SingularInnovation("innovation covariance factorization failed");

  log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum() -
             2.0 * inv_sqrt_diag_.array().log().sum();
}

Eigen::MatrixXd InnovationSolver::solve(const Eigen::MatrixXd& b) const {
  // S^-1 = D (D S D)^-1 D
  const Eigen::MatrixXd scaled = inv_sqrt_diag_.asDiagonal() * b;
  return inv_sqrt_diag_.asDiagonal() * llt_.solve(scaled);
}

}  // namespace hybridloc
