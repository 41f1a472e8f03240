#pragma once

#include <Eigen/Dense>

namespace hybridloc {

struct CholeskyResult {
  Eigen::MatrixXd factor;  // lower triangular
  bool repaired = false;   // diagonal jitter was needed
  double jitter = 0.0;     // absolute value added to the diagonal
};

// Lower-triangular S with S*S^T equal to m. On failure of the plain
// factorization, retries with eps*trace/n added to the diagonal for eps in
// {1e-12, 1e-10, 1e-8}. Throws NotSymmetric or IndefiniteBeyondRepair.
CholeskyResult cholesky_psd(const Eigen::MatrixXd& m);

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

// max|m - m^T| <= rel_tol * max|m|
bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol = 1e-12);

// All eigenvalues >= -rel_tol * (largest eigenvalue).
bool is_psd(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

// Symmetric eigen-decomposition with eigenvalues raised to at least floor.
Eigen::MatrixXd clip_eigenvalues(const Eigen::MatrixXd& m, double floor);

}  // namespace hybridloc
