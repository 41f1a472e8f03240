#include "hybridloc/linalg.hpp"

#include "hybridloc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hybridloc {
namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr std::array<double, 3> kJitterLadder{1e-12, 1e-10, 1e-8};

}  // namespace

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  return asym <= rel_tol * scale;
}

bool is_psd(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return true;
  if (!m.allFinite()) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m),
                                                    Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double largest = std::max(ev.maxCoeff(), 0.0);
  return ev.minCoeff() >= -rel_tol * largest;
}

Eigen::MatrixXd clip_eigenvalues(const Eigen::MatrixXd& m, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(floor);
  const Eigen::MatrixXd& v = es.eigenvectors();
  return symmetrize(v * ev.asDiagonal() * v.transpose());
}

CholeskyResult cholesky_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw NotSymmetric("cholesky_psd: matrix is not square");
  if (!m.allFinite())
    throw IndefiniteBeyondRepair("cholesky_psd: non-finite entries");
  if (!is_symmetric(m, kSymmetryTolerance))
    throw NotSymmetric("cholesky_psd: asymmetry exceeds tolerance");

  const Eigen::Index n = m.rows();
  const Eigen::MatrixXd sym = symmetrize(m);
  CholeskyResult result;

  // The zero matrix (a collapsed belief) has the zero factor.
  if (sym.cwiseAbs().maxCoeff() == 0.0) {
    result.factor = Eigen::MatrixXd::Zero(n, n);
    return result;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() == Eigen::Success) {
    result.factor = llt.matrixL();
    return result;
  }

  const double trace = sym.trace();
  if (trace <= 0.0)
    throw IndefiniteBeyondRepair("cholesky_psd: non-positive trace");
  for (double eps : kJitterLadder) {
    const double jitter = eps * trace / static_cast<double>(n);
    llt.compute(sym + jitter * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      result.factor = llt.matrixL();
      result.repaired = true;
      result.jitter = jitter;
      return result;
    }
  }
  throw IndefiniteBeyondRepair("cholesky_psd: jitter ladder exhausted");
}

}  // namespace hybridloc
