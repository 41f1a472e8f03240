#pragma once

#include "hybridloc/innovation.hpp"
#include "hybridloc/sensors.hpp"
#include "hybridloc/types.hpp"

namespace hybridloc {

enum class CovarianceForm { kStandard, kJoseph };

struct EkfConfig {
  CovarianceForm form = CovarianceForm::kJoseph;
};

// Linearize h at the prior mean, then
//   S = H P H^T + R,  K = P H^T S^-1,  x+ = x + K (z - h(x)),
//   P+ = (I - K H) P (I - K H)^T + K R K^T   (Joseph)
//      or (I - K H) P                        (standard),
// symmetrized. Throws SingularInnovation, InvalidArgument on empty z.
UpdateResult ekf_update(const Gaussian& prior, const MeasurementModel& model,
                        const Eigen::VectorXd& z, const EkfConfig& cfg = {});

UpdateResult ekf_update(const Gaussian& prior, const MeasurementFrame& frame,
                        const AnchorLayout& layout,
                        const PathLossParams& params,
                        const EkfConfig& cfg = {});

}  // namespace hybridloc
