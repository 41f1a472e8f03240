#pragma once

#include "hybridloc/types.hpp"

namespace hybridloc {

// Discrete white noise acceleration (DWNA) model, one shared acceleration
// variance for both axes.
struct MotionModel {
  double dt = 1.0 / 3.0;     // s, update period; > 0 (0 accepted by predict)
  double sigma_ax2 = 0.35;   // (m/s^2)^2, >= 0
};

// Throws InvalidArgument when dt < 0 or sigma_ax2 < 0 or either is NaN.
void validate(const MotionModel& m);

Covariance4 transition_matrix(const MotionModel& m);
Covariance4 process_noise(const MotionModel& m);

// (F x, F P F^T + Q), covariance symmetrized.
Gaussian predict(const Gaussian& prior, const MotionModel& m);

}  // namespace hybridloc
