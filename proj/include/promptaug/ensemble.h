#ifndef PROMPTAUG_ENSEMBLE_H_
#define PROMPTAUG_ENSEMBLE_H_

#include <span>

#include "promptaug/core.h"

namespace promptaug {

// Per-pixel fraction of masks marking the pixel as foreground.
ScalarMap2D frequency_map(std::span<const BinaryMask2D> masks);

// f > t_ave (strict). t_ave = 0 gives the union of the ensemble, 0.5 a
// majority vote. Throws InvalidArgument unless t_ave is in [0, 1).
BinaryMask2D majority_mask(const ScalarMap2D& frequency, double t_ave);

// Aleatoric uncertainty from foreground frequency.
//   variance: f * (1 - f)
//   entropy:  -0.5 * (f ln(f + eps) + (1 - f) ln(1 - f + eps)), floored at 0
double uncertainty_value(double f, UncertaintyFormula formula, double epsilon);
ScalarMap2D uncertainty_raw(const ScalarMap2D& frequency,
                            UncertaintyFormula formula, double epsilon);

// Pixels whose uncertainty exceeds min + t_uc * (max - min). A constant map
// yields an empty mask.
BinaryMask2D uncertainty_mask(const ScalarMap2D& uc_raw, double t_uc);

}  // namespace promptaug

#endif  // PROMPTAUG_ENSEMBLE_H_
