#include "promptaug/ensemble.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace promptaug {

ScalarMap2D frequency_map(std::span<const BinaryMask2D> masks) {
  if (masks.empty()) throw InvalidArgument("frequency_map needs at least one mask");
  const BinaryMask2D& first = masks.front();
  std::vector<int> counts(first.size(), 0);
  for (const auto& m : masks) {
    require_same_shape(first, m, "frequency_map");
    for (std::size_t i = 0; i < m.size(); ++i) counts[i] += m[i];
  }
  const double total = static_cast<double>(masks.size());
  ScalarMap2D f(first.width(), first.height());
  for (std::size_t i = 0; i < counts.size(); ++i) f.set(i, counts[i] / total);
  return f;
}

BinaryMask2D majority_mask(const ScalarMap2D& frequency, double t_ave) {
  if (!(t_ave >= 0.0 && t_ave < 1.0)) {
    throw InvalidArgument("t_ave must lie in [0,1)");
  }
  BinaryMask2D out(frequency.width(), frequency.height());
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    out.set(i, frequency[i] > t_ave);
  }
  return out;
}

double uncertainty_value(double f, UncertaintyFormula formula, double epsilon) {
  if (formula == UncertaintyFormula::kVariance) return f * (1.0 - f);
  const double h =
      -0.5 * (f * std::log(f + epsilon) + (1.0 - f) * std::log(1.0 - f + epsilon));
  // At f in {0, 1} the epsilon inside the log leaves a ~-5e-8 residue.
  return std::max(h, 0.0);
}

ScalarMap2D uncertainty_raw(const ScalarMap2D& frequency,
                            UncertaintyFormula formula, double epsilon) {
  ScalarMap2D out(frequency.width(), frequency.height());
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    out.set(i, uncertainty_value(frequency[i], formula, epsilon));
  }
  return out;
}

BinaryMask2D uncertainty_mask(const ScalarMap2D& uc_raw, double t_uc) {
  if (!(t_uc >= 0.0 && t_uc <= 1.0)) {
    throw InvalidArgument("t_uc must lie in [0,1]");
  }
  BinaryMask2D out(uc_raw.width(), uc_raw.height());
  if (uc_raw.empty()) return out;
  const double lo = uc_raw.min_value();
  const double hi = uc_raw.max_value();
  if (!(hi > lo)) return out;
  // Compared in normalized form so that rescaling the map leaves the result
  // unchanged at the interval ends.
  const double range = hi - lo;
  for (std::size_t i = 0; i < uc_raw.size(); ++i) {
    out.set(i, (uc_raw[i] - lo) / range > t_uc);
  }
  return out;
}

}  // namespace promptaug
