#ifndef PROMPTAUG_METRICS_H_
#define PROMPTAUG_METRICS_H_

#include "promptaug/core.h"

namespace promptaug {

// Distances are in pixel units with isotropic spacing.
struct MetricReport {
  double dice = 0.0;
  double assd = 0.0;
  double hd = 0.0;
  double hd95 = 0.0;
  // False when either mask is empty; surface distances are then meaningless
  // and reported as NaN. Dice is always set.
  bool defined = false;
};

struct HausdorffResult {
  double hd = 0.0;
  double hd95 = 0.0;
};

// 2|A n B| / (|A| + |B|); 1 when both are empty.
double dice(const BinaryMask2D& a, const BinaryMask2D& b);
double dice(const MaskVolume3D& a, const MaskVolume3D& b);

// Foreground pixels with at least one background 4-neighbor. Pixels on the
// image border count as having a background neighbor.
BinaryMask2D boundary(const BinaryMask2D& mask);
// 6-neighbor version for volumes (faces of the volume count as background).
MaskVolume3D boundary(const MaskVolume3D& mask);

// Average symmetric surface distance between the two boundaries. Throws
// InvalidArgument if either mask is empty.
double assd(const BinaryMask2D& a, const BinaryMask2D& b);
HausdorffResult hausdorff(const BinaryMask2D& a, const BinaryMask2D& b);

MetricReport evaluate_masks(const BinaryMask2D& prediction,
                            const BinaryMask2D& truth);
MetricReport evaluate_masks(const MaskVolume3D& prediction,
                            const MaskVolume3D& truth);

}  // namespace promptaug

#endif  // PROMPTAUG_METRICS_H_
