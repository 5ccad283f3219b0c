#ifndef PROMPTAUG_MORPHOLOGY_H_
#define PROMPTAUG_MORPHOLOGY_H_

#include <cstddef>
#include <vector>

#include "promptaug/core.h"

namespace promptaug {

// Labels 4-connected foreground components. Labels start at 1 in raster scan
// order of each component's first pixel; background is 0.
struct ComponentLabels {
  std::vector<int> labels;
  std::vector<std::size_t> sizes;  // sizes[k] is the pixel count of label k+1
};
ComponentLabels label_components(const BinaryMask2D& mask);

// Keeps only the largest 4-connected component. Ties go to the component that
// appears first in raster order.
BinaryMask2D largest_component(const BinaryMask2D& mask);

// Dilation with a Euclidean disk of the given radius (dx*dx + dy*dy <= r*r).
BinaryMask2D dilate(const BinaryMask2D& mask, int radius);

}  // namespace promptaug

#endif  // PROMPTAUG_MORPHOLOGY_H_
