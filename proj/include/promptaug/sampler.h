#ifndef PROMPTAUG_SAMPLER_H_
#define PROMPTAUG_SAMPLER_H_

#include <cstdint>
#include <vector>

#include "promptaug/core.h"

namespace promptaug {

// min(box width, box height) / radius_ratio.
double sampling_radius(const BoundingBox& box, double radius_ratio);

struct SampledBox {
  BoundingBox box;
  // Real-valued center displacement drawn from the disk, before rounding and
  // border clamping.
  double offset_x = 0.0;
  double offset_y = 0.0;
};

// Draws `n` boxes of the initial box's size whose centers are uniform over the
// closed disk of radius sampling_radius(initial_box, radius_ratio) around the
// initial center. Offsets are rounded to whole pixels and the box is then
// translated the minimum amount needed to lie inside the image.
std::vector<SampledBox> sample_boxes_detailed(int image_width, int image_height,
                                              const BoundingBox& initial_box,
                                              int n, double radius_ratio,
                                              std::uint64_t seed);

std::vector<BoundingBox> sample_boxes(int image_width, int image_height,
                                      const BoundingBox& initial_box, int n,
                                      double radius_ratio, std::uint64_t seed);

// Minimal translation of a box so it lies inside the image. The box must not be
// larger than the image.
BoundingBox clamp_translate(const BoundingBox& box, int image_width,
                            int image_height);

}  // namespace promptaug

#endif  // PROMPTAUG_SAMPLER_H_
