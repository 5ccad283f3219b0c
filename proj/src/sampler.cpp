#include "promptaug/sampler.h"

#include <algorithm>
#include <cmath>

#include "promptaug/rng.h"

namespace promptaug {

double sampling_radius(const BoundingBox& box, double radius_ratio) {
  if (!(radius_ratio > 0.0)) {
    throw InvalidArgument("radius_ratio must be > 0");
  }
  if (!box.valid()) throw InvalidArgument("invalid box " + to_string(box));
  return std::min(box.width(), box.height()) / radius_ratio;
}

BoundingBox clamp_translate(const BoundingBox& box, int image_width,
                            int image_height) {
  BoundingBox out = box;
  auto shift_axis = [](int& lo, int& hi, int limit) {
    if (lo < 0) {
      hi -= lo;
      lo = 0;
    }
    if (hi > limit) {
      lo -= hi - limit;
      hi = limit;
    }
  };
  shift_axis(out.xmin, out.xmax, image_width);
  shift_axis(out.ymin, out.ymax, image_height);
  return out;
}

std::vector<SampledBox> sample_boxes_detailed(int image_width, int image_height,
                                              const BoundingBox& initial_box,
                                              int n, double radius_ratio,
                                              std::uint64_t seed) {
  require_box_in_image(initial_box, image_width, image_height);
  if (n < 0) throw InvalidArgument("sample count must be >= 0");
  const double radius = sampling_radius(initial_box, radius_ratio);

  Rng rng(seed);
  std::vector<SampledBox> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Rejection from the enclosing square gives a uniform point on the disk.
    double u, v;
    do {
      u = rng.uniform(-1.0, 1.0);
      v = rng.uniform(-1.0, 1.0);
    } while (u * u + v * v > 1.0);
    SampledBox s;
    s.offset_x = radius * u;
    s.offset_y = radius * v;
    const int dx = static_cast<int>(std::lround(s.offset_x));
    const int dy = static_cast<int>(std::lround(s.offset_y));
    BoundingBox moved{initial_box.xmin + dx, initial_box.ymin + dy,
                      initial_box.xmax + dx, initial_box.ymax + dy};
    s.box = clamp_translate(moved, image_width, image_height);
    out.push_back(s);
  }
  return out;
}

std::vector<BoundingBox> sample_boxes(int image_width, int image_height,
                                      const BoundingBox& initial_box, int n,
                                      double radius_ratio, std::uint64_t seed) {
  std::vector<BoundingBox> boxes;
  for (const auto& s : sample_boxes_detailed(image_width, image_height,
                                             initial_box, n, radius_ratio, seed)) {
    boxes.push_back(s.box);
  }
  return boxes;
}

}  // namespace promptaug
