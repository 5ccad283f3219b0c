#include "promptaug/morphology.h"

#include <algorithm>

namespace promptaug {

ComponentLabels label_components(const BinaryMask2D& mask) {
  const int w = mask.width();
  const int h = mask.height();
  ComponentLabels out;
  out.labels.assign(mask.size(), 0);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t seed = 0; seed < mask.size(); ++seed) {
    if (!mask.test(seed) || out.labels[seed] != 0) continue;
    ++next;
    std::size_t size = 0;
    out.labels[seed] = next;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++size;
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
        const std::size_t q = mask.index(nx[k], ny[k]);
        if (mask.test(q) && out.labels[q] == 0) {
          out.labels[q] = next;
          stack.push_back(q);
        }
      }
    }
    out.sizes.push_back(size);
  }
  return out;
}

BinaryMask2D largest_component(const BinaryMask2D& mask) {
  const ComponentLabels cc = label_components(mask);
  BinaryMask2D out(mask.width(), mask.height());
  if (cc.sizes.empty()) return out;
  const auto best = std::max_element(cc.sizes.begin(), cc.sizes.end());
  const int keep = static_cast<int>(best - cc.sizes.begin()) + 1;
  for (std::size_t i = 0; i < mask.size(); ++i) out.set(i, cc.labels[i] == keep);
  return out;
}

BinaryMask2D dilate(const BinaryMask2D& mask, int radius) {
  if (radius < 0) throw InvalidArgument("dilation radius must be >= 0");
  if (radius == 0) return mask;
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask2D out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dx * dx + dy * dy > radius * radius) continue;
          if (mask.in_bounds(x + dx, y + dy)) out.set(x + dx, y + dy, true);
        }
      }
    }
  }
  return out;
}

}  // namespace promptaug
