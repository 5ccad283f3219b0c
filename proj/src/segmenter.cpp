#include "promptaug/segmenter.h"

#include "promptaug/morphology.h"

namespace promptaug {

std::string to_string(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::kUnavailable:
      return "unavailable";
    case BackendErrorKind::kTimeout:
      return "timeout";
    case BackendErrorKind::kBadStatus:
      return "bad_status";
    case BackendErrorKind::kMalformedResponse:
      return "malformed_response";
    case BackendErrorKind::kDimensionMismatch:
      return "dimension_mismatch";
  }
  return "unknown";
}

void MockOracleConfig::validate() const {
  if (intensity_threshold < 0 || intensity_threshold > 256) {
    throw InvalidArgument("mock intensity_threshold must lie in [0,256]");
  }
  if (dilation_radius < 0) {
    throw InvalidArgument("mock dilation_radius must be >= 0");
  }
}

BinaryMask2D mock_segment(const GrayImage2D& image, const BoundingBox& box,
                          const MockOracleConfig& cfg) {
  cfg.validate();
  require_box_in_image(box, image.width(), image.height());
  BinaryMask2D mask(image.width(), image.height());
  for (int y = box.ymin; y < box.ymax; ++y) {
    for (int x = box.xmin; x < box.xmax; ++x) {
      if (image(x, y) >= cfg.intensity_threshold) mask.set(x, y, true);
    }
  }
  if (cfg.keep_largest_component) mask = largest_component(mask);
  return dilate(mask, cfg.dilation_radius);
}

MockSegmenter::MockSegmenter(MockOracleConfig cfg) : cfg_(cfg) {
  cfg_.validate();
}

BinaryMask2D MockSegmenter::segment(const GrayImage2D& image,
                                    const BoundingBox& box) const {
  return mock_segment(image, box, cfg_);
}

}  // namespace promptaug
