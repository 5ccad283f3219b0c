#ifndef PROMPTAUG_SEGMENTER_H_
#define PROMPTAUG_SEGMENTER_H_

#include <string>

#include "promptaug/core.h"

namespace promptaug {

enum class BackendErrorKind {
  kUnavailable,        // connection refused / host unreachable
  kTimeout,
  kBadStatus,          // non-2xx reply
  kMalformedResponse,  // undecodable body
  kDimensionMismatch,  // mask size differs from the image
};

std::string to_string(BackendErrorKind kind);

class BackendError : public Error {
 public:
  BackendError(BackendErrorKind kind, const std::string& message,
               int http_status = 0)
      : Error(message), kind_(kind), http_status_(http_status) {}

  BackendErrorKind kind() const { return kind_; }
  int http_status() const { return http_status_; }

  // Index of the failing box within the ensemble, or -1 when unknown.
  int box_index() const { return box_index_; }
  void set_box_index(int index) { box_index_ = index; }

  // Slice index for volume runs, or -1.
  int slice_index() const { return slice_index_; }
  void set_slice_index(int index) { slice_index_ = index; }

 private:
  BackendErrorKind kind_;
  int http_status_ = 0;
  int box_index_ = -1;
  int slice_index_ = -1;
};

struct BackendInfo {
  std::string name;
  bool deterministic = false;
};

// A promptable segmenter: (image, box) -> full-image binary mask. Foreground
// may extend outside the box. Implementations must tolerate concurrent calls.
class SegmenterBackend {
 public:
  virtual ~SegmenterBackend() = default;

  virtual BackendInfo info() const = 0;

  // Returns a mask with the image's dimensions. Throws BackendError.
  virtual BinaryMask2D segment(const GrayImage2D& image,
                               const BoundingBox& box) const = 0;
};

struct MockOracleConfig {
  // Pixels with intensity >= threshold are foreground; 256 selects nothing.
  int intensity_threshold = 128;
  bool keep_largest_component = false;
  int dilation_radius = 0;

  void validate() const;
};

// Deterministic stand-in for a promptable model: thresholds the pixels inside
// the box, optionally keeps the largest 4-connected component, then dilates.
// Dilation may leave the box.
BinaryMask2D mock_segment(const GrayImage2D& image, const BoundingBox& box,
                          const MockOracleConfig& cfg);

class MockSegmenter final : public SegmenterBackend {
 public:
  explicit MockSegmenter(MockOracleConfig cfg);

  BackendInfo info() const override { return {"mock", true}; }
  BinaryMask2D segment(const GrayImage2D& image,
                       const BoundingBox& box) const override;

  const MockOracleConfig& config() const { return cfg_; }

 private:
  MockOracleConfig cfg_;
};

}  // namespace promptaug

#endif  // PROMPTAUG_SEGMENTER_H_
