#ifndef PROMPTAUG_FNPC_H_
#define PROMPTAUG_FNPC_H_

#include <span>
#include <vector>

#include "promptaug/core.h"
#include "promptaug/segmenter.h"

namespace promptaug {

struct FnpcResult {
  BinaryMask2D initial_prediction;  // backend output for the initial box
  BinaryMask2D m_ave;
  BinaryMask2D uc_mask;
  BinaryMask2D m_fn;
  BinaryMask2D m_fp;
  BinaryMask2D m_fnpc;
  ScalarMap2D f_map;
  ScalarMap2D uc_raw;
  std::vector<BoundingBox> boxes_used;  // [0] is the initial box

  bool operator==(const FnpcResult&) const = default;
};

// Uncertain pixels outside m_ave whose intensity lies strictly inside
// (t_fn_low, t_fn_high).
BinaryMask2D false_negative_mask(const GrayImage2D& image,
                                 const BinaryMask2D& m_ave,
                                 const BinaryMask2D& uc_mask, double t_fn_low,
                                 double t_fn_high);

// Uncertain pixels inside m_ave whose intensity is strictly above t_fp_high or
// strictly below t_fp_low.
BinaryMask2D false_positive_mask(const GrayImage2D& image,
                                 const BinaryMask2D& m_ave,
                                 const BinaryMask2D& uc_mask, double t_fp_low,
                                 double t_fp_high);

// m_ave + m_fn - m_fp. Requires m_fn disjoint from m_ave and m_fp inside m_ave,
// otherwise the sum leaves {0,1}; throws PreconditionViolation.
BinaryMask2D fnpc_compose(const BinaryMask2D& m_ave, const BinaryMask2D& m_fn,
                          const BinaryMask2D& m_fp);

// Calls the backend once per box, up to `parallelism` calls in flight. Results
// are ordered like `boxes`. The first failure aborts the batch and is rethrown
// as BackendError carrying the box index.
std::vector<BinaryMask2D> segment_all(const SegmenterBackend& backend,
                                      const GrayImage2D& image,
                                      std::span<const BoundingBox> boxes,
                                      int parallelism);

// Full 2D pipeline: sample N boxes around `initial_box`, segment all N+1,
// aggregate, estimate uncertainty, then correct FNs and FPs.
FnpcResult run_fnpc_2d(const GrayImage2D& image, const BoundingBox& initial_box,
                       const PipelineConfig& cfg, const SegmenterBackend& backend);

}  // namespace promptaug

#endif  // PROMPTAUG_FNPC_H_
