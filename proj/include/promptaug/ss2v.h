#ifndef PROMPTAUG_SS2V_H_
#define PROMPTAUG_SS2V_H_

#include <cstdint>
#include <map>
#include <string>

#include "promptaug/core.h"
#include "promptaug/fnpc.h"
#include "promptaug/segmenter.h"

namespace promptaug {

class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

class DegenerateBoxError : public Error {
 public:
  using Error::Error;
};

// Smallest half-open box containing every foreground pixel. Throws
// EmptyMaskError for an empty mask.
BoundingBox tight_box(const BinaryMask2D& mask);

// Next-slice box: each coordinate takes the candidate's value when it moved by
// at most t_b from the previous box, and keeps the previous value otherwise.
// Throws DegenerateBoxError if the mixed box is empty.
BoundingBox propagate_box(const BoundingBox& prev_box,
                          const BoundingBox& candidate_box, int t_b);

enum class Termination { kExhausted, kEmptyMask, kDegenerateBox };
std::string to_string(Termination reason);

struct DirectionReport {
  Termination reason = Termination::kExhausted;
  // Last slice that received a nonempty mask in this direction (the start
  // slice if propagation never advanced).
  int last_slice = 0;
};

enum class BoxProvenance { kManual, kSynthetic };

struct Ss2vResult {
  MaskVolume3D mask_volume;
  int start_slice = 0;
  // Present for the start slice and every slice with a nonempty mask.
  std::map<int, BoundingBox> boxes_per_slice;
  std::map<int, FnpcResult> per_slice_results;
  DirectionReport up;    // increasing slice index
  DirectionReport down;  // decreasing slice index

  BoxProvenance provenance(int slice) const {
    return slice == start_slice ? BoxProvenance::kManual : BoxProvenance::kSynthetic;
  }
};

// Seed used for a slice's box sampling. The start slice keeps the configured
// seed so a one-slice volume reproduces run_fnpc_2d exactly.
std::uint64_t slice_seed(std::uint64_t seed, int slice, int start_slice);

// Tight candidate boxes smaller than this many pixels end propagation.
inline constexpr long long kMinCandidateArea = 4;

Ss2vResult run_ss2v(const GrayVolume3D& volume, int start_slice,
                    const BoundingBox& initial_box, const PipelineConfig& cfg,
                    const SegmenterBackend& backend);

inline int central_slice(const GrayVolume3D& volume) {
  return volume.slice_count() / 2;
}

}  // namespace promptaug

#endif  // PROMPTAUG_SS2V_H_
