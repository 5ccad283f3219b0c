#include "promptaug/ss2v.h"

#include <cstdlib>
#include <future>
#include <vector>

#include "promptaug/rng.h"

namespace promptaug {

BoundingBox tight_box(const BinaryMask2D& mask) {
  BoundingBox box{mask.width(), mask.height(), -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      box.xmin = std::min(box.xmin, x);
      box.ymin = std::min(box.ymin, y);
      box.xmax = std::max(box.xmax, x + 1);
      box.ymax = std::max(box.ymax, y + 1);
    }
  }
  if (box.xmax < 0) throw EmptyMaskError("tight_box of an empty mask");
  return box;
}

BoundingBox propagate_box(const BoundingBox& prev_box,
                          const BoundingBox& candidate_box, int t_b) {
  if (!prev_box.valid() || !candidate_box.valid()) {
    throw InvalidArgument("propagate_box needs two valid boxes");
  }
  if (t_b < 0) throw InvalidArgument("t_b must be >= 0");
  auto pick = [t_b](int prev, int cand) {
    return std::abs(cand - prev) <= t_b ? cand : prev;
  };
  BoundingBox out{pick(prev_box.xmin, candidate_box.xmin),
                  pick(prev_box.ymin, candidate_box.ymin),
                  pick(prev_box.xmax, candidate_box.xmax),
                  pick(prev_box.ymax, candidate_box.ymax)};
  if (!out.valid()) {
    throw DegenerateBoxError("propagated box " + to_string(out) + " is empty");
  }
  return out;
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::kExhausted:
      return "exhausted";
    case Termination::kEmptyMask:
      return "empty_mask";
    case Termination::kDegenerateBox:
      return "degenerate_box";
  }
  return "unknown";
}

std::uint64_t slice_seed(std::uint64_t seed, int slice, int start_slice) {
  if (slice == start_slice) return seed;
  return mix_seed(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(slice)));
}

namespace {

FnpcResult segment_slice(const GrayVolume3D& volume, int slice,
                         const BoundingBox& box, const PipelineConfig& cfg,
                         int start_slice, const SegmenterBackend& backend) {
  PipelineConfig slice_cfg = cfg;
  slice_cfg.seed = slice_seed(cfg.seed, slice, start_slice);
  try {
    return run_fnpc_2d(volume.slice(slice), box, slice_cfg, backend);
  } catch (BackendError& e) {
    e.set_slice_index(slice);
    throw;
  }
}

struct Step {
  int slice;
  BoundingBox box;
  FnpcResult result;
};

// Walks from the start slice in one direction, returning the slices that got
// a nonempty mask (not including the start slice).
std::vector<Step> propagate(const GrayVolume3D& volume, int start_slice,
                            const BoundingBox& start_box,
                            const FnpcResult& start_result, int direction,
                            const PipelineConfig& cfg,
                            const SegmenterBackend& backend,
                            DirectionReport& report) {
  std::vector<Step> steps;
  int slice = start_slice;
  BoundingBox box = start_box;
  const BinaryMask2D* mask = &start_result.m_fnpc;
  report.last_slice = start_slice;

  while (true) {
    if (mask->none()) {
      report.reason = Termination::kEmptyMask;
      return steps;
    }
    const int next = slice + direction;
    if (next < 0 || next >= volume.slice_count()) {
      report.reason = Termination::kExhausted;
      return steps;
    }
    const BoundingBox candidate = tight_box(*mask);
    if (candidate.area() < kMinCandidateArea) {
      report.reason = Termination::kDegenerateBox;
      return steps;
    }
    BoundingBox next_box;
    try {
      next_box = propagate_box(box, candidate, cfg.t_b);
    } catch (const DegenerateBoxError&) {
      report.reason = Termination::kDegenerateBox;
      return steps;
    }
    FnpcResult result = segment_slice(volume, next, next_box, cfg, start_slice, backend);
    if (result.m_fnpc.none()) {
      report.reason = Termination::kEmptyMask;
      return steps;
    }
    steps.push_back({next, next_box, std::move(result)});
    slice = next;
    box = next_box;
    mask = &steps.back().result.m_fnpc;
    report.last_slice = slice;
  }
}

}  // namespace

Ss2vResult run_ss2v(const GrayVolume3D& volume, int start_slice,
                    const BoundingBox& initial_box, const PipelineConfig& cfg,
                    const SegmenterBackend& backend) {
  if (start_slice < 0 || start_slice >= volume.slice_count()) {
    throw InvalidArgument("start slice " + std::to_string(start_slice) +
                          " outside volume of " +
                          std::to_string(volume.slice_count()) + " slices");
  }
  require_box_in_image(initial_box, volume.width(), volume.height());
  cfg.validate();

  Ss2vResult out;
  out.start_slice = start_slice;
  FnpcResult start =
      segment_slice(volume, start_slice, initial_box, cfg, start_slice, backend);

  // The two directions only read the start result, so they can run side by side.
  auto upward = std::async(std::launch::async, [&] {
    return propagate(volume, start_slice, initial_box, start, +1, cfg, backend,
                     out.up);
  });
  std::vector<Step> down_steps = propagate(volume, start_slice, initial_box, start,
                                           -1, cfg, backend, out.down);
  std::vector<Step> up_steps = upward.get();

  std::vector<BinaryMask2D> masks;
  masks.reserve(static_cast<std::size_t>(volume.slice_count()));
  for (int k = 0; k < volume.slice_count(); ++k) {
    masks.emplace_back(volume.width(), volume.height());
  }
  masks[static_cast<std::size_t>(start_slice)] = start.m_fnpc;
  out.boxes_per_slice[start_slice] = initial_box;
  for (auto* steps : {&up_steps, &down_steps}) {
    for (Step& s : *steps) {
      masks[static_cast<std::size_t>(s.slice)] = s.result.m_fnpc;
      out.boxes_per_slice[s.slice] = s.box;
      out.per_slice_results.emplace(s.slice, std::move(s.result));
    }
  }
  out.per_slice_results.emplace(start_slice, std::move(start));
  out.mask_volume = MaskVolume3D(std::move(masks));
  return out;
}

}  // namespace promptaug
