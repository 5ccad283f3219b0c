#include "promptaug/fnpc.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "promptaug/ensemble.h"
#include "promptaug/sampler.h"

namespace promptaug {

namespace {

void require_window(double low, double high, const char* what) {
  if (!(low < high)) {
    throw InvalidArgument(std::string(what) + " window needs low < high");
  }
}

}  // namespace

BinaryMask2D false_negative_mask(const GrayImage2D& image,
                                 const BinaryMask2D& m_ave,
                                 const BinaryMask2D& uc_mask, double t_fn_low,
                                 double t_fn_high) {
  require_same_shape(image, m_ave, "false_negative_mask");
  require_same_shape(image, uc_mask, "false_negative_mask");
  require_window(t_fn_low, t_fn_high, "FN");
  BinaryMask2D out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!uc_mask.test(i) || m_ave.test(i)) continue;
    const double v = image[i];
    out.set(i, v > t_fn_low && v < t_fn_high);
  }
  return out;
}

BinaryMask2D false_positive_mask(const GrayImage2D& image,
                                 const BinaryMask2D& m_ave,
                                 const BinaryMask2D& uc_mask, double t_fp_low,
                                 double t_fp_high) {
  require_same_shape(image, m_ave, "false_positive_mask");
  require_same_shape(image, uc_mask, "false_positive_mask");
  require_window(t_fp_low, t_fp_high, "FP");
  BinaryMask2D out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!uc_mask.test(i) || !m_ave.test(i)) continue;
    const double v = image[i];
    out.set(i, v > t_fp_high || v < t_fp_low);
  }
  return out;
}

BinaryMask2D fnpc_compose(const BinaryMask2D& m_ave, const BinaryMask2D& m_fn,
                          const BinaryMask2D& m_fp) {
  require_same_shape(m_ave, m_fn, "fnpc_compose");
  require_same_shape(m_ave, m_fp, "fnpc_compose");
  if (!is_disjoint(m_fn, m_ave)) {
    throw PreconditionViolation("fnpc_compose: m_fn overlaps m_ave");
  }
  if (!is_subset(m_fp, m_ave)) {
    throw PreconditionViolation("fnpc_compose: m_fp leaves m_ave");
  }
  BinaryMask2D out(m_ave.width(), m_ave.height());
  for (std::size_t i = 0; i < m_ave.size(); ++i) {
    out.set(i, int{m_ave[i]} + int{m_fn[i]} - int{m_fp[i]} == 1);
  }
  return out;
}

std::vector<BinaryMask2D> segment_all(const SegmenterBackend& backend,
                                      const GrayImage2D& image,
                                      std::span<const BoundingBox> boxes,
                                      int parallelism) {
  std::vector<BinaryMask2D> masks(boxes.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  std::optional<std::size_t> error_index;
  std::exception_ptr error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= boxes.size()) return;
      try {
        BinaryMask2D m = backend.segment(image, boxes[i]);
        if (!m.same_shape(image)) {
          throw BackendError(BackendErrorKind::kDimensionMismatch,
                             "backend returned a mask of the wrong size");
        }
        masks[i] = std::move(m);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        // Keep the lowest failing index so the report does not depend on
        // scheduling.
        if (!error_index || i < *error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  const int threads = std::clamp<int>(parallelism, 1,
                                      static_cast<int>(std::max<std::size_t>(boxes.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (error) {
    const int index = static_cast<int>(*error_index);
    try {
      std::rethrow_exception(error);
    } catch (BackendError& e) {
      e.set_box_index(index);
      throw;
    } catch (const std::exception& e) {
      BackendError wrapped(BackendErrorKind::kUnavailable,
                           std::string("backend failed: ") + e.what());
      wrapped.set_box_index(index);
      throw wrapped;
    }
  }
  return masks;
}

FnpcResult run_fnpc_2d(const GrayImage2D& image, const BoundingBox& initial_box,
                       const PipelineConfig& cfg, const SegmenterBackend& backend) {
  cfg.validate();
  require_box_in_image(initial_box, image.width(), image.height());

  FnpcResult r;
  r.boxes_used.push_back(initial_box);
  for (const auto& b : sample_boxes(image.width(), image.height(), initial_box,
                                    cfg.n_samples, cfg.radius_ratio, cfg.seed)) {
    r.boxes_used.push_back(b);
  }

  const std::vector<BinaryMask2D> predictions =
      segment_all(backend, image, r.boxes_used, cfg.backend_parallelism);
  r.initial_prediction = predictions.front();

  r.f_map = frequency_map(predictions);
  r.m_ave = majority_mask(r.f_map, cfg.t_ave);
  r.uc_raw = uncertainty_raw(r.f_map, cfg.uc_formula, cfg.epsilon);
  r.uc_mask = uncertainty_mask(r.uc_raw, cfg.t_uc);
  r.m_fn = false_negative_mask(image, r.m_ave, r.uc_mask, cfg.t_fn_low,
                               cfg.t_fn_high);
  r.m_fp = false_positive_mask(image, r.m_ave, r.uc_mask, cfg.t_fp_low,
                               cfg.t_fp_high);
  r.m_fnpc = fnpc_compose(r.m_ave, r.m_fn, r.m_fp);
  return r;
}

}  // namespace promptaug
