#include "promptaug/core.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace promptaug {

BinaryMask2D::BinaryMask2D(int width, int height, std::vector<std::uint8_t> data)
    : Raster(width, height, std::move(data)) {
  for (std::uint8_t v : data_) {
    if (v > 1) throw InvalidArgument("mask value outside {0,1}");
  }
}

std::size_t BinaryMask2D::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1));
}

double ScalarMap2D::min_value() const {
  if (data_.empty()) throw InvalidArgument("min of empty map");
  return *std::min_element(data_.begin(), data_.end());
}

double ScalarMap2D::max_value() const {
  if (data_.empty()) throw InvalidArgument("max of empty map");
  return *std::max_element(data_.begin(), data_.end());
}

std::string to_string(const BoundingBox& box) {
  std::ostringstream os;
  os << "[" << box.xmin << "," << box.ymin << "," << box.xmax << ","
     << box.ymax << ")";
  return os.str();
}

void require_box_in_image(const BoundingBox& box, int width, int height) {
  if (!box.fits_within(width, height)) {
    throw InvalidArgument("box " + to_string(box) + " not inside " +
                          std::to_string(width) + "x" + std::to_string(height) +
                          " image");
  }
}

std::string to_string(UncertaintyFormula formula) {
  return formula == UncertaintyFormula::kVariance ? "variance" : "entropy";
}

UncertaintyFormula parse_uncertainty_formula(const std::string& text) {
  if (text == "variance") return UncertaintyFormula::kVariance;
  if (text == "entropy") return UncertaintyFormula::kEntropy;
  throw InvalidArgument("unknown uncertainty formula '" + text + "'");
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument("config: " + message);
}

bool in_intensity_range(double v) { return v >= 0.0 && v <= 255.0; }

}  // namespace

void PipelineConfig::validate() const {
  require(n_samples >= 0, "n_samples must be >= 0");
  require(std::isfinite(radius_ratio) && radius_ratio > 0.0,
          "radius_ratio must be > 0");
  require(t_ave >= 0.0 && t_ave < 1.0, "t_ave must lie in [0,1)");
  require(t_uc >= 0.0 && t_uc <= 1.0, "t_uc must lie in [0,1]");
  require(in_intensity_range(t_fn_low) && in_intensity_range(t_fn_high),
          "FN window must lie in [0,255]");
  require(in_intensity_range(t_fp_low) && in_intensity_range(t_fp_high),
          "FP window must lie in [0,255]");
  require(t_fn_low < t_fn_high, "t_fn_low must be < t_fn_high");
  require(t_fp_low < t_fp_high, "t_fp_low must be < t_fp_high");
  require(t_b >= 0, "t_b must be >= 0");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be > 0");
  require(backend_parallelism >= 1, "backend_parallelism must be >= 1");
}

PipelineConfig kidney_preset(bool fine_box) {
  PipelineConfig cfg;
  cfg.n_samples = 30;
  cfg.radius_ratio = 8.0;
  cfg.t_uc = fine_box ? 0.9 : 0.1;
  cfg.t_fn_low = 0.0;
  cfg.t_fp_low = 0.0;
  cfg.t_fn_high = 20.0;
  cfg.t_fp_high = 20.0;
  return cfg;
}

PipelineConfig placenta_preset() {
  PipelineConfig cfg;
  cfg.n_samples = 30;
  cfg.radius_ratio = 4.0;
  cfg.t_uc = 0.2;
  cfg.t_fn_low = 70.0;
  cfg.t_fp_low = 70.0;
  cfg.t_fn_high = 200.0;
  cfg.t_fp_high = 200.0;
  cfg.t_b = 2;
  return cfg;
}

namespace {

template <typename Op>
BinaryMask2D combine(const BinaryMask2D& a, const BinaryMask2D& b,
                     const char* what, Op op) {
  require_same_shape(a, b, what);
  BinaryMask2D out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, op(a.test(i), b.test(i)));
  return out;
}

}  // namespace

BinaryMask2D mask_and(const BinaryMask2D& a, const BinaryMask2D& b) {
  return combine(a, b, "mask_and", [](bool x, bool y) { return x && y; });
}

BinaryMask2D mask_or(const BinaryMask2D& a, const BinaryMask2D& b) {
  return combine(a, b, "mask_or", [](bool x, bool y) { return x || y; });
}

BinaryMask2D mask_diff(const BinaryMask2D& a, const BinaryMask2D& b) {
  return combine(a, b, "mask_diff", [](bool x, bool y) { return x && !y; });
}

BinaryMask2D mask_not(const BinaryMask2D& a) {
  BinaryMask2D out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, !a.test(i));
  return out;
}

bool is_subset(const BinaryMask2D& a, const BinaryMask2D& b) {
  require_same_shape(a, b, "is_subset");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.test(i) && !b.test(i)) return false;
  }
  return true;
}

bool is_disjoint(const BinaryMask2D& a, const BinaryMask2D& b) {
  require_same_shape(a, b, "is_disjoint");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.test(i) && b.test(i)) return false;
  }
  return true;
}

}  // namespace promptaug
