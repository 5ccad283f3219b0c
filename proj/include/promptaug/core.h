#ifndef PROMPTAUG_CORE_H_
#define PROMPTAUG_CORE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace promptaug {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised when an operation's documented precondition does not hold, e.g. the
// FN/FP masks handed to fnpc_compose overlap the wrong way.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// Row-major raster. Shared storage layout for images, masks and scalar maps.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw InvalidArgument("negative raster size");
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0) throw InvalidArgument("negative raster size");
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw DimensionMismatch("raster data length " +
                              std::to_string(data_.size()) + " != " +
                              std::to_string(width) + "x" +
                              std::to_string(height));
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T operator()(int x, int y) const { return data_[index(x, y)]; }
  T operator[](std::size_t i) const { return data_[i]; }

  std::span<const T> data() const { return data_; }

  template <typename U>
  bool same_shape(const Raster<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Raster&) const = default;

 protected:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// 8-bit grayscale intensities, already normalized to [0, 255].
class GrayImage2D : public Raster<std::uint8_t> {
 public:
  using Raster::Raster;

  void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }
  void set(std::size_t i, std::uint8_t v) { data_[i] = v; }
  std::span<std::uint8_t> mutable_data() { return data_; }
};

// Per-pixel {0,1} raster. Construction from raw data rejects any other value.
class BinaryMask2D : public Raster<std::uint8_t> {
 public:
  BinaryMask2D() = default;
  BinaryMask2D(int width, int height, bool fill = false)
      : Raster(width, height, fill ? 1 : 0) {}
  BinaryMask2D(int width, int height, std::vector<std::uint8_t> data);

  bool at(int x, int y) const { return data_[index(x, y)] != 0; }
  bool test(std::size_t i) const { return data_[i] != 0; }
  void set(int x, int y, bool v) { data_[index(x, y)] = v ? 1 : 0; }
  void set(std::size_t i, bool v) { data_[i] = v ? 1 : 0; }

  std::size_t count() const;
  bool none() const { return count() == 0; }
};

class ScalarMap2D : public Raster<double> {
 public:
  using Raster::Raster;

  void set(int x, int y, double v) { data_[index(x, y)] = v; }
  void set(std::size_t i, double v) { data_[i] = v; }
  std::span<double> mutable_data() { return data_; }

  double min_value() const;
  double max_value() const;
};

// Half-open pixel rectangle [xmin, xmax) x [ymin, ymax), origin top-left.
struct BoundingBox {
  int xmin = 0;
  int ymin = 0;
  int xmax = 0;
  int ymax = 0;

  int width() const { return xmax - xmin; }
  int height() const { return ymax - ymin; }
  long long area() const {
    return static_cast<long long>(width()) * static_cast<long long>(height());
  }
  double center_x() const { return 0.5 * (xmin + xmax); }
  double center_y() const { return 0.5 * (ymin + ymax); }

  bool valid() const { return xmin < xmax && ymin < ymax; }
  bool fits_within(int image_width, int image_height) const {
    return valid() && xmin >= 0 && ymin >= 0 && xmax <= image_width &&
           ymax <= image_height;
  }
  bool contains(int x, int y) const {
    return x >= xmin && x < xmax && y >= ymin && y < ymax;
  }
  bool contains(const BoundingBox& other) const {
    return other.xmin >= xmin && other.ymin >= ymin && other.xmax <= xmax &&
           other.ymax <= ymax;
  }

  bool operator==(const BoundingBox&) const = default;
};

std::string to_string(const BoundingBox& box);

// Throws InvalidArgument unless `box` is non-empty and lies inside the image.
void require_box_in_image(const BoundingBox& box, int width, int height);

enum class UncertaintyFormula { kVariance, kEntropy };

std::string to_string(UncertaintyFormula formula);
UncertaintyFormula parse_uncertainty_formula(const std::string& text);

// Every threshold and count used by the pipeline. Defaults are the kidney
// fine-box settings.
struct PipelineConfig {
  int n_samples = 30;
  double radius_ratio = 8.0;
  double t_ave = 0.5;
  double t_uc = 0.9;
  double t_fn_low = 0.0;
  double t_fn_high = 20.0;
  double t_fp_low = 0.0;
  double t_fp_high = 20.0;
  int t_b = 2;
  double epsilon = 1e-7;
  UncertaintyFormula uc_formula = UncertaintyFormula::kVariance;
  std::uint64_t seed = 0;
  int backend_parallelism = 4;

  // Throws InvalidArgument describing the first violated constraint.
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

// Hyperparameters reported for the two ultrasound tasks. `t_uc` for kidney
// depends on box coarseness: 0.9 for fine, 0.1 otherwise.
PipelineConfig kidney_preset(bool fine_box);
PipelineConfig placenta_preset();

template <typename Slice>
class Volume3D {
 public:
  Volume3D() = default;
  explicit Volume3D(std::vector<Slice> slices) : slices_(std::move(slices)) {
    if (slices_.empty()) throw InvalidArgument("volume needs at least one slice");
    for (const auto& s : slices_) {
      if (!s.same_shape(slices_.front())) {
        throw DimensionMismatch("volume slices differ in size");
      }
    }
  }

  int slice_count() const { return static_cast<int>(slices_.size()); }
  int width() const { return slices_.empty() ? 0 : slices_.front().width(); }
  int height() const { return slices_.empty() ? 0 : slices_.front().height(); }

  const Slice& slice(int k) const { return slices_.at(static_cast<std::size_t>(k)); }
  Slice& slice(int k) { return slices_.at(static_cast<std::size_t>(k)); }
  const std::vector<Slice>& slices() const { return slices_; }

  bool operator==(const Volume3D&) const = default;

 private:
  std::vector<Slice> slices_;
};

using GrayVolume3D = Volume3D<GrayImage2D>;
using MaskVolume3D = Volume3D<BinaryMask2D>;

// Mask algebra. Binary operations throw DimensionMismatch on shape mismatch.
BinaryMask2D mask_and(const BinaryMask2D& a, const BinaryMask2D& b);
BinaryMask2D mask_or(const BinaryMask2D& a, const BinaryMask2D& b);
BinaryMask2D mask_not(const BinaryMask2D& a);
// a AND NOT b
BinaryMask2D mask_diff(const BinaryMask2D& a, const BinaryMask2D& b);

bool is_subset(const BinaryMask2D& a, const BinaryMask2D& b);
bool is_disjoint(const BinaryMask2D& a, const BinaryMask2D& b);

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(std::string(what) + ": " +
                            std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " +
                            std::to_string(b.width()) + "x" +
                            std::to_string(b.height()));
  }
}

}  // namespace promptaug

#endif  // PROMPTAUG_CORE_H_
