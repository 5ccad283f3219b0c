#ifndef PROMPTAUG_HARNESS_H_
#define PROMPTAUG_HARNESS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "promptaug/core.h"
#include "promptaug/metrics.h"
#include "promptaug/segmenter.h"

namespace promptaug {

// How sloppily a prompt box was drawn: each edge of the tight box is pushed
// outward by a uniform integer number of pixels in the level's range.
enum class CoarsenessLevel { kFine, kMedium, kCoarse };

struct ExpansionRange {
  int min = 0;
  int max = 0;
};

ExpansionRange expansion_range(CoarsenessLevel level);
std::string to_string(CoarsenessLevel level);
CoarsenessLevel parse_coarseness(const std::string& text);

// Tight box of `truth`, each edge expanded independently (left, top, right,
// bottom draw order) and clamped to the image.
BoundingBox box_from_mask(const BinaryMask2D& truth, CoarsenessLevel level,
                          std::uint64_t seed);

enum class Side { kLeft, kRight, kTop, kBottom };

// Bright-but-not-organ appendage attached outside the ellipse on `side`.
// Excluded from the ground truth; a threshold segmenter picks it up.
struct FpLobe {
  Side side = Side::kRight;
  int length = 12;     // how far it protrudes beyond the ellipse, pixels
  int thickness = 12;  // extent across the protrusion axis
  int intensity = 120;
};

// Dim bite inside the ellipse on `side`. Part of the ground truth, but below
// a typical mock threshold so the segmenter misses it.
struct FnNotch {
  Side side = Side::kLeft;
  int depth = 3;
  int span = 10;
  int intensity = 80;
};

struct PhantomSpec {
  int width = 128;
  int height = 128;
  int depth = 1;  // 1 = single image
  double center_x = 64.0;
  double center_y = 64.0;
  double center_z = 0.5;
  double radius_x = 20.0;
  double radius_y = 16.0;
  double radius_z = 1.0;
  int fg_intensity = 190;
  int bg_intensity = 30;
  int noise_amplitude = 0;  // uniform integer noise in [-a, a]
  std::optional<FpLobe> fp_lobe;
  std::optional<FnNotch> fn_notch;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Phantom2D {
  GrayImage2D image;
  BinaryMask2D truth;
};

struct Phantom3D {
  GrayVolume3D volume;
  MaskVolume3D truth;
};

Phantom2D make_phantom_2d(const PhantomSpec& spec);
Phantom3D make_phantom_3d(const PhantomSpec& spec);

// Varied 128x128 ellipse phantoms with an FP lobe and an FN notch each.
std::vector<PhantomSpec> phantom_suite_specs(int count, std::uint64_t seed);

// Mock oracle settings matched to the phantom intensities: captures organ and
// lobe, misses the notch and background.
MockOracleConfig phantom_mock_config();

// Pipeline settings matched to the phantom intensities.
PipelineConfig phantom_pipeline_config();

struct Sample2D {
  std::string id;
  GrayImage2D image;
  BinaryMask2D truth;
  CoarsenessLevel level = CoarsenessLevel::kFine;
};

struct Sample3D {
  std::string id;
  GrayVolume3D volume;
  MaskVolume3D truth;
  CoarsenessLevel level = CoarsenessLevel::kFine;
};

using Sample = std::variant<Sample2D, Sample3D>;

// Methods reported per sample, mirroring single-prompt / averaged / corrected
// rows (and slice propagation for volumes).
inline constexpr const char* kMethodSingle = "single";
inline constexpr const char* kMethodAverage = "average";
inline constexpr const char* kMethodFnpc = "fnpc";
inline constexpr const char* kMethodSs2v = "ss2v";

struct MetricRow {
  std::string sample_id;
  std::string method;
  CoarsenessLevel level = CoarsenessLevel::kFine;
  MetricReport report;
};

struct SummaryRow {
  std::string method;
  CoarsenessLevel level = CoarsenessLevel::kFine;
  int count = 0;  // defined reports contributing
  MetricReport mean;
  MetricReport stddev;  // sample standard deviation (n - 1)
};

struct SampleFailure {
  std::string sample_id;
  std::string message;
};

struct EvaluationResult {
  std::vector<MetricRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<SampleFailure> failures;

  bool ok() const { return failures.empty(); }
  // Summary lookup; nullptr if the combination never occurred.
  const SummaryRow* find(const std::string& method, CoarsenessLevel level) const;
};

// Runs every sample. Backend failures and empty ground truth flag the sample
// and the run continues.
// Sample i draws its prompt box from mix_seed(cfg.seed, 2i) and its box
// sampling from mix_seed(cfg.seed, 2i + 1).
EvaluationResult evaluate(const std::vector<Sample>& dataset,
                          const PipelineConfig& cfg,
                          const SegmenterBackend& backend);

// Columns: sample_id,method,level,dice,assd,hd,hd95,defined
// Per-sample rows in dataset order, then "mean" and "std" rows per
// (method, level). Reals use fixed 6-decimal formatting; undefined values
// print as "nan".
void write_csv(std::ostream& os, const EvaluationResult& result);

inline constexpr const char* kCsvHeader =
    "sample_id,method,level,dice,assd,hd,hd95,defined";

}  // namespace promptaug

#endif  // PROMPTAUG_HARNESS_H_
