#ifndef PROMPTAUG_SRC_CLI_ARTIFACTS_H_
#define PROMPTAUG_SRC_CLI_ARTIFACTS_H_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "promptaug/core.h"
#include "promptaug/fnpc.h"
#include "promptaug/image_io.h"
#include "promptaug/segmenter.h"

namespace promptaug::cli {

inline constexpr const char* kBoxConvention =
    "half-open [xmin, xmax) x [ymin, ymax), integer pixels, origin top-left";

nlohmann::json config_to_json(const PipelineConfig& cfg);
nlohmann::json box_to_json(const BoundingBox& box);

// 8-bit view of the raw uncertainty, min-max scaled (constant map -> 0).
GrayImage2D uncertainty_view(const ScalarMap2D& uc_raw);

// Row-major little-endian float32.
void write_f32(const std::filesystem::path& path, const ScalarMap2D& map);

// Gray image with the uncertain region tinted blue, the corrected mask
// outlined in red, the majority mask in green and the initial box in yellow.
RgbImage render_overlay(const GrayImage2D& image, const FnpcResult& result);

// Writes mask_ave.png, mask_fnpc.png, uc.png, uc_raw.f32, boxes.json,
// overlay.png and result.json into `dir`. `extra` is merged into result.json.
void write_fnpc_artifacts(const std::filesystem::path& dir, const GrayImage2D& image,
                          const FnpcResult& result, const PipelineConfig& cfg,
                          const BackendInfo& backend, const nlohmann::json& extra);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace promptaug::cli

#endif  // PROMPTAUG_SRC_CLI_ARTIFACTS_H_
