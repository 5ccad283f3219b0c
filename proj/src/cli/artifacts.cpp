#include "artifacts.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "promptaug/config.h"
#include "promptaug/metrics.h"

namespace promptaug::cli {

using nlohmann::json;
namespace fs = std::filesystem;

json config_to_json(const PipelineConfig& cfg) {
  return json{{"n_samples", cfg.n_samples},
              {"radius_ratio", cfg.radius_ratio},
              {"t_ave", cfg.t_ave},
              {"t_uc", cfg.t_uc},
              {"t_fn_low", cfg.t_fn_low},
              {"t_fn_high", cfg.t_fn_high},
              {"t_fp_low", cfg.t_fp_low},
              {"t_fp_high", cfg.t_fp_high},
              {"t_b", cfg.t_b},
              {"epsilon", cfg.epsilon},
              {"uc_formula", to_string(cfg.uc_formula)},
              {"seed", cfg.seed},
              {"backend_parallelism", cfg.backend_parallelism}};
}

json box_to_json(const BoundingBox& box) {
  return json::array({box.xmin, box.ymin, box.xmax, box.ymax});
}

GrayImage2D uncertainty_view(const ScalarMap2D& uc_raw) {
  GrayImage2D out(uc_raw.width(), uc_raw.height());
  if (uc_raw.empty()) return out;
  const double lo = uc_raw.min_value();
  const double hi = uc_raw.max_value();
  if (!(hi > lo)) return out;
  for (std::size_t i = 0; i < uc_raw.size(); ++i) {
    const double scaled = 255.0 * (uc_raw[i] - lo) / (hi - lo);
    out.set(i, static_cast<std::uint8_t>(std::lround(scaled)));
  }
  return out;
}

void write_f32(const fs::path& path, const ScalarMap2D& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (double v : map.data()) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    if constexpr (std::endian::native == std::endian::big) {
      bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) |
             ((bits >> 8) & 0xFF00u) | (bits >> 24);
    }
    char bytes[4];
    std::memcpy(bytes, &bits, 4);
    out.write(bytes, 4);
  }
}

RgbImage render_overlay(const GrayImage2D& image, const FnpcResult& result) {
  RgbImage rgb{image.width(), image.height(), {}};
  rgb.data.resize(image.size() * 3);
  auto paint = [&](std::size_t i, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    rgb.data[3 * i] = r;
    rgb.data[3 * i + 1] = g;
    rgb.data[3 * i + 2] = b;
  };
  for (std::size_t i = 0; i < image.size(); ++i) {
    const std::uint8_t v = image[i];
    if (result.uc_mask.test(i)) {
      paint(i, static_cast<std::uint8_t>(v / 2), static_cast<std::uint8_t>(v / 2),
            static_cast<std::uint8_t>(128 + v / 2));
    } else {
      paint(i, v, v, v);
    }
  }
  const BinaryMask2D ave_edge = boundary(result.m_ave);
  const BinaryMask2D fnpc_edge = boundary(result.m_fnpc);
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (ave_edge.test(i)) paint(i, 0, 200, 0);
  }
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (fnpc_edge.test(i)) paint(i, 230, 0, 0);
  }
  const BoundingBox& b = result.boxes_used.front();
  for (int x = b.xmin; x < b.xmax; ++x) {
    paint(image.index(x, b.ymin), 255, 220, 0);
    paint(image.index(x, b.ymax - 1), 255, 220, 0);
  }
  for (int y = b.ymin; y < b.ymax; ++y) {
    paint(image.index(b.xmin, y), 255, 220, 0);
    paint(image.index(b.xmax - 1, y), 255, 220, 0);
  }
  return rgb;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_fnpc_artifacts(const fs::path& dir, const GrayImage2D& image,
                          const FnpcResult& result, const PipelineConfig& cfg,
                          const BackendInfo& backend, const json& extra) {
  fs::create_directories(dir);
  write_png_mask(dir / "mask_ave.png", result.m_ave);
  write_png_mask(dir / "mask_fnpc.png", result.m_fnpc);
  write_png_gray(dir / "uc.png", uncertainty_view(result.uc_raw));
  write_f32(dir / "uc_raw.f32", result.uc_raw);
  write_png_rgb(dir / "overlay.png", render_overlay(image, result));

  json boxes;
  boxes["convention"] = kBoxConvention;
  boxes["boxes"] = json::array();
  for (std::size_t i = 0; i < result.boxes_used.size(); ++i) {
    boxes["boxes"].push_back({{"index", i},
                              {"role", i == 0 ? "initial" : "sampled"},
                              {"box", box_to_json(result.boxes_used[i])}});
  }
  write_json(dir / "boxes.json", boxes);

  json r;
  r["seed"] = cfg.seed;
  r["config"] = config_to_json(cfg);
  r["backend"] = {{"name", backend.name}, {"deterministic", backend.deterministic}};
  r["image"] = {{"width", image.width()}, {"height", image.height()}};
  r["initial_box"] = box_to_json(result.boxes_used.front());
  r["uc_raw"] = {{"file", "uc_raw.f32"},
                 {"width", result.uc_raw.width()},
                 {"height", result.uc_raw.height()},
                 {"dtype", "float32"},
                 {"byte_order", "little"},
                 {"layout", "row-major"}};
  r["pixel_counts"] = {{"m_ave", result.m_ave.count()},
                       {"uc_mask", result.uc_mask.count()},
                       {"m_fn", result.m_fn.count()},
                       {"m_fp", result.m_fp.count()},
                       {"m_fnpc", result.m_fnpc.count()}};
  r["artifacts"] = {"mask_ave.png", "mask_fnpc.png", "uc.png",
                    "uc_raw.f32",   "boxes.json",    "overlay.png"};
  r.update(extra);
  write_json(dir / "result.json", r);
}

}  // namespace promptaug::cli
