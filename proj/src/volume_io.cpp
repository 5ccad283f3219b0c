#include "promptaug/volume_io.h"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "promptaug/image_io.h"

namespace promptaug {

using nlohmann::json;
namespace fs = std::filesystem;

VolumeManifest read_volume_manifest(const fs::path& dir) {
  const fs::path path = dir / kManifestName;
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ManifestError(path.string() + " is not a JSON object");
  }
  VolumeManifest m;
  try {
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.slice_count = j.at("slice_count").get<int>();
    m.slices = j.at("slices").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
  if (m.width <= 0 || m.height <= 0 || m.slice_count <= 0) {
    throw ManifestError(path.string() + ": dimensions must be positive");
  }
  if (static_cast<int>(m.slices.size()) != m.slice_count) {
    throw ManifestError(path.string() + ": slice_count does not match slices");
  }
  for (const auto& s : m.slices) {
    if (!fs::is_regular_file(dir / s)) {
      throw ManifestError("missing slice file " + (dir / s).string());
    }
  }
  return m;
}

namespace {

std::vector<GrayImage2D> load_slices(const fs::path& dir) {
  const VolumeManifest m = read_volume_manifest(dir);
  std::vector<GrayImage2D> slices;
  for (const auto& s : m.slices) {
    GrayImage2D img;
    try {
      img = read_png_gray(dir / s);
    } catch (const IoError& e) {
      throw ManifestError(e.what());
    }
    if (img.width() != m.width || img.height() != m.height) {
      throw ManifestError("slice " + s + " is " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()) + ", manifest says " +
                          std::to_string(m.width) + "x" + std::to_string(m.height));
    }
    slices.push_back(std::move(img));
  }
  return slices;
}

template <typename Slice, typename Write>
void write_slices(const fs::path& dir, const Volume3D<Slice>& volume, Write write) {
  fs::create_directories(dir);
  json j;
  j["width"] = volume.width();
  j["height"] = volume.height();
  j["slice_count"] = volume.slice_count();
  j["slices"] = json::array();
  for (int k = 0; k < volume.slice_count(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "slice_%03d.png", k);
    write(dir / name, volume.slice(k));
    j["slices"].push_back(name);
  }
  std::ofstream(dir / kManifestName) << j.dump(2) << '\n';
}

}  // namespace

GrayVolume3D load_gray_volume(const fs::path& dir) {
  return GrayVolume3D(load_slices(dir));
}

MaskVolume3D load_mask_volume(const fs::path& dir) {
  std::vector<BinaryMask2D> masks;
  for (const auto& s : load_slices(dir)) masks.push_back(gray_to_mask(s));
  return MaskVolume3D(std::move(masks));
}

void write_gray_volume(const fs::path& dir, const GrayVolume3D& volume) {
  write_slices(dir, volume, [](const fs::path& p, const GrayImage2D& s) {
    write_png_gray(p, s);
  });
}

void write_mask_volume(const fs::path& dir, const MaskVolume3D& volume) {
  write_slices(dir, volume, [](const fs::path& p, const BinaryMask2D& s) {
    write_png_mask(p, s);
  });
}

}  // namespace promptaug
