#ifndef PROMPTAUG_VOLUME_IO_H_
#define PROMPTAUG_VOLUME_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "promptaug/core.h"

namespace promptaug {

// Raised when a volume manifest disagrees with the files it lists.
class ManifestError : public Error {
 public:
  using Error::Error;
};

// <dir>/manifest.json:
//   {"width": W, "height": H, "slice_count": N, "slices": ["s000.png", ...]}
// Slice paths are relative to <dir> and listed in slice order.
struct VolumeManifest {
  int width = 0;
  int height = 0;
  int slice_count = 0;
  std::vector<std::string> slices;
};

inline constexpr const char* kManifestName = "manifest.json";

VolumeManifest read_volume_manifest(const std::filesystem::path& dir);

// Loads every slice, checking existence and dimensions against the manifest
// before returning. Throws ManifestError on any inconsistency.
GrayVolume3D load_gray_volume(const std::filesystem::path& dir);
MaskVolume3D load_mask_volume(const std::filesystem::path& dir);

void write_gray_volume(const std::filesystem::path& dir, const GrayVolume3D& volume);
void write_mask_volume(const std::filesystem::path& dir, const MaskVolume3D& volume);

}  // namespace promptaug

#endif  // PROMPTAUG_VOLUME_IO_H_
