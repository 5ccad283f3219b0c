#ifndef PROMPTAUG_IMAGE_IO_H_
#define PROMPTAUG_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "promptaug/core.h"

namespace promptaug {

class IoError : public Error {
 public:
  using Error::Error;
};

// RGB raster used only for overlay output.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major RGB triples
};

// PNG decoding converts any color type / bit depth to 8-bit gray.
GrayImage2D decode_png_gray(std::string_view bytes);
std::string encode_png_gray(const GrayImage2D& image);

GrayImage2D read_png_gray(const std::filesystem::path& path);
void write_png_gray(const std::filesystem::path& path, const GrayImage2D& image);
void write_png_rgb(const std::filesystem::path& path, const RgbImage& image);

// Masks travel as 0/255 grayscale. Decoding maps any nonzero value to 1.
GrayImage2D mask_to_gray(const BinaryMask2D& mask);
BinaryMask2D gray_to_mask(const GrayImage2D& image);
void write_png_mask(const std::filesystem::path& path, const BinaryMask2D& mask);
BinaryMask2D read_png_mask(const std::filesystem::path& path);

std::string base64_encode(std::string_view bytes);
// Throws IoError on characters outside the standard alphabet or bad padding.
std::string base64_decode(std::string_view text);

}  // namespace promptaug

#endif  // PROMPTAUG_IMAGE_IO_H_
