#include "promptaug/image_io.h"

#include <openssl/evp.h>
#include <png.h>

#include <cstring>
#include <memory>

namespace promptaug {

namespace {

struct PngImageGuard {
  png_image* image;
  ~PngImageGuard() { png_image_free(image); }
};

GrayImage2D finish_gray_read(png_image& img) {
  img.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, pixels.data(), 0, nullptr)) {
    throw IoError(std::string("png decode failed: ") + img.message);
  }
  return GrayImage2D(static_cast<int>(img.width), static_cast<int>(img.height),
                     std::move(pixels));
}

png_image blank_png() {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  return img;
}

}  // namespace

GrayImage2D decode_png_gray(std::string_view bytes) {
  png_image img = blank_png();
  PngImageGuard guard{&img};
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw IoError(std::string("png decode failed: ") + img.message);
  }
  return finish_gray_read(img);
}

GrayImage2D read_png_gray(const std::filesystem::path& path) {
  png_image img = blank_png();
  PngImageGuard guard{&img};
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw IoError("cannot read " + path.string() + ": " + img.message);
  }
  return finish_gray_read(img);
}

std::string encode_png_gray(const GrayImage2D& image) {
  png_image img = blank_png();
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(img, size, 0, image.data().data(), 0,
                                       nullptr)) {
    throw IoError(std::string("png encode failed: ") + img.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&img, out.data(), &size, 0,
                                 image.data().data(), 0, nullptr)) {
    throw IoError(std::string("png encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

void write_png_gray(const std::filesystem::path& path, const GrayImage2D& image) {
  png_image img = blank_png();
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data().data(), 0,
                               nullptr)) {
    throw IoError("cannot write " + path.string() + ": " + img.message);
  }
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image) {
  if (image.data.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
    throw DimensionMismatch("rgb buffer size mismatch");
  }
  png_image img = blank_png();
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data.data(), 0,
                               nullptr)) {
    throw IoError("cannot write " + path.string() + ": " + img.message);
  }
}

GrayImage2D mask_to_gray(const BinaryMask2D& mask) {
  GrayImage2D out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out.set(i, mask.test(i) ? 255 : 0);
  return out;
}

BinaryMask2D gray_to_mask(const GrayImage2D& image) {
  BinaryMask2D out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) out.set(i, image[i] != 0);
  return out;
}

void write_png_mask(const std::filesystem::path& path, const BinaryMask2D& mask) {
  write_png_gray(path, mask_to_gray(mask));
}

BinaryMask2D read_png_mask(const std::filesystem::path& path) {
  return gray_to_mask(read_png_gray(path));
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw IoError("base64 length not a multiple of 4");
  if (text.empty()) return {};
  std::string out(3 * text.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw IoError("invalid base64");
  // EVP_DecodeBlock counts padding as zero bytes.
  std::size_t padding = 0;
  if (text.back() == '=') ++padding;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

}  // namespace promptaug
