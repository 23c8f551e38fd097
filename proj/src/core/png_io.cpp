#include "sod/core/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

namespace sod {
namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

void write_png(const std::string& path, int h, int w, int channels,
               const uint8_t* data) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot open '" + path + "' for writing");

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png write failed for '" + path + "'");
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h),
               8, channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(static_cast<size_t>(h));
  for (int y = 0; y < h; ++y)
    rows[y] = const_cast<png_bytep>(data + static_cast<size_t>(y) * w * channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Decodes to 8-bit, returns channel count actually produced (1 or 3).
int read_png(const std::string& path, int& h, int& w, std::vector<uint8_t>& out,
             bool force_rgb) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open '" + path + "' for reading");

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("'" + path + "' is not a readable PNG");
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (force_rgb && (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA))
    png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  h = static_cast<int>(png_get_image_height(png, info));
  w = static_cast<int>(png_get_image_width(png, info));
  const int channels = static_cast<int>(png_get_channels(png, info));
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("'" + path + "': unsupported channel layout");
  }

  out.resize(static_cast<size_t>(h) * w * channels);
  std::vector<png_bytep> rows(static_cast<size_t>(h));
  for (int y = 0; y < h; ++y)
    rows[y] = out.data() + static_cast<size_t>(y) * w * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return channels;
}

}  // namespace

void write_png_gray8(const std::string& path, int h, int w, const uint8_t* data) {
  write_png(path, h, w, 1, data);
}

void write_png_rgb8(const std::string& path, const ImageRgb& img) {
  write_png(path, img.h, img.w, 3, img.px.data());
}

ImageRgb read_png_rgb8(const std::string& path) {
  ImageRgb img;
  int channels = read_png(path, img.h, img.w, img.px, /*force_rgb=*/true);
  if (channels != 3) throw IoError("'" + path + "': expected RGB after expansion");
  return img;
}

void read_png_gray8(const std::string& path, int& h, int& w,
                    std::vector<uint8_t>& data) {
  int channels = read_png(path, h, w, data, /*force_rgb=*/false);
  if (channels != 1)
    throw IoError("'" + path + "': expected 8-bit grayscale, got multi-channel");
}

void write_mask(const BinaryGrid& mask, const std::string& path) {
  std::vector<uint8_t> bytes(mask.v.size());
  for (size_t i = 0; i < mask.v.size(); ++i) {
    if (mask.v[i] > 1) throw ValueError("write_mask: mask is not binary");
    bytes[i] = mask.v[i] ? 255 : 0;
  }
  write_png_gray8(path, mask.h, mask.w, bytes.data());
}

BinaryGrid read_mask(const std::string& path) {
  int h = 0, w = 0;
  std::vector<uint8_t> bytes;
  read_png_gray8(path, h, w, bytes);
  BinaryGrid mask(h, w);
  for (size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] == 0) {
      mask.v[i] = 0;
    } else if (bytes[i] == 255) {
      mask.v[i] = 1;
    } else {
      throw IoError("'" + path + "': mask contains value " +
                    std::to_string(bytes[i]) + ", expected only {0, 255}");
    }
  }
  return mask;
}

void write_gray_map(const RealGrid& map, const std::string& path) {
  std::vector<uint8_t> bytes(map.v.size());
  for (size_t i = 0; i < map.v.size(); ++i) {
    const double x = map.v[i];
    if (!(x >= 0.0 && x <= 1.0))
      throw ValueError("write_gray_map: value outside [0,1]");
    bytes[i] = static_cast<uint8_t>(std::lround(x * 255.0));
  }
  write_png_gray8(path, map.h, map.w, bytes.data());
}

RealGrid read_gray_map(const std::string& path) {
  int h = 0, w = 0;
  std::vector<uint8_t> bytes;
  read_png_gray8(path, h, w, bytes);
  RealGrid g(h, w);
  for (size_t i = 0; i < bytes.size(); ++i) g.v[i] = bytes[i] / 255.0;
  return g;
}

BinaryGrid read_gt_mask(const std::string& path) {
  int h = 0, w = 0;
  std::vector<uint8_t> bytes;
  read_png_gray8(path, h, w, bytes);
  BinaryGrid mask(h, w);
  for (size_t i = 0; i < bytes.size(); ++i) mask.v[i] = bytes[i] >= 128 ? 1 : 0;
  return mask;
}

}  // namespace sod
