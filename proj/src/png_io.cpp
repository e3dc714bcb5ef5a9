#include "adepth/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "adepth/errors.hpp"

namespace adepth {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  throw IoError(std::string("png: ") + msg);
  (void)png;
}

void png_warn_fn(png_structp, png_const_charp) {}

}  // namespace

PngData read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open PNG for reading: " + path.string());

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  PngData out;
  try {
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    int bit_depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bit_depth == 16) png_set_swap(png);  // libpng streams are big-endian
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = png_get_bit_depth(png, info);
    out.channels = png_get_channels(png, info);
    if (out.channels != 1 && out.channels != 3)
      throw IoError("unsupported PNG channel count " + std::to_string(out.channels) + " in " +
                    path.string());

    const std::size_t values = static_cast<std::size_t>(out.width) * out.height * out.channels;
    out.samples.resize(values);

    std::vector<png_bytep> rows(out.height);
    std::vector<std::uint8_t> raw;
    if (out.bit_depth == 16) {
      for (int y = 0; y < out.height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(out.samples.data() +
                                              static_cast<std::size_t>(y) * out.width * out.channels);
      png_read_image(png, rows.data());
    } else {
      raw.resize(values);
      for (int y = 0; y < out.height; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * out.width * out.channels;
      png_read_image(png, rows.data());
      for (std::size_t i = 0; i < values; ++i) out.samples[i] = raw[i];
    }

    png_textp text_ptr = nullptr;
    int num_text = 0;
    if (png_get_text(png, info, &text_ptr, &num_text) > 0)
      for (int i = 0; i < num_text; ++i)
        out.text[text_ptr[i].key] = text_ptr[i].text ? text_ptr[i].text : "";

    png_read_end(png, nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

namespace {

void write_png(const std::filesystem::path& path, int width, int height, int channels,
               int bit_depth, const std::uint8_t* bytes,
               const std::map<std::string, std::string>& text) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot open PNG for writing: " + path.string());

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  try {
    png_init_io(png, fp.get());
    const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, width, height, bit_depth, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

    std::vector<png_text> chunks;
    chunks.reserve(text.size());
    for (const auto& [k, v] : text) {
      png_text t{};
      t.compression = PNG_TEXT_COMPRESSION_NONE;
      t.key = const_cast<char*>(k.c_str());
      t.text = const_cast<char*>(v.c_str());
      t.text_length = v.size();
      chunks.push_back(t);
    }
    if (!chunks.empty()) png_set_text(png, info, chunks.data(), static_cast<int>(chunks.size()));

    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);

    const std::size_t stride =
        static_cast<std::size_t>(width) * channels * (bit_depth == 16 ? 2 : 1);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
      rows[y] = const_cast<png_bytep>(bytes + static_cast<std::size_t>(y) * stride);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_rgb8(const std::filesystem::path& path, const Tensord& image) {
  if (image.channels() != 3) throw IoError("write_png_rgb8: expected 3 channels");
  const int h = image.height(), w = image.width();
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(h) * w * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(image(c, y, x), 0.0, 1.0);
        bytes[(static_cast<std::size_t>(y) * w + x) * 3 + c] =
            static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
  write_png(path, w, h, 3, 8, bytes.data(), {});
}

void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint16_t>& samples,
                      const std::map<std::string, std::string>& text) {
  if (samples.size() != static_cast<std::size_t>(width) * height)
    throw IoError("write_png_gray16: sample count does not match dimensions");
  write_png(path, width, height, 1, 16,
            reinterpret_cast<const std::uint8_t*>(samples.data()), text);
}

Tensord png_to_tensor(const PngData& png) {
  Tensord out(png.channels, png.height, png.width);
  const double scale = png.bit_depth == 16 ? 65535.0 : 255.0;
  for (int y = 0; y < png.height; ++y)
    for (int x = 0; x < png.width; ++x)
      for (int c = 0; c < png.channels; ++c)
        out(c, y, x) =
            png.samples[(static_cast<std::size_t>(y) * png.width + x) * png.channels + c] / scale;
  return out;
}

}  // namespace adepth
