#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "adepth/tensor.hpp"

namespace adepth {

/// Raw decoded PNG: gray (1 channel) or RGB (3), 8- or 16-bit samples
/// widened to uint16.
struct PngData {
  int width = 0;
  int height = 0;
  int channels = 0;                          // 1 or 3
  int bit_depth = 0;                         // 8 or 16
  std::vector<std::uint16_t> samples;        // row-major, interleaved
  std::map<std::string, std::string> text;   // tEXt chunks
};

PngData read_png(const std::filesystem::path& path);

/// 8-bit RGB from a [0,1] image tensor.
void write_png_rgb8(const std::filesystem::path& path, const Tensord& image);

/// 16-bit grayscale from raw sample values, with optional tEXt metadata.
void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint16_t>& samples,
                      const std::map<std::string, std::string>& text = {});

/// Decoded PNG as a [0,1] float tensor (gray stays 1 channel).
Tensord png_to_tensor(const PngData& png);

}  // namespace adepth
