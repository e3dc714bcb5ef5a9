#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adepth/image.hpp"
#include "adepth/tensor.hpp"

namespace adepth::data {

inline constexpr const char* kDay = "day";
inline constexpr const char* kNight = "night";
inline constexpr const char* kRainyNight = "rainy_night";
inline constexpr const char* kSnowyWinter = "snowy_winter";

/// Lower-case identifier naming a visual domain. `day` is the source
/// domain everywhere; anything else is a target.
bool valid_domain_name(const std::string& name);

/// Photometric domain-shift proxy: pixel map v -> clamp((gain*v)^gamma *
/// vignette(x,y)), then additive light blobs and Gaussian noise.
struct ShiftParams {
  double gain = 1.0;
  double gamma = 1.0;
  double vignette_strength = 0.0;
  double noise_sigma = 0.0;
  int light_blobs = 0;

  static ShiftParams identity() { return {}; }
  bool is_identity() const {
    return gain == 1.0 && gamma == 1.0 && vignette_strength == 0.0 && noise_sigma == 0.0 &&
           light_blobs == 0;
  }
  void validate() const;
};

/// Deterministic synthetic scene: textured fronto-parallel rectangles over
/// a ground plane, with dense ground-truth depth.
struct SceneSpec {
  std::uint64_t seed = 0;
  int num_shapes = 0;
  double depth_min = 2.0;
  double depth_max = 40.0;
  int height = 64;
  int width = 64;

  void validate() const;
};

struct SampleRecord {
  std::filesystem::path image_path;
  std::filesystem::path depth_path;  // empty for unlabeled train rows
  std::string domain;
  std::string split;  // "train" | "test"
};

/// Preprocessing configuration attached to a dataset by its manifest
/// header. Crop happens in source coordinates, before the resize.
struct DatasetConfig {
  double depth_unit = 1.0 / 256.0;  // meters per 16-bit PNG unit
  std::optional<CropRect> crop;
  std::optional<std::pair<int, int>> resize;  // (height, width), each divisible by 32
};

struct Dataset {
  std::filesystem::path root;
  DatasetConfig config;
  std::vector<SampleRecord> records;

  std::vector<SampleRecord> select(const std::string& domain, const std::string& split) const;
};

/// Parses a manifest CSV (`path,depth_path,domain,split` plus `# key: value`
/// header comments) and resolves paths against `root`. Every referenced
/// file must exist; test rows must carry depth.
Dataset load_dataset(const std::filesystem::path& root, const std::filesystem::path& manifest);

/// Image with crop/resize applied; values in [0,1].
Tensord load_image(const std::filesystem::path& path, const DatasetConfig& config);

/// Depth in meters (0 = no measurement); accepts 16-bit PNG scaled by
/// `config.depth_unit` or a `.f32` binary sidecar.
Tensord load_depth(const std::filesystem::path& path, const DatasetConfig& config);

void write_depth_f32(const std::filesystem::path& path, const Tensord& depth);

/// Renders (image, depth). Pure function of the spec.
std::pair<Tensord, Tensord> generate_scene(const SceneSpec& spec);

/// Applies the photometric shift; pure given (image, params, seed).
Tensord apply_shift(const Tensord& image, const ShiftParams& params, std::uint64_t seed);

}  // namespace adepth::data
