#include "adepth/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "adepth/errors.hpp"
#include "adepth/png_io.hpp"
#include "adepth/random.hpp"

namespace adepth::data {

namespace fs = std::filesystem;

bool valid_domain_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!std::islower(static_cast<unsigned char>(c)) && !std::isdigit(static_cast<unsigned char>(c)) &&
        c != '_')
      return false;
  return true;
}

void ShiftParams::validate() const {
  if (gain <= 0.0) throw ConfigError("ShiftParams: gain must be > 0");
  if (gamma <= 0.0) throw ConfigError("ShiftParams: gamma must be > 0");
  if (vignette_strength < 0.0 || vignette_strength > 1.0)
    throw ConfigError("ShiftParams: vignette_strength must be in [0,1]");
  if (noise_sigma < 0.0) throw ConfigError("ShiftParams: noise_sigma must be >= 0");
  if (light_blobs < 0) throw ConfigError("ShiftParams: light_blobs must be >= 0");
}

void SceneSpec::validate() const {
  if (num_shapes < 0) throw ConfigError("SceneSpec: num_shapes must be >= 0");
  if (!(depth_min > 0.0) || !(depth_min < depth_max))
    throw ConfigError("SceneSpec: need 0 < depth_min < depth_max");
  if (height < 2 || width < 2) throw ConfigError("SceneSpec: image size too small");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

/// Header comments look like `# key: value`.
void parse_header_comment(const std::string& line, DatasetConfig& cfg) {
  const auto colon = line.find(':');
  if (colon == std::string::npos) return;
  const std::string key = trim(line.substr(1, colon - 1));
  const std::string value = trim(line.substr(colon + 1));
  if (key == "depth_unit") {
    cfg.depth_unit = std::stod(value);
    if (!(cfg.depth_unit > 0.0)) throw ConfigError("manifest: depth_unit must be > 0");
  } else if (key == "crop") {
    const auto parts = split(value, ',');
    if (parts.size() != 4) throw ConfigError("manifest: crop expects x,y,w,h");
    cfg.crop = CropRect{std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]),
                        std::stoi(parts[3])};
  } else if (key == "resize") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) throw ConfigError("manifest: resize expects W,H");
    const int w = std::stoi(parts[0]), h = std::stoi(parts[1]);
    if (!divisible_by(w, 32) || !divisible_by(h, 32))
      throw ConfigError("manifest: resize " + std::to_string(w) + "x" + std::to_string(h) +
                        " not divisible by 32");
    cfg.resize = std::make_pair(h, w);
  }
}

}  // namespace

std::vector<SampleRecord> Dataset::select(const std::string& domain,
                                          const std::string& split) const {
  std::vector<SampleRecord> out;
  for (const auto& r : records)
    if ((domain.empty() || r.domain == domain) && (split.empty() || r.split == split))
      out.push_back(r);
  return out;
}

Dataset load_dataset(const fs::path& root, const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open manifest: " + manifest.string());

  Dataset ds;
  ds.root = root;

  std::string line;
  bool saw_header = false;
  std::vector<std::string> missing;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      parse_header_comment(t, ds.config);
      continue;
    }
    if (!saw_header) {
      if (t != "path,depth_path,domain,split")
        throw ConfigError("manifest: expected header `path,depth_path,domain,split`, got `" + t +
                          "`");
      saw_header = true;
      continue;
    }
    const auto cols = split(t, ',');
    if (cols.size() != 4)
      throw ConfigError("manifest line " + std::to_string(line_no) + ": expected 4 columns");

    SampleRecord rec;
    rec.image_path = root / cols[0];
    rec.depth_path = cols[1].empty() ? fs::path() : root / cols[1];
    rec.domain = cols[2];
    rec.split = cols[3];
    if (!valid_domain_name(rec.domain))
      throw ConfigError("manifest line " + std::to_string(line_no) + ": bad domain `" +
                        rec.domain + "`");
    if (rec.split != "train" && rec.split != "test")
      throw ConfigError("manifest line " + std::to_string(line_no) + ": split must be train|test");
    if (rec.split == "test" && rec.depth_path.empty())
      throw ConfigError("manifest line " + std::to_string(line_no) +
                        ": test rows must carry depth_path");

    if (!fs::exists(rec.image_path)) missing.push_back(rec.image_path.string());
    if (!rec.depth_path.empty() && !fs::exists(rec.depth_path))
      missing.push_back(rec.depth_path.string());
    ds.records.push_back(std::move(rec));
  }
  if (!saw_header) throw ConfigError("manifest: missing header row");
  if (!missing.empty()) {
    std::string msg = "manifest references missing files:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw IoError(msg);
  }
  return ds;
}

Tensord load_image(const fs::path& path, const DatasetConfig& config) {
  const PngData png = read_png(path);
  Tensord img = png_to_tensor(png);
  if (img.channels() == 1) {
    Tensord rgb(3, img.height(), img.width());
    for (int c = 0; c < 3; ++c) rgb.channel(c) = img.channel(0);
    img = std::move(rgb);
  }
  if (config.crop) img = crop(img, *config.crop);
  if (config.resize) img = resize_bilinear(img, config.resize->first, config.resize->second);
  img.array() = img.array().min(1.0).max(0.0);
  return img;
}

Tensord load_depth(const fs::path& path, const DatasetConfig& config) {
  Tensord depth;
  if (path.extension() == ".f32") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open depth sidecar: " + path.string());
    char magic[8] = {};
    std::uint32_t h = 0, w = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&h), 4);
    in.read(reinterpret_cast<char*>(&w), 4);
    if (!in || std::memcmp(magic, "ADEPTHF0", 8) != 0)
      throw IoError("bad depth sidecar header: " + path.string());
    std::vector<float> buf(static_cast<std::size_t>(h) * w);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 4));
    if (!in) throw IoError("truncated depth sidecar: " + path.string());
    depth = Tensord(1, static_cast<int>(h), static_cast<int>(w));
    for (Eigen::Index i = 0; i < depth.size(); ++i) depth.array()[i] = buf[i];
  } else {
    const PngData png = read_png(path);
    if (png.channels != 1) throw IoError("depth PNG must be grayscale: " + path.string());
    depth = Tensord(1, png.height, png.width);
    for (Eigen::Index i = 0; i < depth.size(); ++i)
      depth.array()[i] = png.samples[static_cast<std::size_t>(i)] * config.depth_unit;
  }
  if (config.crop) depth = crop(depth, *config.crop);
  if (config.resize) depth = resize_nearest(depth, config.resize->first, config.resize->second);
  if ((depth.array() < 0.0).any() || !all_finite(depth))
    throw IoError("depth map has negative or non-finite values: " + path.string());
  return depth;
}

void write_depth_f32(const fs::path& path, const Tensord& depth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open depth sidecar for writing: " + path.string());
  const std::uint32_t h = static_cast<std::uint32_t>(depth.height());
  const std::uint32_t w = static_cast<std::uint32_t>(depth.width());
  out.write("ADEPTHF0", 8);
  out.write(reinterpret_cast<const char*>(&h), 4);
  out.write(reinterpret_cast<const char*>(&w), 4);
  for (Eigen::Index i = 0; i < depth.size(); ++i) {
    const float v = static_cast<float>(depth.array()[i]);
    out.write(reinterpret_cast<const char*>(&v), 4);
  }
  if (!out) throw IoError("failed writing depth sidecar: " + path.string());
}

namespace {

/// Procedural checker/stripe texture in [0,1].
double texture_at(int y, int x, double period, double phase, double lo, double hi, int kind) {
  double t = 0.0;
  switch (kind) {
    case 0:  // checker
      t = (static_cast<int>(std::floor(x / period + phase)) +
           static_cast<int>(std::floor(y / period + phase))) % 2 == 0
              ? 0.0
              : 1.0;
      break;
    case 1:  // vertical stripes
      t = static_cast<int>(std::floor(x / period + phase)) % 2 == 0 ? 0.0 : 1.0;
      break;
    default:  // diagonal stripes
      t = static_cast<int>(std::floor((x + y) / period + phase)) % 2 == 0 ? 0.0 : 1.0;
      break;
  }
  return lo + (hi - lo) * t;
}

}  // namespace

std::pair<Tensord, Tensord> generate_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(Rng::derive(spec.seed, 0x5ce));

  const int h = spec.height, w = spec.width;
  Tensord image(3, h, w);
  Tensord depth(1, h, w);

  // Ground plane: depth strictly increasing with row index, spanning the
  // declared range exactly.
  for (int y = 0; y < h; ++y) {
    const double a = static_cast<double>(y) / (h - 1);
    const double d = spec.depth_min + (spec.depth_max - spec.depth_min) * a;
    for (int x = 0; x < w; ++x) depth(0, y, x) = d;
  }

  // Ground albedo: diagonal stripe texture plus a slow horizontal ramp so
  // intensity edges exist even with zero shapes.
  const double g_period = rng.uniform(6.0, 12.0);
  const double g_phase = rng.uniform(0.0, 4.0);
  const double base_r = rng.uniform(0.55, 0.8);
  const double base_g = rng.uniform(0.55, 0.8);
  const double base_b = rng.uniform(0.55, 0.8);
  Tensord albedo(3, h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double t = texture_at(y, x, g_period, g_phase, 0.75, 1.0, 2);
      albedo(0, y, x) = base_r * t;
      albedo(1, y, x) = base_g * t;
      albedo(2, y, x) = base_b * t;
    }

  // Fronto-parallel rectangles closer than the ground they cover; their
  // texture boundaries are depth discontinuities by construction.
  for (int s = 0; s < spec.num_shapes; ++s) {
    const int sw = rng.uniform_int(std::max(3, w / 8), std::max(4, w / 3));
    const int sh = rng.uniform_int(std::max(3, h / 8), std::max(4, h / 3));
    const int x0 = rng.uniform_int(0, std::max(0, w - sw - 1));
    const int y0 = rng.uniform_int(0, std::max(0, h - sh - 1));
    const double span = spec.depth_max - spec.depth_min;
    const double z = spec.depth_min + rng.uniform(0.0, 0.75 * span);
    const double period = rng.uniform(2.5, 7.0);
    const double phase = rng.uniform(0.0, 4.0);
    const int kind = rng.uniform_int(0, 1);
    const double cr = rng.uniform(0.3, 1.0);
    const double cg = rng.uniform(0.3, 1.0);
    const double cb = rng.uniform(0.3, 1.0);
    const double lo = rng.uniform(0.45, 0.65);
    for (int y = y0; y < y0 + sh && y < h; ++y)
      for (int x = x0; x < x0 + sw && x < w; ++x) {
        if (z >= depth(0, y, x)) continue;  // occluded by nearer surface
        depth(0, y, x) = z;
        const double t = texture_at(y, x, period, phase, lo, 1.0, kind);
        albedo(0, y, x) = cr * t;
        albedo(1, y, x) = cg * t;
        albedo(2, y, x) = cb * t;
      }
  }

  // Distance shading ties appearance to depth so depth is recoverable from
  // a single image at desk scale.
  const double lambda = spec.depth_max * 0.75;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double shade = 0.15 + 0.85 * std::exp(-depth(0, y, x) / lambda);
      for (int c = 0; c < 3; ++c)
        image(c, y, x) = std::clamp(albedo(c, y, x) * shade, 0.0, 1.0);
    }

  return {std::move(image), std::move(depth)};
}

Tensord apply_shift(const Tensord& image, const ShiftParams& params, std::uint64_t seed) {
  params.validate();
  const int h = image.height(), w = image.width();
  Tensord out(image.channels(), h, w);

  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  const double r_max2 = cx * cx + cy * cy;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double r2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / std::max(r_max2, 1.0);
      const double vig = 1.0 - params.vignette_strength * r2;
      for (int c = 0; c < image.channels(); ++c) {
        const double v = std::pow(params.gain * image(c, y, x), params.gamma) * vig;
        out(c, y, x) = std::clamp(v, 0.0, 1.0);
      }
    }

  Rng rng(Rng::derive(seed, 0x51f7));
  for (int b = 0; b < params.light_blobs; ++b) {
    const double bx = rng.uniform(0.0, w - 1.0);
    const double by = rng.uniform(0.0, h - 1.0);
    const double radius = rng.uniform(0.03, 0.12) * std::max(h, w);
    const double amp = rng.uniform(0.3, 0.8);
    const double warm = rng.uniform(0.6, 1.0);  // blue channel rolls off
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double d2 = (x - bx) * (x - bx) + (y - by) * (y - by);
        const double g = amp * std::exp(-d2 / (2.0 * radius * radius));
        if (g < 1e-4) continue;
        for (int c = 0; c < image.channels(); ++c)
          out(c, y, x) += g * (c == 2 ? warm : 1.0);
      }
  }

  if (params.noise_sigma > 0.0)
    for (Eigen::Index i = 0; i < out.size(); ++i)
      out.array()[i] += rng.normal(0.0, params.noise_sigma);

  out.array() = out.array().min(1.0).max(0.0);
  return out;
}

}  // namespace adepth::data
