#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "adepth/errors.hpp"
#include "adepth/tensor.hpp"

namespace adepth {

/// Rectangle in source pixel coordinates.
struct CropRect {
  int x = 0, y = 0, width = 0, height = 0;
};

template <typename Scalar>
Tensor<Scalar> crop(const Tensor<Scalar>& img, const CropRect& r) {
  if (r.x < 0 || r.y < 0 || r.width <= 0 || r.height <= 0 ||
      r.x + r.width > img.width() || r.y + r.height > img.height())
    throw ConfigError("crop: rectangle (" + std::to_string(r.x) + "," + std::to_string(r.y) +
                      "," + std::to_string(r.width) + "," + std::to_string(r.height) +
                      ") outside " + std::to_string(img.width()) + "x" +
                      std::to_string(img.height()) + " image");
  Tensor<Scalar> out(img.channels(), r.height, r.width);
  for (int c = 0; c < img.channels(); ++c)
    out.channel(c) = img.channel(c).block(r.y, r.x, r.height, r.width);
  return out;
}

/// Bilinear resampling with edge clamping.
template <typename Scalar>
Tensor<Scalar> resize_bilinear(const Tensor<Scalar>& img, int out_h, int out_w) {
  if (out_h <= 0 || out_w <= 0) throw ConfigError("resize_bilinear: non-positive target size");
  if (out_h == img.height() && out_w == img.width()) return img;
  Tensor<Scalar> out(img.channels(), out_h, out_w);
  const double sy = static_cast<double>(img.height()) / out_h;
  const double sx = static_cast<double>(img.width()) / out_w;
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::max(0.0, (y + 0.5) * sy - 0.5);
    const int y0 = std::min(static_cast<int>(fy), img.height() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::max(0.0, (x + 0.5) * sx - 0.5);
      const int x0 = std::min(static_cast<int>(fx), img.width() - 1);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < img.channels(); ++c) {
        const double top = (1.0 - wx) * img(c, y0, x0) + wx * img(c, y0, x1);
        const double bot = (1.0 - wx) * img(c, y1, x0) + wx * img(c, y1, x1);
        out(c, y, x) = static_cast<Scalar>((1.0 - wy) * top + wy * bot);
      }
    }
  }
  return out;
}

/// Nearest-neighbour resampling; used for depth maps so sparse zero
/// sentinels never blend into measured values.
template <typename Scalar>
Tensor<Scalar> resize_nearest(const Tensor<Scalar>& img, int out_h, int out_w) {
  if (out_h <= 0 || out_w <= 0) throw ConfigError("resize_nearest: non-positive target size");
  if (out_h == img.height() && out_w == img.width()) return img;
  Tensor<Scalar> out(img.channels(), out_h, out_w);
  const double sy = static_cast<double>(img.height()) / out_h;
  const double sx = static_cast<double>(img.width()) / out_w;
  for (int y = 0; y < out_h; ++y) {
    const int yi = std::min(static_cast<int>((y + 0.5) * sy), img.height() - 1);
    for (int x = 0; x < out_w; ++x) {
      const int xi = std::min(static_cast<int>((x + 0.5) * sx), img.width() - 1);
      for (int c = 0; c < img.channels(); ++c) out(c, y, x) = img(c, yi, xi);
    }
  }
  return out;
}

/// Checks the image value contract: finite, inside [0,1], 3 channels.
template <typename Scalar>
void validate_image(const Tensor<Scalar>& img, const std::string& what) {
  if (img.channels() != 3)
    throw ShapeError(what + ": expected 3 channels, got " + std::to_string(img.channels()));
  if (!all_finite(img)) throw ShapeError(what + ": non-finite pixel values");
  if ((img.array() < Scalar(0)).any() || (img.array() > Scalar(1)).any())
    throw ShapeError(what + ": pixel values outside [0,1]");
}

inline bool divisible_by(int v, int d) { return d > 0 && v % d == 0; }

}  // namespace adepth
