#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <utility>

namespace adepth {

/// Dense channel-major (C,H,W) tensor backed by a single Eigen array.
/// Row-major inside each channel, so channel(c) maps straight onto an
/// Eigen 2-D array view without copies.
template <typename Scalar>
class Tensor {
 public:
  using Buffer = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using ChannelView =
      Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using ConstChannelView =
      Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

  Tensor() = default;
  Tensor(int channels, int height, int width)
      : c_(channels), h_(height), w_(width) {
    if (channels < 0 || height < 0 || width < 0)
      throw std::invalid_argument("Tensor: negative dimension");
    data_ = Buffer::Zero(static_cast<Eigen::Index>(channels) * height * width);
  }

  static Tensor constant(int channels, int height, int width, Scalar v) {
    Tensor t(channels, height, width);
    t.data_.setConstant(v);
    return t;
  }

  int channels() const { return c_; }
  int height() const { return h_; }
  int width() const { return w_; }
  Eigen::Index size() const { return data_.size(); }
  bool empty() const { return data_.size() == 0; }

  bool same_shape(const Tensor& o) const {
    return c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }

  Scalar& operator()(int c, int y, int x) {
    return data_[(static_cast<Eigen::Index>(c) * h_ + y) * w_ + x];
  }
  Scalar operator()(int c, int y, int x) const {
    return data_[(static_cast<Eigen::Index>(c) * h_ + y) * w_ + x];
  }

  /// Whole-buffer view for elementwise expressions.
  Buffer& array() { return data_; }
  const Buffer& array() const { return data_; }

  ChannelView channel(int c) {
    return ChannelView(data_.data() + static_cast<Eigen::Index>(c) * h_ * w_, h_, w_);
  }
  ConstChannelView channel(int c) const {
    return ConstChannelView(data_.data() + static_cast<Eigen::Index>(c) * h_ * w_, h_, w_);
  }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  void setZero() { data_.setZero(); }

 private:
  int c_ = 0, h_ = 0, w_ = 0;
  Buffer data_;
};

using Tensord = Tensor<double>;
using Tensorf = Tensor<float>;

template <typename Scalar>
bool all_finite(const Tensor<Scalar>& t) {
  return t.array().isFinite().all();
}

template <typename Scalar>
Scalar mean(const Tensor<Scalar>& t) {
  return t.array().mean();
}

template <typename Scalar>
Tensor<Scalar> concat_channels(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  if (a.height() != b.height() || a.width() != b.width())
    throw std::invalid_argument("concat_channels: spatial dims differ");
  Tensor<Scalar> out(a.channels() + b.channels(), a.height(), a.width());
  out.array().head(a.size()) = a.array();
  out.array().tail(b.size()) = b.array();
  return out;
}

/// Splits the gradient of concat_channels back into its two inputs.
template <typename Scalar>
std::pair<Tensor<Scalar>, Tensor<Scalar>> split_channels(const Tensor<Scalar>& g,
                                                         int first_channels) {
  Tensor<Scalar> a(first_channels, g.height(), g.width());
  Tensor<Scalar> b(g.channels() - first_channels, g.height(), g.width());
  a.array() = g.array().head(a.size());
  b.array() = g.array().tail(b.size());
  return {std::move(a), std::move(b)};
}

template <typename Scalar>
Tensor<Scalar> upsample_nearest(const Tensor<Scalar>& x, int factor) {
  if (factor < 1) throw std::invalid_argument("upsample_nearest: factor < 1");
  if (factor == 1) return x;
  Tensor<Scalar> out(x.channels(), x.height() * factor, x.width() * factor);
  for (int c = 0; c < x.channels(); ++c)
    for (int y = 0; y < out.height(); ++y)
      for (int xx = 0; xx < out.width(); ++xx)
        out(c, y, xx) = x(c, y / factor, xx / factor);
  return out;
}

/// Adjoint of upsample_nearest: sums each factor x factor block.
template <typename Scalar>
Tensor<Scalar> downsample_sum(const Tensor<Scalar>& g, int factor) {
  if (factor == 1) return g;
  Tensor<Scalar> out(g.channels(), g.height() / factor, g.width() / factor);
  for (int c = 0; c < g.channels(); ++c)
    for (int y = 0; y < g.height(); ++y)
      for (int x = 0; x < g.width(); ++x)
        out(c, y / factor, x / factor) += g(c, y, x);
  return out;
}

}  // namespace adepth
