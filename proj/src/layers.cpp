#include "adepth/layers.hpp"

#include <cmath>

#include "adepth/errors.hpp"

namespace adepth::nn {

Conv2d::Conv2d(int in_ch, int out_ch, int ksize, int stride, int pad)
    : weight(Mat::Zero(out_ch, in_ch * ksize * ksize)),
      bias(Vec::Zero(out_ch)),
      weight_grad(Mat::Zero(out_ch, in_ch * ksize * ksize)),
      bias_grad(Vec::Zero(out_ch)),
      in_ch_(in_ch),
      out_ch_(out_ch),
      ksize_(ksize),
      stride_(stride),
      pad_(pad) {}

void Conv2d::init_he(Rng& rng) {
  const double std = std::sqrt(2.0 / (in_ch_ * ksize_ * ksize_));
  for (Eigen::Index i = 0; i < weight.size(); ++i) weight.data()[i] = rng.normal(0.0, std);
  bias.setZero();
}

namespace {

Mat im2col(const Tensord& x, int ksize, int stride, int pad, int out_h, int out_w) {
  const int rows = x.channels() * ksize * ksize;
  Mat cols(rows, static_cast<Eigen::Index>(out_h) * out_w);
  for (int c = 0; c < x.channels(); ++c)
    for (int ky = 0; ky < ksize; ++ky)
      for (int kx = 0; kx < ksize; ++kx) {
        const int r = (c * ksize + ky) * ksize + kx;
        for (int oy = 0; oy < out_h; ++oy) {
          const int iy = oy * stride + ky - pad;
          const bool y_ok = iy >= 0 && iy < x.height();
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * stride + kx - pad;
            cols(r, static_cast<Eigen::Index>(oy) * out_w + ox) =
                (y_ok && ix >= 0 && ix < x.width()) ? x(c, iy, ix) : 0.0;
          }
        }
      }
  return cols;
}

void col2im_add(const Mat& cols, int channels, int height, int width, int ksize, int stride,
                int pad, int out_h, int out_w, Tensord& grad_in) {
  for (int c = 0; c < channels; ++c)
    for (int ky = 0; ky < ksize; ++ky)
      for (int kx = 0; kx < ksize; ++kx) {
        const int r = (c * ksize + ky) * ksize + kx;
        for (int oy = 0; oy < out_h; ++oy) {
          const int iy = oy * stride + ky - pad;
          if (iy < 0 || iy >= height) continue;
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * stride + kx - pad;
            if (ix < 0 || ix >= width) continue;
            grad_in(c, iy, ix) += cols(r, static_cast<Eigen::Index>(oy) * out_w + ox);
          }
        }
      }
}

}  // namespace

Tensord Conv2d::forward(const Tensord& x, ConvCtx* ctx) const {
  if (x.channels() != in_ch_)
    throw ShapeError("Conv2d: expected " + std::to_string(in_ch_) + " input channels, got " +
                     std::to_string(x.channels()));
  const int oh = out_dim(x.height());
  const int ow = out_dim(x.width());
  if (oh <= 0 || ow <= 0)
    throw ShapeError("Conv2d: input " + std::to_string(x.height()) + "x" +
                     std::to_string(x.width()) + " too small for kernel");

  Mat cols = im2col(x, ksize_, stride_, pad_, oh, ow);
  Tensord out(out_ch_, oh, ow);
  Eigen::Map<Mat> out_map(out.data(), static_cast<Eigen::Index>(oh) * ow, out_ch_);
  // out(o, i) laid out channel-major: view as (N x out_ch) column blocks.
  out_map.noalias() = cols.transpose() * weight.transpose();
  for (int o = 0; o < out_ch_; ++o) out_map.col(o).array() += bias[o];

  if (ctx) {
    ctx->cols = std::move(cols);
    ctx->in_h = x.height();
    ctx->in_w = x.width();
  }
  return out;
}

Tensord Conv2d::backward(const Tensord& grad_out, const ConvCtx& ctx, bool accumulate,
                         bool want_input_grad) {
  const int oh = grad_out.height(), ow = grad_out.width();
  const Eigen::Index n = static_cast<Eigen::Index>(oh) * ow;
  Eigen::Map<const Mat> g_map(grad_out.data(), n, out_ch_);

  if (accumulate) {
    weight_grad.noalias() += g_map.transpose() * ctx.cols.transpose();
    for (int o = 0; o < out_ch_; ++o) bias_grad[o] += g_map.col(o).sum();
  }

  if (!want_input_grad) return {};
  Mat grad_cols(weight.cols(), n);
  grad_cols.noalias() = weight.transpose() * g_map.transpose();
  Tensord grad_in(in_ch_, ctx.in_h, ctx.in_w);
  col2im_add(grad_cols, in_ch_, ctx.in_h, ctx.in_w, ksize_, stride_, pad_, oh, ow, grad_in);
  return grad_in;
}

Tensord relu(const Tensord& x) {
  Tensord y = x;
  y.array() = y.array().max(0.0);
  return y;
}

Tensord relu_backward(const Tensord& grad, const Tensord& pre) {
  Tensord g = grad;
  g.array() *= (pre.array() > 0.0).cast<double>();
  return g;
}

Tensord elu(const Tensord& x) {
  Tensord y = x;
  y.array() = (x.array() > 0.0).select(x.array(), x.array().exp() - 1.0);
  return y;
}

Tensord elu_backward(const Tensord& grad, const Tensord& pre) {
  Tensord g = grad;
  g.array() = (pre.array() > 0.0).select(g.array(), g.array() * pre.array().exp());
  return g;
}

Tensord sigmoid(const Tensord& x) {
  Tensord y = x;
  y.array() = 1.0 / (1.0 + (-y.array().min(30.0).max(-30.0)).exp());
  return y;
}

Tensord sigmoid_backward(const Tensord& grad, const Tensord& y) {
  Tensord g = grad;
  g.array() *= y.array() * (1.0 - y.array());
  return g;
}

}  // namespace adepth::nn
