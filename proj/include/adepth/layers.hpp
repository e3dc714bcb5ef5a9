#pragma once

#include <Eigen/Dense>

#include <string>

#include "adepth/random.hpp"
#include "adepth/tensor.hpp"

namespace adepth::nn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Per-call state a convolution needs for its backward pass.
struct ConvCtx {
  Mat cols;  // im2col patches, (in_ch*k*k) x (out_h*out_w)
  int in_h = 0, in_w = 0;
};

/// 2-D convolution with zero padding. Weight rows are output channels,
/// columns run over (in_channel, ky, kx).
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(int in_ch, int out_ch, int ksize, int stride, int pad);

  void init_he(Rng& rng);

  int out_dim(int in) const { return (in + 2 * pad_ - ksize_) / stride_ + 1; }
  int in_channels() const { return in_ch_; }
  int out_channels() const { return out_ch_; }
  int ksize() const { return ksize_; }
  Eigen::Index param_count() const { return weight.size() + bias.size(); }

  Tensord forward(const Tensord& x, ConvCtx* ctx = nullptr) const;

  /// Propagates grad_out; accumulates weight/bias grads when
  /// `accumulate` is set, returns the input gradient when
  /// `want_input_grad` is set (empty tensor otherwise).
  Tensord backward(const Tensord& grad_out, const ConvCtx& ctx, bool accumulate,
                   bool want_input_grad);

  void zero_grad() {
    weight_grad.setZero();
    bias_grad.setZero();
  }

  Mat weight;
  Vec bias;
  Mat weight_grad;
  Vec bias_grad;

 private:
  int in_ch_ = 0, out_ch_ = 0, ksize_ = 0, stride_ = 1, pad_ = 0;
};

Tensord relu(const Tensord& x);
Tensord relu_backward(const Tensord& grad, const Tensord& pre);

Tensord elu(const Tensord& x);
Tensord elu_backward(const Tensord& grad, const Tensord& pre);

/// Sigmoid with the pre-activation clamped to +-30 so outputs stay
/// strictly inside (0,1) in double precision.
Tensord sigmoid(const Tensord& x);
Tensord sigmoid_backward(const Tensord& grad, const Tensord& y);

}  // namespace adepth::nn
