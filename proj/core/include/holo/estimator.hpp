#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "holo/grid.hpp"
#include "holo/nn.hpp"
#include "holo/power.hpp"
#include "holo/rng.hpp"

namespace holo {

/// Reference to one named parameter or buffer tensor inside the model.
template <typename T>
struct ParamRef {
    std::string name;
    std::vector<T>* values = nullptr;
    std::vector<int> shape;
};

template <typename T>
struct EstimatorTrace;

/// Image (P-channel, any size >= 3x3) to raw 3x3 power matrix. Three blocks
/// of [conv3x3 -> batchnorm -> relu] x2 followed by adaptive average pooling
/// down the 100x100, 10x10, 3x3 ladder (capped at the input size), then a
/// 1x1 convolution collapsing 24 channels to the single output map.
template <typename T>
class EstimatorNet {
  public:
    static constexpr int kChannels = 24;
    static constexpr int kBlocks = 3;
    static constexpr std::array<int, kBlocks> kPoolSizes = {100, 10, 3};

    struct Block {
        Tensor4<T> conv_a_weight;
        std::vector<T> conv_a_bias;
        BatchNormParams<T> bn_a;
        Tensor4<T> conv_b_weight;
        std::vector<T> conv_b_bias;
        BatchNormParams<T> bn_b;
    };

    explicit EstimatorNet(uint64_t seed, int in_channels = 3) : in_channels_(in_channels) {
        Rng rng(seed);
        int cin = in_channels;
        for (int b = 0; b < kBlocks; ++b) {
            blocks_[b].conv_a_weight = init_conv(rng, kChannels, cin);
            blocks_[b].conv_a_bias.assign(kChannels, T(0));
            blocks_[b].bn_a = BatchNormParams<T>(kChannels);
            blocks_[b].conv_b_weight = init_conv(rng, kChannels, kChannels);
            blocks_[b].conv_b_bias.assign(kChannels, T(0));
            blocks_[b].bn_b = BatchNormParams<T>(kChannels);
            cin = kChannels;
        }
        final_weight_ = init_conv(rng, 1, kChannels, 1);
        final_bias_.assign(1, T(0));
    }

    int in_channels() const { return in_channels_; }

    Tensor4<T> forward(const Tensor4<T>& image, bool train, EstimatorTrace<T>* trace = nullptr) const;

    /// Parameter gradients in parameters() order.
    std::vector<std::vector<T>> backward(const EstimatorTrace<T>& trace, const Tensor4<T>& grad_out) const;

    std::vector<ParamRef<T>> parameters() {
        std::vector<ParamRef<T>> refs;
        for (int b = 0; b < kBlocks; ++b) {
            const std::string prefix = "block" + std::to_string(b) + ".";
            Block& blk = blocks_[b];
            refs.push_back(conv_ref(prefix + "conv_a.weight", blk.conv_a_weight));
            refs.push_back({prefix + "conv_a.bias", &blk.conv_a_bias, {kChannels}});
            refs.push_back({prefix + "bn_a.gamma", &blk.bn_a.gamma, {kChannels}});
            refs.push_back({prefix + "bn_a.beta", &blk.bn_a.beta, {kChannels}});
            refs.push_back(conv_ref(prefix + "conv_b.weight", blk.conv_b_weight));
            refs.push_back({prefix + "conv_b.bias", &blk.conv_b_bias, {kChannels}});
            refs.push_back({prefix + "bn_b.gamma", &blk.bn_b.gamma, {kChannels}});
            refs.push_back({prefix + "bn_b.beta", &blk.bn_b.beta, {kChannels}});
        }
        refs.push_back(conv_ref("final.weight", final_weight_));
        refs.push_back({"final.bias", &final_bias_, {1}});
        return refs;
    }

    std::vector<ParamRef<T>> buffers() {
        std::vector<ParamRef<T>> refs;
        for (int b = 0; b < kBlocks; ++b) {
            const std::string prefix = "block" + std::to_string(b) + ".";
            Block& blk = blocks_[b];
            refs.push_back({prefix + "bn_a.running_mean", &blk.bn_a.running_mean, {kChannels}});
            refs.push_back({prefix + "bn_a.running_var", &blk.bn_a.running_var, {kChannels}});
            refs.push_back({prefix + "bn_b.running_mean", &blk.bn_b.running_mean, {kChannels}});
            refs.push_back({prefix + "bn_b.running_var", &blk.bn_b.running_var, {kChannels}});
        }
        return refs;
    }

    Block& block(int b) { return blocks_[b]; }
    const Block& block(int b) const { return blocks_[b]; }
    Tensor4<T>& final_weight() { return final_weight_; }
    std::vector<T>& final_bias() { return final_bias_; }

  private:
    static ParamRef<T> conv_ref(const std::string& name, Tensor4<T>& t) {
        return {name, &t.data, {t.n, t.c, t.h, t.w}};
    }

    static Tensor4<T> init_conv(Rng& rng, int out_c, int in_c, int kernel = 3) {
        Tensor4<T> w(out_c, in_c, kernel, kernel);
        const double bound = std::sqrt(6.0 / (static_cast<double>(in_c) * kernel * kernel));
        for (T& v : w.data) v = static_cast<T>(rng.uniform(-bound, bound));
        return w;
    }

    int in_channels_;
    std::array<Block, kBlocks> blocks_;
    Tensor4<T> final_weight_;
    std::vector<T> final_bias_;
};

template <typename T>
struct EstimatorTrace {
    struct BlockTrace {
        Tensor4<T> conv_a_in;
        BatchNormContext<T> bn_a_ctx;
        Tensor4<T> bn_a_out;
        Tensor4<T> conv_b_in;
        BatchNormContext<T> bn_b_ctx;
        Tensor4<T> bn_b_out;
        int pool_in_h = 0, pool_in_w = 0;
    };
    std::array<BlockTrace, EstimatorNet<T>::kBlocks> blocks;
    Tensor4<T> final_in;
    bool train = false;
};

template <typename T>
Tensor4<T> EstimatorNet<T>::forward(const Tensor4<T>& image, bool train,
                                    EstimatorTrace<T>* trace) const {
    if (image.c != in_channels_) throw std::invalid_argument("EstimatorNet: input channel mismatch");
    if (image.h < 3 || image.w < 3) throw std::invalid_argument("EstimatorNet: input smaller than 3x3");
    if (trace) trace->train = train;
    Tensor4<T> x = image;
    for (int b = 0; b < kBlocks; ++b) {
        // Batch statistics are model state; trace-carrying train calls mutate it.
        auto& blk = const_cast<Block&>(blocks_[b]);
        typename EstimatorTrace<T>::BlockTrace* bt = trace ? &trace->blocks[b] : nullptr;
        if (bt) bt->conv_a_in = x;
        x = conv2d_forward(x, blk.conv_a_weight, blk.conv_a_bias, 1);
        x = batchnorm_forward(x, blk.bn_a, train, bt ? &bt->bn_a_ctx : nullptr);
        if (bt) bt->bn_a_out = x;
        x = relu_forward(x);
        if (bt) bt->conv_b_in = x;
        x = conv2d_forward(x, blk.conv_b_weight, blk.conv_b_bias, 1);
        x = batchnorm_forward(x, blk.bn_b, train, bt ? &bt->bn_b_ctx : nullptr);
        if (bt) bt->bn_b_out = x;
        x = relu_forward(x);
        if (bt) {
            bt->pool_in_h = x.h;
            bt->pool_in_w = x.w;
        }
        x = adaptive_avg_pool_forward(x, std::min(kPoolSizes[b], x.h), std::min(kPoolSizes[b], x.w));
    }
    if (trace) trace->final_in = x;
    return conv2d_forward(x, final_weight_, final_bias_, 0);
}

template <typename T>
std::vector<std::vector<T>> EstimatorNet<T>::backward(const EstimatorTrace<T>& trace,
                                                      const Tensor4<T>& grad_out) const {
    if (!trace.train)
        throw std::invalid_argument("EstimatorNet::backward: trace was not recorded in train mode");
    std::vector<std::vector<T>> grads(static_cast<size_t>(kBlocks) * 8 + 2);

    ConvGrads<T> fg = conv2d_backward(trace.final_in, final_weight_, grad_out, 0);
    grads[kBlocks * 8] = std::move(fg.weight.data);
    grads[kBlocks * 8 + 1] = std::move(fg.bias);

    Tensor4<T> g = std::move(fg.input);
    for (int b = kBlocks - 1; b >= 0; --b) {
        const auto& bt = trace.blocks[b];
        const Block& blk = blocks_[b];
        g = adaptive_avg_pool_backward(g, bt.pool_in_h, bt.pool_in_w);
        g = relu_backward(bt.bn_b_out, g);
        BatchNormGrads<T> bn_b = batchnorm_backward(bt.bn_b_ctx, blk.bn_b, g);
        ConvGrads<T> conv_b = conv2d_backward(bt.conv_b_in, blk.conv_b_weight, bn_b.input, 1);
        g = relu_backward(bt.bn_a_out, conv_b.input);
        BatchNormGrads<T> bn_a = batchnorm_backward(bt.bn_a_ctx, blk.bn_a, g);
        ConvGrads<T> conv_a = conv2d_backward(bt.conv_a_in, blk.conv_a_weight, bn_a.input, 1);
        g = std::move(conv_a.input);

        const size_t base = static_cast<size_t>(b) * 8;
        grads[base + 0] = std::move(conv_a.weight.data);
        grads[base + 1] = std::move(conv_a.bias);
        grads[base + 2] = std::move(bn_a.gamma);
        grads[base + 3] = std::move(bn_a.beta);
        grads[base + 4] = std::move(conv_b.weight.data);
        grads[base + 5] = std::move(conv_b.bias);
        grads[base + 6] = std::move(bn_b.gamma);
        grads[base + 7] = std::move(bn_b.beta);
    }
    return grads;
}

/// Stacks per-primary intensity channels into a single-item NCHW tensor.
template <typename T>
Tensor4<T> image_to_tensor(const std::vector<Grid2<T>>& channels) {
    if (channels.empty()) throw std::invalid_argument("image_to_tensor: no channels");
    Tensor4<T> t(1, static_cast<int>(channels.size()), channels[0].height, channels[0].width);
    for (size_t c = 0; c < channels.size(); ++c) {
        if (!channels[c].same_shape(channels[0]))
            throw std::invalid_argument("image_to_tensor: channel shape mismatch");
        std::copy(channels[c].data.begin(), channels[c].data.end(),
                  t.data.begin() + static_cast<int64_t>(c) * channels[0].height * channels[0].width);
    }
    return t;
}

/// Eval-mode forward clamped to [0,1]; rows are subframes, columns primaries.
template <typename T>
LaserPowerMatrix<T> estimate_powers(const EstimatorNet<T>& model, const std::vector<Grid2<T>>& channels) {
    const Tensor4<T> out = model.forward(image_to_tensor(channels), false, nullptr);
    if (out.h != 3 || out.w != 3) throw std::logic_error("estimate_powers: unexpected output shape");
    LaserPowerMatrix<T> powers(out.h, out.w, T(0));
    for (int f = 0; f < out.h; ++f)
        for (int p = 0; p < out.w; ++p) powers.at(f, p) = out.at(0, 0, f, p);
    powers.clamp01();
    return powers;
}

}  // namespace holo
