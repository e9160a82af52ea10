#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "holo/parallel.hpp"
#include "holo/tensor.hpp"

namespace holo {

// ---------------------------------------------------------------------------
// conv2d: cross-correlation with square kernel and symmetric zero padding.
// Weight layout is (out_channels, in_channels, kh, kw).
// ---------------------------------------------------------------------------

template <typename T>
struct ConvGrads {
    Tensor4<T> input;
    Tensor4<T> weight;
    std::vector<T> bias;
};

template <typename T>
void check_conv_shapes(const Tensor4<T>& input, const Tensor4<T>& weight, const std::vector<T>& bias,
                       int padding) {
    if (weight.c != input.c) throw std::invalid_argument("conv2d: channel count mismatch");
    if (bias.size() != static_cast<size_t>(weight.n)) throw std::invalid_argument("conv2d: bias size mismatch");
    if (padding < 0 || weight.h > input.h + 2 * padding || weight.w > input.w + 2 * padding)
        throw std::invalid_argument("conv2d: kernel larger than padded input");
}

template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& input, const Tensor4<T>& weight, const std::vector<T>& bias,
                          int padding) {
    check_conv_shapes(input, weight, bias, padding);
    const int H = input.h, W = input.w;
    const int OH = H + 2 * padding - weight.h + 1;
    const int OW = W + 2 * padding - weight.w + 1;
    Tensor4<T> out(input.n, weight.n, OH, OW);
    parallel_for(0, static_cast<int64_t>(input.n) * weight.n, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            const int i = static_cast<int>(j) / weight.n;
            const int oc = static_cast<int>(j) % weight.n;
            T* dst = out.plane(i, oc);
            for (int64_t q = 0; q < static_cast<int64_t>(OH) * OW; ++q) dst[q] = bias[oc];
            for (int ic = 0; ic < input.c; ++ic) {
                const T* src = input.plane(i, ic);
                for (int ky = 0; ky < weight.h; ++ky)
                    for (int kx = 0; kx < weight.w; ++kx) {
                        const T wv = weight.at(oc, ic, ky, kx);
                        if (wv == T(0)) continue;
                        const int xlo = std::max(0, padding - kx);
                        const int xhi = std::min(OW, W + padding - kx);
                        for (int y = 0; y < OH; ++y) {
                            const int iy = y + ky - padding;
                            if (iy < 0 || iy >= H) continue;
                            T* drow = dst + static_cast<size_t>(y) * OW;
                            const T* srow = src + static_cast<size_t>(iy) * W + (kx - padding);
                            for (int x = xlo; x < xhi; ++x) drow[x] += wv * srow[x];
                        }
                    }
            }
        }
    });
    return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor4<T>& input, const Tensor4<T>& weight, const Tensor4<T>& grad_out,
                             int padding) {
    if (grad_out.n != input.n || grad_out.c != weight.n)
        throw std::invalid_argument("conv2d_backward: grad shape mismatch");
    const int H = input.h, W = input.w;
    const int OH = grad_out.h, OW = grad_out.w;
    if (OH != H + 2 * padding - weight.h + 1 || OW != W + 2 * padding - weight.w + 1)
        throw std::invalid_argument("conv2d_backward: grad spatial dims mismatch");

    ConvGrads<T> g;
    g.input = Tensor4<T>(input.n, input.c, H, W, T(0));
    g.weight = Tensor4<T>(weight.n, weight.c, weight.h, weight.w, T(0));
    g.bias.assign(static_cast<size_t>(weight.n), T(0));

    // din[i][ic][u][v] = sum_{oc,ky,kx} w[oc][ic][ky][kx] * gout[i][oc][u-ky+p][v-kx+p]
    parallel_for(0, static_cast<int64_t>(input.n) * input.c, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            const int i = static_cast<int>(j) / input.c;
            const int ic = static_cast<int>(j) % input.c;
            T* dst = g.input.plane(i, ic);
            for (int oc = 0; oc < weight.n; ++oc) {
                const T* go = grad_out.plane(i, oc);
                for (int ky = 0; ky < weight.h; ++ky)
                    for (int kx = 0; kx < weight.w; ++kx) {
                        const T wv = weight.at(oc, ic, ky, kx);
                        if (wv == T(0)) continue;
                        const int vlo = std::max(0, kx - padding);
                        const int vhi = std::min(W, OW + kx - padding);
                        for (int u = 0; u < H; ++u) {
                            const int y = u - ky + padding;
                            if (y < 0 || y >= OH) continue;
                            T* drow = dst + static_cast<size_t>(u) * W;
                            const T* grow = go + static_cast<size_t>(y) * OW - (kx - padding);
                            for (int v = vlo; v < vhi; ++v) drow[v] += wv * grow[v];
                        }
                    }
            }
        }
    });

    // Weight and bias gradients accumulate across the whole batch in double.
    parallel_for(0, weight.n, [&](int64_t lo, int64_t hi) {
        for (int64_t oc = lo; oc < hi; ++oc) {
            double bias_sum = 0.0;
            for (int i = 0; i < input.n; ++i) {
                const T* go = grad_out.plane(i, static_cast<int>(oc));
                for (int64_t q = 0; q < static_cast<int64_t>(OH) * OW; ++q)
                    bias_sum += static_cast<double>(go[q]);
            }
            g.bias[oc] = static_cast<T>(bias_sum);
            for (int ic = 0; ic < input.c; ++ic)
                for (int ky = 0; ky < weight.h; ++ky)
                    for (int kx = 0; kx < weight.w; ++kx) {
                        double sum = 0.0;
                        const int xlo = std::max(0, padding - kx);
                        const int xhi = std::min(OW, W + padding - kx);
                        for (int i = 0; i < input.n; ++i) {
                            const T* src = input.plane(i, ic);
                            const T* go = grad_out.plane(i, static_cast<int>(oc));
                            for (int y = 0; y < OH; ++y) {
                                const int iy = y + ky - padding;
                                if (iy < 0 || iy >= H) continue;
                                const T* srow = src + static_cast<size_t>(iy) * W + (kx - padding);
                                const T* grow = go + static_cast<size_t>(y) * OW;
                                for (int x = xlo; x < xhi; ++x)
                                    sum += static_cast<double>(srow[x]) * static_cast<double>(grow[x]);
                            }
                        }
                        g.weight.at(static_cast<int>(oc), ic, ky, kx) = static_cast<T>(sum);
                    }
        }
    });
    return g;
}

// ---------------------------------------------------------------------------
// Batch normalization. Train mode normalizes by biased batch statistics and
// folds them into the running estimates; eval mode normalizes by the running
// estimates alone.
// ---------------------------------------------------------------------------

template <typename T>
struct BatchNormParams {
    std::vector<T> gamma, beta;
    std::vector<T> running_mean, running_var;
    double momentum = 0.1;
    double eps = 1e-5;

    BatchNormParams() = default;
    explicit BatchNormParams(int channels)
        : gamma(channels, T(1)), beta(channels, T(0)), running_mean(channels, T(0)),
          running_var(channels, T(1)) {}

    int channels() const { return static_cast<int>(gamma.size()); }
};

template <typename T>
struct BatchNormContext {
    Tensor4<T> xhat;
    std::vector<double> inv_std;  // per channel, batch statistics
};

template <typename T>
struct BatchNormGrads {
    Tensor4<T> input;
    std::vector<T> gamma, beta;
};

template <typename T>
Tensor4<T> batchnorm_forward(const Tensor4<T>& input, BatchNormParams<T>& params, bool train,
                             BatchNormContext<T>* ctx = nullptr) {
    if (input.c != params.channels()) throw std::invalid_argument("batchnorm: channel count mismatch");
    Tensor4<T> out(input.n, input.c, input.h, input.w);
    const int64_t plane = static_cast<int64_t>(input.h) * input.w;
    const double m = static_cast<double>(input.n) * plane;
    if (ctx) {
        ctx->xhat = Tensor4<T>(input.n, input.c, input.h, input.w);
        ctx->inv_std.assign(static_cast<size_t>(input.c), 0.0);
    }
    parallel_for(0, input.c, [&](int64_t lo, int64_t hi) {
        for (int64_t c = lo; c < hi; ++c) {
            double mean, inv_std;
            if (train) {
                double sum = 0.0;
                for (int i = 0; i < input.n; ++i) {
                    const T* src = input.plane(i, static_cast<int>(c));
                    for (int64_t q = 0; q < plane; ++q) sum += static_cast<double>(src[q]);
                }
                mean = sum / m;
                double sq = 0.0;
                for (int i = 0; i < input.n; ++i) {
                    const T* src = input.plane(i, static_cast<int>(c));
                    for (int64_t q = 0; q < plane; ++q) {
                        const double d = static_cast<double>(src[q]) - mean;
                        sq += d * d;
                    }
                }
                const double var = sq / m;
                inv_std = 1.0 / std::sqrt(var + params.eps);
                params.running_mean[c] = static_cast<T>((1.0 - params.momentum) *
                                                            static_cast<double>(params.running_mean[c]) +
                                                        params.momentum * mean);
                params.running_var[c] = static_cast<T>(
                    (1.0 - params.momentum) * static_cast<double>(params.running_var[c]) +
                    params.momentum * var);
            } else {
                mean = static_cast<double>(params.running_mean[c]);
                inv_std = 1.0 / std::sqrt(static_cast<double>(params.running_var[c]) + params.eps);
            }
            if (ctx) ctx->inv_std[c] = inv_std;
            const double gamma = static_cast<double>(params.gamma[c]);
            const double beta = static_cast<double>(params.beta[c]);
            for (int i = 0; i < input.n; ++i) {
                const T* src = input.plane(i, static_cast<int>(c));
                T* dst = out.plane(i, static_cast<int>(c));
                T* xh = ctx ? ctx->xhat.plane(i, static_cast<int>(c)) : nullptr;
                for (int64_t q = 0; q < plane; ++q) {
                    const double xhat = (static_cast<double>(src[q]) - mean) * inv_std;
                    if (xh) xh[q] = static_cast<T>(xhat);
                    dst[q] = static_cast<T>(gamma * xhat + beta);
                }
            }
        }
    });
    return out;
}

/// Train-mode backward through the batch statistics.
template <typename T>
BatchNormGrads<T> batchnorm_backward(const BatchNormContext<T>& ctx, const BatchNormParams<T>& params,
                                     const Tensor4<T>& grad_out) {
    if (!grad_out.same_shape(ctx.xhat)) throw std::invalid_argument("batchnorm_backward: shape mismatch");
    BatchNormGrads<T> g;
    g.input = Tensor4<T>(grad_out.n, grad_out.c, grad_out.h, grad_out.w);
    g.gamma.assign(static_cast<size_t>(grad_out.c), T(0));
    g.beta.assign(static_cast<size_t>(grad_out.c), T(0));
    const int64_t plane = static_cast<int64_t>(grad_out.h) * grad_out.w;
    const double m = static_cast<double>(grad_out.n) * plane;
    parallel_for(0, grad_out.c, [&](int64_t lo, int64_t hi) {
        for (int64_t c = lo; c < hi; ++c) {
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (int i = 0; i < grad_out.n; ++i) {
                const T* dy = grad_out.plane(i, static_cast<int>(c));
                const T* xh = ctx.xhat.plane(i, static_cast<int>(c));
                for (int64_t q = 0; q < plane; ++q) {
                    sum_dy += static_cast<double>(dy[q]);
                    sum_dy_xhat += static_cast<double>(dy[q]) * static_cast<double>(xh[q]);
                }
            }
            g.beta[c] = static_cast<T>(sum_dy);
            g.gamma[c] = static_cast<T>(sum_dy_xhat);
            const double scale = static_cast<double>(params.gamma[c]) * ctx.inv_std[c] / m;
            for (int i = 0; i < grad_out.n; ++i) {
                const T* dy = grad_out.plane(i, static_cast<int>(c));
                const T* xh = ctx.xhat.plane(i, static_cast<int>(c));
                T* dx = g.input.plane(i, static_cast<int>(c));
                for (int64_t q = 0; q < plane; ++q)
                    dx[q] = static_cast<T>(scale * (m * static_cast<double>(dy[q]) - sum_dy -
                                                    static_cast<double>(xh[q]) * sum_dy_xhat));
            }
        }
    });
    return g;
}

// ---------------------------------------------------------------------------
// ReLU.
// ---------------------------------------------------------------------------

template <typename T>
Tensor4<T> relu_forward(const Tensor4<T>& input) {
    Tensor4<T> out = input;
    for (T& v : out.data)
        if (v < T(0)) v = T(0);
    return out;
}

template <typename T>
Tensor4<T> relu_backward(const Tensor4<T>& input, const Tensor4<T>& grad_out) {
    if (!input.same_shape(grad_out)) throw std::invalid_argument("relu_backward: shape mismatch");
    Tensor4<T> g = grad_out;
    for (size_t q = 0; q < g.data.size(); ++q)
        if (input.data[q] <= T(0)) g.data[q] = T(0);
    return g;
}

// ---------------------------------------------------------------------------
// Adaptive average pooling. Output cell (oy, ox) averages the input window
// rows [floor(oy*H/OH), ceil((oy+1)*H/OH)) and likewise for columns.
// ---------------------------------------------------------------------------

inline int pool_window_start(int o, int in_dim, int out_dim) {
    return static_cast<int>((static_cast<int64_t>(o) * in_dim) / out_dim);
}
inline int pool_window_end(int o, int in_dim, int out_dim) {
    return static_cast<int>((static_cast<int64_t>(o + 1) * in_dim + out_dim - 1) / out_dim);
}

template <typename T>
Tensor4<T> adaptive_avg_pool_forward(const Tensor4<T>& input, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1 || out_h > input.h || out_w > input.w)
        throw std::invalid_argument("adaptive_avg_pool: target dims must be in [1, input dims]");
    Tensor4<T> out(input.n, input.c, out_h, out_w);
    parallel_for(0, static_cast<int64_t>(input.n) * input.c, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            const T* src = input.data.data() + j * input.h * input.w;
            T* dst = out.data.data() + j * static_cast<int64_t>(out_h) * out_w;
            for (int oy = 0; oy < out_h; ++oy) {
                const int y0 = pool_window_start(oy, input.h, out_h);
                const int y1 = pool_window_end(oy, input.h, out_h);
                for (int ox = 0; ox < out_w; ++ox) {
                    const int x0 = pool_window_start(ox, input.w, out_w);
                    const int x1 = pool_window_end(ox, input.w, out_w);
                    double sum = 0.0;
                    for (int y = y0; y < y1; ++y)
                        for (int x = x0; x < x1; ++x)
                            sum += static_cast<double>(src[static_cast<size_t>(y) * input.w + x]);
                    dst[static_cast<size_t>(oy) * out_w + ox] =
                        static_cast<T>(sum / (static_cast<double>(y1 - y0) * (x1 - x0)));
                }
            }
        }
    });
    return out;
}

template <typename T>
Tensor4<T> adaptive_avg_pool_backward(const Tensor4<T>& grad_out, int in_h, int in_w) {
    Tensor4<T> g(grad_out.n, grad_out.c, in_h, in_w, T(0));
    parallel_for(0, static_cast<int64_t>(grad_out.n) * grad_out.c, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            const T* go = grad_out.data.data() + j * static_cast<int64_t>(grad_out.h) * grad_out.w;
            T* dst = g.data.data() + j * static_cast<int64_t>(in_h) * in_w;
            for (int oy = 0; oy < grad_out.h; ++oy) {
                const int y0 = pool_window_start(oy, in_h, grad_out.h);
                const int y1 = pool_window_end(oy, in_h, grad_out.h);
                for (int ox = 0; ox < grad_out.w; ++ox) {
                    const int x0 = pool_window_start(ox, in_w, grad_out.w);
                    const int x1 = pool_window_end(ox, in_w, grad_out.w);
                    const T share = static_cast<T>(
                        static_cast<double>(go[static_cast<size_t>(oy) * grad_out.w + ox]) /
                        (static_cast<double>(y1 - y0) * (x1 - x0)));
                    for (int y = y0; y < y1; ++y)
                        for (int x = x0; x < x1; ++x) dst[static_cast<size_t>(y) * in_w + x] += share;
                }
            }
        }
    });
    return g;
}

}  // namespace holo
