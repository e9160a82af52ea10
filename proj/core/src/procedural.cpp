#include "holo/procedural.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "holo/rng.hpp"

namespace holo {

namespace {

float smoothstep(float t) { return t * t * (3.0f - 2.0f * t); }

/// Bilinear value noise on an integer lattice with `cell`-pixel spacing.
float value_noise(uint64_t seed, uint64_t octave, int y, int x, int cell) {
    const int gy = y / cell, gx = x / cell;
    const float fy = smoothstep(static_cast<float>(y % cell) / static_cast<float>(cell));
    const float fx = smoothstep(static_cast<float>(x % cell) / static_cast<float>(cell));
    const float v00 = static_cast<float>(hash_to_unit(seed, octave, gy, gx));
    const float v01 = static_cast<float>(hash_to_unit(seed, octave, gy, gx + 1));
    const float v10 = static_cast<float>(hash_to_unit(seed, octave, gy + 1, gx));
    const float v11 = static_cast<float>(hash_to_unit(seed, octave, gy + 1, gx + 1));
    const float top = v00 + (v01 - v00) * fx;
    const float bot = v10 + (v11 - v10) * fx;
    return top + (bot - top) * fy;
}

Grid2<float> multi_octave_noise(uint64_t seed, int height, int width, int first_cell, int octaves) {
    Grid2<float> out(height, width, 0.0f);
    float amplitude = 1.0f;
    int cell = first_cell;
    for (int o = 0; o < octaves && cell >= 2; ++o) {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                out.at(y, x) += amplitude * value_noise(seed, static_cast<uint64_t>(o), y, x, cell);
        amplitude *= 0.5f;
        cell /= 2;
    }
    return out;
}

/// Affine remap of the grid's [min, max] onto [lo, hi].
void remap_span(Grid2<float>& g, float lo, float hi) {
    float mn = g.data[0], mx = g.data[0];
    for (float v : g.data) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    const float span = mx - mn;
    if (span <= 0.0f) {
        std::fill(g.data.begin(), g.data.end(), 0.5f * (lo + hi));
        return;
    }
    for (float& v : g.data) v = lo + (hi - lo) * ((v - mn) / span);
}

struct Primitive {
    int kind;  // 0 disk, 1 horizontal band, 2 vertical band
    float cy, cx, radius;
    float amp[3];
};

float primitive_weight(const Primitive& p, int y, int x) {
    float d;
    if (p.kind == 0) {
        const float dy = static_cast<float>(y) - p.cy;
        const float dx = static_cast<float>(x) - p.cx;
        d = std::sqrt(dy * dy + dx * dx);
    } else if (p.kind == 1) {
        d = std::fabs(static_cast<float>(y) - p.cy);
    } else {
        d = std::fabs(static_cast<float>(x) - p.cx);
    }
    const float edge = 0.35f * p.radius;
    const float t = (p.radius - d) / edge;
    if (t <= 0.0f) return 0.0f;
    if (t >= 1.0f) return 1.0f;
    return smoothstep(t);
}

}  // namespace

ProceduralTarget generate_procedural_target(uint64_t seed, int height, int width) {
    if (height < 32 || width < 32)
        throw std::invalid_argument("generate_procedural_target: dimensions must be at least 32");

    Rng rng(splitmix64(seed ^ 0x9E3779B97F4A7C15ull));
    ProceduralTarget target;

    // Shared geometry: gradient direction and soft primitives; channels get
    // their own weightings so color (and hence power demand) varies.
    const float angle = static_cast<float>(rng.uniform(0.0, 6.283185307179586));
    const float gdy = std::sin(angle), gdx = std::cos(angle);
    const int prim_count = 1 + static_cast<int>(rng.uniform_int(3));
    std::vector<Primitive> prims;
    const float min_dim = static_cast<float>(std::min(height, width));
    for (int i = 0; i < prim_count; ++i) {
        Primitive p;
        p.kind = static_cast<int>(rng.uniform_int(3));
        p.cy = static_cast<float>(rng.uniform(0.1, 0.9)) * static_cast<float>(height);
        p.cx = static_cast<float>(rng.uniform(0.1, 0.9)) * static_cast<float>(width);
        p.radius = static_cast<float>(rng.uniform(0.12, 0.35)) * min_dim;
        for (int c = 0; c < 3; ++c) p.amp[c] = static_cast<float>(rng.uniform(-1.0, 1.0));
        prims.push_back(p);
    }

    const uint64_t noise_seed = rng.next_u64();
    for (int c = 0; c < 3; ++c) {
        const float w_grad = static_cast<float>(rng.uniform(0.3, 1.0));
        const float w_noise = static_cast<float>(rng.uniform(0.4, 1.2));
        const float w_prim = static_cast<float>(rng.uniform(0.5, 1.5));
        const float gamma = static_cast<float>(rng.uniform(0.55, 1.9));

        Grid2<float> noise = multi_octave_noise(noise_seed + c, height, width,
                                                std::max(2, std::min(height, width) / 4), 4);
        Grid2<float> chan(height, width);
        const float norm = 1.0f / (std::fabs(gdy) * height + std::fabs(gdx) * width);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                float v = w_grad * (gdy * y + gdx * x) * norm + w_noise * noise.at(y, x);
                for (const Primitive& p : prims) v += w_prim * p.amp[c] * primitive_weight(p, y, x);
                chan.at(y, x) = v;
            }
        remap_span(chan, 0.0f, 1.0f);
        for (float& v : chan.data) v = std::pow(v, gamma);
        remap_span(chan, 0.02f, 0.98f);
        target.channels.push_back(std::move(chan));
    }

    // Depth: low-frequency noise plus a gradient, full [0,1] span.
    const uint64_t depth_seed = rng.next_u64();
    const float dangle = static_cast<float>(rng.uniform(0.0, 6.283185307179586));
    const float ddy = std::sin(dangle), ddx = std::cos(dangle);
    const float w_dgrad = static_cast<float>(rng.uniform(0.4, 1.0));
    Grid2<float> depth = multi_octave_noise(depth_seed, height, width,
                                            std::max(2, std::min(height, width) / 2), 2);
    const float dnorm = 1.0f / (std::fabs(ddy) * height + std::fabs(ddx) * width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) depth.at(y, x) += w_dgrad * (ddy * y + ddx * x) * dnorm;
    remap_span(depth, 0.0f, 1.0f);
    target.depth = std::move(depth);
    return target;
}

std::vector<Grid2<uint8_t>> quantize_depth(const Grid2<float>& depth, int planes) {
    if (planes < 1) throw std::invalid_argument("quantize_depth: need at least one plane");
    std::vector<Grid2<uint8_t>> masks(static_cast<size_t>(planes),
                                      Grid2<uint8_t>(depth.height, depth.width, 0));
    for (size_t i = 0; i < depth.size(); ++i) {
        const float d = std::min(1.0f, std::max(0.0f, depth.data[i]));
        const int bin = std::min(planes - 1, static_cast<int>(d * static_cast<float>(planes)));
        masks[bin].data[i] = 1;
    }
    return masks;
}

}  // namespace holo
