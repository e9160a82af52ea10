#pragma once

#include <cstdint>
#include <vector>

#include "holo/grid.hpp"

namespace holo {

struct ProceduralTarget {
    std::vector<Grid2<float>> channels;  // RGB intensity in [0,1]
    Grid2<float> depth;                  // smooth, spans [0,1]
};

/// Deterministic per-seed composite of smooth gradients, multi-octave value
/// noise and soft geometric primitives. Each channel is remapped to span
/// [0.02, 0.98] with a per-channel gamma so channel means vary across seeds.
ProceduralTarget generate_procedural_target(uint64_t seed, int height, int width);

/// Nearest-bin quantization of depth into `planes` equal bins; depth 0 falls
/// in the first (nearest) plane's mask. The masks partition the image.
std::vector<Grid2<uint8_t>> quantize_depth(const Grid2<float>& depth, int planes);

}  // namespace holo
