#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "holo/grid.hpp"

namespace holo {

/// Optimization target: P-channel intensity in [0,1] plus a partition of the
/// image into depth planes at the given distances from the hologram plane.
template <typename T>
struct TargetScene {
    std::vector<Grid2<T>> intensity;       // P channels
    std::vector<Grid2<uint8_t>> plane_masks;  // K binary masks, disjoint, exhaustive
    std::vector<double> plane_distances;   // K meters, signed
    double pitch = 0.0;                    // meters per pixel

    int primaries() const { return static_cast<int>(intensity.size()); }
    int planes() const { return static_cast<int>(plane_masks.size()); }
    int height() const { return intensity.empty() ? 0 : intensity[0].height; }
    int width() const { return intensity.empty() ? 0 : intensity[0].width; }

    void validate() const {
        if (intensity.empty()) throw std::invalid_argument("TargetScene: no intensity channels");
        if (plane_masks.empty() || plane_masks.size() != plane_distances.size())
            throw std::invalid_argument("TargetScene: plane masks and distances must match and be non-empty");
        if (!(pitch > 0.0)) throw std::invalid_argument("TargetScene: pitch must be positive");
        const int h = height(), w = width();
        for (const auto& ch : intensity) {
            if (ch.height != h || ch.width != w)
                throw std::invalid_argument("TargetScene: channel shape mismatch");
            for (const T& v : ch.data)
                if (!(static_cast<double>(v) >= 0.0 && static_cast<double>(v) <= 1.0))
                    throw std::invalid_argument("TargetScene: intensity outside [0, 1]");
        }
        Grid2<int> cover(h, w, 0);
        for (const auto& m : plane_masks) {
            if (m.height != h || m.width != w)
                throw std::invalid_argument("TargetScene: mask shape mismatch");
            for (size_t i = 0; i < m.size(); ++i) cover.data[i] += m.data[i] ? 1 : 0;
        }
        for (int c : cover.data)
            if (c != 1) throw std::invalid_argument("TargetScene: plane masks must partition the image");
    }
};

}  // namespace holo
