#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "holo/grid.hpp"

namespace holo {

inline uint8_t quantize_u8(float v) {
    if (!(v > 0.0f)) v = 0.0f;
    if (v > 1.0f) v = 1.0f;
    return static_cast<uint8_t>(v * 255.0f + 0.5f);
}

inline uint16_t quantize_u16(float v) {
    if (!(v > 0.0f)) v = 0.0f;
    if (v > 1.0f) v = 1.0f;
    return static_cast<uint16_t>(v * 65535.0f + 0.5f);
}

/// Snap a unit-range grid to the exact values an 8-bit (or 16-bit) PNG
/// round trip produces, so in-memory pixels equal reloaded pixels bitwise.
Grid2<float> snap_to_u8(const Grid2<float>& g);
Grid2<float> snap_to_u16(const Grid2<float>& g);

/// 8-bit RGB; values in [0,1] quantized by round(v*255). Round-tripping a
/// quantized image (entries k/255) is bitwise exact.
void write_png_rgb8(const std::filesystem::path& path, const std::vector<Grid2<float>>& channels);
std::vector<Grid2<float>> read_png_rgb8(const std::filesystem::path& path);

/// 16-bit grayscale; values in [0,1] quantized by round(v*65535).
void write_png_gray16(const std::filesystem::path& path, const Grid2<float>& image);
Grid2<float> read_png_gray16(const std::filesystem::path& path);

/// Accepts 8- or 16-bit single-channel grayscale (for imported depth maps).
Grid2<float> read_png_gray_any(const std::filesystem::path& path);

/// 8-bit paletted label image for plane masks; labels must be < 16.
void write_png_indexed(const std::filesystem::path& path, const Grid2<uint8_t>& labels);
Grid2<uint8_t> read_png_indexed(const std::filesystem::path& path);

/// 8-bit grayscale visualization mapping [lo, hi] to [0, 255] with clamping.
void write_png_gray8(const std::filesystem::path& path, const Grid2<float>& image, float lo, float hi);

}  // namespace holo
