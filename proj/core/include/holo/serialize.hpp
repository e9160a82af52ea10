#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "holo/field.hpp"
#include "holo/grid.hpp"

namespace holo {

/// Raw little-endian float32 blob I/O. Read errors and size mismatches all
/// name the offending file.
void write_blob_f32(const std::filesystem::path& path, const float* data, size_t count);
std::vector<float> read_blob_f32(const std::filesystem::path& path);
std::vector<float> read_blob_f32(const std::filesystem::path& path, size_t expected_count);

/// Phase map persisted as <base>.bin (f32le) plus <base>.json sidecar with
/// shape, dtype, kind and pitch.
void save_phase(const std::filesystem::path& base, const Grid2<float>& phase, double pitch_m);
Grid2<float> load_phase(const std::filesystem::path& base, double* pitch_m = nullptr);

/// Complex field persisted the same way with interleaved re,im pairs.
void save_complex_field(const std::filesystem::path& base, const ComplexField<float>& field);
ComplexField<float> load_complex_field(const std::filesystem::path& base);

/// JSON file helpers; parse errors include the path. Writing is
/// deterministic: object keys serialize sorted, two-space indent.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

template <typename T>
Grid2<float> to_float_grid(const Grid2<T>& g) {
    Grid2<float> out(g.height, g.width);
    for (size_t i = 0; i < g.size(); ++i) out.data[i] = static_cast<float>(g.data[i]);
    return out;
}

}  // namespace holo
