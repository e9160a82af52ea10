#include "holo/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little, "blob format is little-endian");

namespace holo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

json read_json(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(path, std::string("JSON parse error: ") + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

json sidecar(const char* kind, int height, int width, double pitch_m) {
    json j;
    j["dtype"] = "f32le";
    j["kind"] = kind;
    j["shape"] = {height, width};
    j["pitch_m"] = pitch_m;
    return j;
}

void check_sidecar(const std::filesystem::path& path, const json& j, const char* kind, int* height,
                   int* width, double* pitch_m) {
    try {
        if (j.at("dtype").get<std::string>() != "f32le") fail(path, "unsupported dtype");
        if (j.at("kind").get<std::string>() != std::string(kind))
            fail(path, std::string("expected kind '") + kind + "', found '" +
                           j.at("kind").get<std::string>() + "'");
        const auto& shape = j.at("shape");
        if (!shape.is_array() || shape.size() != 2) fail(path, "shape must be [height, width]");
        *height = shape[0].get<int>();
        *width = shape[1].get<int>();
        *pitch_m = j.at("pitch_m").get<double>();
    } catch (const json::exception& e) {
        fail(path, std::string("bad sidecar: ") + e.what());
    }
    if (*height < 1 || *width < 1) fail(path, "non-positive shape");
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(path, "read failed");
    return text;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(path, "write failed");
}

void write_blob_f32(const std::filesystem::path& path, const float* data, size_t count) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(float)));
    if (!out) fail(path, "write failed");
}

std::vector<float> read_blob_f32(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) fail(path, "cannot open for reading");
    const std::streamsize bytes = in.tellg();
    if (bytes < 0) fail(path, "cannot determine size");
    if (bytes % sizeof(float) != 0) fail(path, "size is not a multiple of 4 bytes");
    std::vector<float> data(static_cast<size_t>(bytes) / sizeof(float));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(data.data()), bytes);
    if (!in) fail(path, "read failed");
    return data;
}

std::vector<float> read_blob_f32(const std::filesystem::path& path, size_t expected_count) {
    std::vector<float> data = read_blob_f32(path);
    if (data.size() != expected_count)
        fail(path, "expected " + std::to_string(expected_count) + " float32 values, found " +
                       std::to_string(data.size()));
    return data;
}

void save_phase(const std::filesystem::path& base, const Grid2<float>& phase, double pitch_m) {
    std::filesystem::path bin = base, meta = base;
    bin += ".bin";
    meta += ".json";
    write_blob_f32(bin, phase.data.data(), phase.size());
    write_json(meta, sidecar("phase", phase.height, phase.width, pitch_m));
}

Grid2<float> load_phase(const std::filesystem::path& base, double* pitch_m) {
    std::filesystem::path bin = base, meta = base;
    bin += ".bin";
    meta += ".json";
    int h = 0, w = 0;
    double pitch = 0.0;
    check_sidecar(meta, read_json(meta), "phase", &h, &w, &pitch);
    Grid2<float> phase(h, w);
    phase.data = read_blob_f32(bin, static_cast<size_t>(h) * w);
    if (pitch_m) *pitch_m = pitch;
    return phase;
}

void save_complex_field(const std::filesystem::path& base, const ComplexField<float>& field) {
    std::filesystem::path bin = base, meta = base;
    bin += ".bin";
    meta += ".json";
    write_blob_f32(bin, reinterpret_cast<const float*>(field.grid.data.data()), field.grid.size() * 2);
    write_json(meta, sidecar("complex", field.grid.height, field.grid.width, field.pitch));
}

ComplexField<float> load_complex_field(const std::filesystem::path& base) {
    std::filesystem::path bin = base, meta = base;
    bin += ".bin";
    meta += ".json";
    int h = 0, w = 0;
    double pitch = 0.0;
    check_sidecar(meta, read_json(meta), "complex", &h, &w, &pitch);
    const std::vector<float> raw = read_blob_f32(bin, static_cast<size_t>(h) * w * 2);
    ComplexField<float> field(h, w, pitch);
    for (size_t i = 0; i < field.grid.size(); ++i)
        field.grid.data[i] = std::complex<float>(raw[2 * i], raw[2 * i + 1]);
    return field;
}

}  // namespace holo
