#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "holo/grid.hpp"
#include "holo/optimize.hpp"
#include "holo/power.hpp"
#include "holo/scene.hpp"

namespace holo {

/// One corpus entry: a quantized RGBD target, its plane masks and the power
/// matrix found by cold-start co-optimization, plus enough provenance to
/// reproduce it. Target pixels hold exactly the values an 8-bit PNG round
/// trip produces (likewise the 16-bit depth), so save/load is bitwise.
struct DatasetRecord {
    std::string id;
    std::vector<Grid2<float>> target;  // P channels, entries k/255
    Grid2<float> depth;                // entries k/65535
    std::vector<Grid2<uint8_t>> plane_masks;
    LaserPowerMatrix<float> powers;
    double final_loss = 0.0;
    uint64_t generator_seed = 0;

    // optimization provenance
    OptimizationConfig opt;
    std::vector<double> wavelengths;
    double anchor_wavelength = 0.0;
    double pitch = 0.0;
    std::vector<double> plane_distances;

    void validate() const;
};

struct CorpusConfig {
    int count = 200;
    int resolution = 128;
    uint64_t base_seed = 1;
    OptimizationConfig opt;  // desk-scale default: 300 steps
    std::vector<double> wavelengths = {473e-9, 515e-9, 639e-9};
    double anchor_wavelength = 515e-9;
    double pitch = 8e-6;
    std::vector<double> plane_distances = {-0.005, 0.0, 0.005};

    CorpusConfig() { opt.steps = 300; }
};

struct CorpusSummary {
    int requested = 0;
    std::vector<std::string> built;
    std::vector<std::string> failed;  // "id: reason"
    double mean_final_loss = 0.0;
    double wall_seconds = 0.0;
};

/// Record directory layout: target.png, depth.png, masks.png, powers.json,
/// meta.json.
void save_record(const DatasetRecord& record, const std::filesystem::path& dir);
DatasetRecord load_record(const std::filesystem::path& dir);

/// Builds records {out_dir}/{id} for ids 000000..count-1 (generator seed
/// base_seed + i) and writes manifest.json. Per-record failures are recorded
/// in the summary, not thrown.
CorpusSummary build_dataset(const CorpusConfig& config, const std::filesystem::path& out_dir);

/// Record ids listed in {dir}/manifest.json.
std::vector<std::string> corpus_record_ids(const std::filesystem::path& dir);

/// Pre-optimization inputs for one record id.
struct RecordSource {
    std::vector<Grid2<float>> channels;
    Grid2<float> depth;
    uint64_t generator_seed = 0;
};

/// Import hook: external RGBD pairs (8-bit RGB target + 8/16-bit gray depth)
/// take the place of procedural generation; everything downstream is shared.
RecordSource load_rgbd_pair(const std::filesystem::path& rgb_png, const std::filesystem::path& depth_png);

/// The scene the record's optimization saw.
TargetScene<float> record_to_scene(const DatasetRecord& record);

TargetScene<float> make_scene(std::vector<Grid2<float>> channels, std::vector<Grid2<uint8_t>> masks,
                              std::vector<double> plane_distances, double pitch);

/// Builds one record from source images: quantize, derive plane masks, run
/// cold-start co-optimization with the corpus config.
DatasetRecord build_record(const std::string& id, const RecordSource& source, const CorpusConfig& config);

}  // namespace holo
