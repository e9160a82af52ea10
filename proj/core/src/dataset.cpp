#include "holo/dataset.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "holo/parallel.hpp"
#include "holo/png_io.hpp"
#include "holo/procedural.hpp"
#include "holo/rng.hpp"
#include "holo/serialize.hpp"

namespace holo {

namespace {

using nlohmann::json;

json opt_config_to_json(const OptimizationConfig& c) {
    json j;
    j["steps"] = c.steps;
    j["lr_start"] = c.lr_start;
    j["lr_end"] = c.lr_end;
    j["scale"] = c.scale;
    j["beta1"] = c.beta1;
    j["beta2"] = c.beta2;
    j["epsilon"] = c.epsilon;
    j["seed"] = c.seed;
    return j;
}

OptimizationConfig opt_config_from_json(const json& j) {
    OptimizationConfig c;
    c.steps = j.at("steps").get<int>();
    c.lr_start = j.at("lr_start").get<double>();
    c.lr_end = j.at("lr_end").get<double>();
    c.scale = j.at("scale").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
    return c;
}

json powers_to_json(const LaserPowerMatrix<float>& m) {
    json rows = json::array();
    for (int f = 0; f < m.subframes; ++f) {
        json row = json::array();
        for (int p = 0; p < m.primaries; ++p) row.push_back(m.at(f, p));
        rows.push_back(row);
    }
    return rows;
}

LaserPowerMatrix<float> powers_from_json(const json& rows, const std::filesystem::path& path) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw std::runtime_error(path.string() + ": powers must be a 2D array");
    const int F = static_cast<int>(rows.size());
    const int P = static_cast<int>(rows[0].size());
    LaserPowerMatrix<float> m(F, P, 0.0f);
    for (int f = 0; f < F; ++f) {
        if (static_cast<int>(rows[f].size()) != P)
            throw std::runtime_error(path.string() + ": ragged powers array");
        for (int p = 0; p < P; ++p) m.at(f, p) = rows[f][p].get<float>();
    }
    return m;
}

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": JSON parse error: " + e.what());
    }
}

std::string record_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06d", index);
    return buf;
}

std::string config_hash_hex(const CorpusConfig& config) {
    json j;
    j["count"] = config.count;
    j["resolution"] = config.resolution;
    j["base_seed"] = config.base_seed;
    j["opt"] = opt_config_to_json(config.opt);
    j["wavelengths"] = config.wavelengths;
    j["anchor_wavelength"] = config.anchor_wavelength;
    j["pitch"] = config.pitch;
    j["plane_distances"] = config.plane_distances;
    const std::string text = j.dump();
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(text.data(), text.size()));
    return buf;
}

}  // namespace

void DatasetRecord::validate() const {
    if (target.empty() || plane_masks.empty()) throw std::invalid_argument("DatasetRecord: empty fields");
    if (!powers.in_unit_range(0.0)) throw std::invalid_argument("DatasetRecord: powers outside [0,1]");
    for (const auto& c : target)
        for (float v : c.data)
            if (!(v >= 0.0f && v <= 1.0f)) throw std::invalid_argument("DatasetRecord: target outside [0,1]");
    Grid2<int> cover(depth.height, depth.width, 0);
    for (const auto& m : plane_masks) {
        if (m.height != depth.height || m.width != depth.width)
            throw std::invalid_argument("DatasetRecord: mask shape mismatch");
        for (size_t i = 0; i < m.size(); ++i) cover.data[i] += m.data[i] ? 1 : 0;
    }
    for (int v : cover.data)
        if (v != 1) throw std::invalid_argument("DatasetRecord: masks do not partition the image");
}

void save_record(const DatasetRecord& record, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_png_rgb8(dir / "target.png", record.target);
    write_png_gray16(dir / "depth.png", record.depth);

    Grid2<uint8_t> labels(record.depth.height, record.depth.width, 0);
    for (size_t k = 0; k < record.plane_masks.size(); ++k)
        for (size_t i = 0; i < labels.size(); ++i)
            if (record.plane_masks[k].data[i]) labels.data[i] = static_cast<uint8_t>(k);
    write_png_indexed(dir / "masks.png", labels);

    write_text_file(dir / "powers.json", powers_to_json(record.powers).dump(2) + "\n");

    json meta;
    meta["id"] = record.id;
    meta["generator_seed"] = record.generator_seed;
    meta["final_loss"] = record.final_loss;
    meta["planes"] = record.plane_masks.size();
    meta["opt"] = opt_config_to_json(record.opt);
    meta["wavelengths"] = record.wavelengths;
    meta["anchor_wavelength"] = record.anchor_wavelength;
    meta["pitch"] = record.pitch;
    meta["plane_distances"] = record.plane_distances;
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");
}

DatasetRecord load_record(const std::filesystem::path& dir) {
    DatasetRecord record;
    const json meta = parse_json_file(dir / "meta.json");
    try {
        record.id = meta.at("id").get<std::string>();
        record.generator_seed = meta.at("generator_seed").get<uint64_t>();
        record.final_loss = meta.at("final_loss").get<double>();
        record.opt = opt_config_from_json(meta.at("opt"));
        record.wavelengths = meta.at("wavelengths").get<std::vector<double>>();
        record.anchor_wavelength = meta.at("anchor_wavelength").get<double>();
        record.pitch = meta.at("pitch").get<double>();
        record.plane_distances = meta.at("plane_distances").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw std::runtime_error((dir / "meta.json").string() + ": bad metadata: " + e.what());
    }
    const size_t planes = meta.at("planes").get<size_t>();

    record.target = read_png_rgb8(dir / "target.png");
    record.depth = read_png_gray16(dir / "depth.png");
    const Grid2<uint8_t> labels = read_png_indexed(dir / "masks.png");
    if (labels.height != record.depth.height || labels.width != record.depth.width)
        throw std::runtime_error((dir / "masks.png").string() + ": shape differs from depth map");
    record.plane_masks.assign(planes, Grid2<uint8_t>(labels.height, labels.width, 0));
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels.data[i] >= planes)
            throw std::runtime_error((dir / "masks.png").string() + ": label exceeds plane count");
        record.plane_masks[labels.data[i]].data[i] = 1;
    }
    record.powers = powers_from_json(parse_json_file(dir / "powers.json"), dir / "powers.json");
    record.validate();
    return record;
}

TargetScene<float> make_scene(std::vector<Grid2<float>> channels, std::vector<Grid2<uint8_t>> masks,
                              std::vector<double> plane_distances, double pitch) {
    TargetScene<float> scene;
    scene.intensity = std::move(channels);
    scene.plane_masks = std::move(masks);
    scene.plane_distances = std::move(plane_distances);
    scene.pitch = pitch;
    scene.validate();
    return scene;
}

TargetScene<float> record_to_scene(const DatasetRecord& record) {
    return make_scene(record.target, record.plane_masks, record.plane_distances, record.pitch);
}

RecordSource load_rgbd_pair(const std::filesystem::path& rgb_png, const std::filesystem::path& depth_png) {
    RecordSource source;
    source.channels = read_png_rgb8(rgb_png);
    source.depth = read_png_gray_any(depth_png);
    if (source.depth.height != source.channels[0].height ||
        source.depth.width != source.channels[0].width)
        throw std::invalid_argument(depth_png.string() + ": depth dimensions differ from target");
    return source;
}

DatasetRecord build_record(const std::string& id, const RecordSource& source, const CorpusConfig& config) {
    DatasetRecord record;
    record.id = id;
    record.generator_seed = source.generator_seed;
    record.wavelengths = config.wavelengths;
    record.anchor_wavelength = config.anchor_wavelength;
    record.pitch = config.pitch;
    record.plane_distances = config.plane_distances;
    record.opt = config.opt;
    record.opt.seed = source.generator_seed;

    for (const auto& c : source.channels) record.target.push_back(snap_to_u8(c));
    record.depth = snap_to_u16(source.depth);
    record.plane_masks = quantize_depth(record.depth, static_cast<int>(config.plane_distances.size()));

    TargetScene<float> scene = record_to_scene(record);
    OptimizeResult<float> result = optimize_multicolor<float>(scene, record.wavelengths,
                                                              record.anchor_wavelength, record.opt);
    record.powers = result.powers;
    record.final_loss = result.final_loss;
    record.validate();
    return record;
}

CorpusSummary build_dataset(const CorpusConfig& config, const std::filesystem::path& out_dir) {
    if (config.count < 1) throw std::invalid_argument("build_dataset: count must be >= 1");
    if (config.resolution < 32) throw std::invalid_argument("build_dataset: resolution must be >= 32");
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);

    CorpusSummary summary;
    summary.requested = config.count;
    std::vector<std::string> errors(static_cast<size_t>(config.count));
    std::vector<double> losses(static_cast<size_t>(config.count), 0.0);
    std::vector<uint8_t> ok(static_cast<size_t>(config.count), 0);

    parallel_for(0, config.count, [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            const std::string id = record_id(static_cast<int>(i));
            try {
                RecordSource source;
                source.generator_seed = config.base_seed + static_cast<uint64_t>(i);
                ProceduralTarget target =
                    generate_procedural_target(source.generator_seed, config.resolution, config.resolution);
                source.channels = std::move(target.channels);
                source.depth = std::move(target.depth);
                const DatasetRecord record = build_record(id, source, config);
                save_record(record, out_dir / id);
                losses[i] = record.final_loss;
                ok[i] = 1;
            } catch (const std::exception& e) {
                errors[i] = id + ": " + e.what();
            }
        }
    });

    json ids = json::array();
    double loss_sum = 0.0;
    for (int i = 0; i < config.count; ++i) {
        if (ok[i]) {
            const std::string id = record_id(i);
            summary.built.push_back(id);
            json entry;
            entry["id"] = id;
            entry["seed"] = config.base_seed + static_cast<uint64_t>(i);
            ids.push_back(entry);
            loss_sum += losses[i];
        } else {
            summary.failed.push_back(errors[i]);
        }
    }
    summary.mean_final_loss = summary.built.empty() ? 0.0 : loss_sum / static_cast<double>(summary.built.size());

    json manifest;
    manifest["records"] = ids;
    manifest["config_hash"] = config_hash_hex(config);
    manifest["resolution"] = config.resolution;
    manifest["base_seed"] = config.base_seed;
    manifest["opt"] = opt_config_to_json(config.opt);
    manifest["wavelengths"] = config.wavelengths;
    manifest["anchor_wavelength"] = config.anchor_wavelength;
    manifest["pitch"] = config.pitch;
    manifest["plane_distances"] = config.plane_distances;
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

std::vector<std::string> corpus_record_ids(const std::filesystem::path& dir) {
    const json manifest = parse_json_file(dir / "manifest.json");
    std::vector<std::string> ids;
    try {
        for (const auto& entry : manifest.at("records")) ids.push_back(entry.at("id").get<std::string>());
    } catch (const json::exception& e) {
        throw std::runtime_error((dir / "manifest.json").string() + ": bad manifest: " + e.what());
    }
    return ids;
}

}  // namespace holo
