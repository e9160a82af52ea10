#include "holo/train.hpp"

#include <nlohmann/json.hpp>

#include "holo/serialize.hpp"

namespace holo {

namespace {

using nlohmann::json;

json training_config_to_json(const TrainingConfig& c) {
    json j;
    j["epochs"] = c.epochs;
    j["lr_start"] = c.lr_start;
    j["lr_end"] = c.lr_end;
    j["batch_size"] = c.batch_size;
    j["seed"] = c.seed;
    j["val_fraction"] = c.val_fraction;
    return j;
}

TrainingConfig training_config_from_json(const json& j) {
    TrainingConfig c;
    c.epochs = j.at("epochs").get<int>();
    c.lr_start = j.at("lr_start").get<double>();
    c.lr_end = j.at("lr_end").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.seed = j.at("seed").get<uint64_t>();
    c.val_fraction = j.at("val_fraction").get<double>();
    return c;
}

json tensor_entries(std::vector<ParamRef<float>>& refs) {
    json list = json::array();
    for (const auto& ref : refs) {
        json entry;
        entry["name"] = ref.name;
        entry["shape"] = ref.shape;
        entry["file"] = ref.name + ".bin";
        list.push_back(entry);
    }
    return list;
}

void write_ref_blobs(const std::filesystem::path& dir, std::vector<ParamRef<float>>& refs) {
    for (const auto& ref : refs) write_blob_f32(dir / (ref.name + ".bin"), ref.values->data(), ref.values->size());
}

void read_ref_blobs(const std::filesystem::path& dir, std::vector<ParamRef<float>>& refs) {
    for (auto& ref : refs) *ref.values = read_blob_f32(dir / (ref.name + ".bin"), ref.values->size());
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const TrainState<float>& state,
                     const TrainingConfig& config) {
    std::filesystem::create_directories(dir);
    // ParamRef carries mutable pointers, but saving only reads through them.
    auto& mut = const_cast<TrainState<float>&>(state);
    std::vector<ParamRef<float>> params = mut.model.parameters();
    std::vector<ParamRef<float>> buffers = mut.model.buffers();

    json manifest;
    manifest["format"] = "estimator-checkpoint";
    manifest["version"] = 1;
    manifest["epoch"] = state.completed_epochs;
    manifest["in_channels"] = state.model.in_channels();
    manifest["adam_step"] = state.adam.empty() ? int64_t(0) : state.adam[0].step;
    manifest["config"] = training_config_to_json(config);
    manifest["tensors"] = tensor_entries(params);
    manifest["buffers"] = tensor_entries(buffers);
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    write_ref_blobs(dir, params);
    write_ref_blobs(dir, buffers);
    for (size_t i = 0; i < params.size(); ++i) {
        write_blob_f32(dir / (params[i].name + ".adam_m.bin"), state.adam[i].m.data(),
                       state.adam[i].m.size());
        write_blob_f32(dir / (params[i].name + ".adam_v.bin"), state.adam[i].v.data(),
                       state.adam[i].v.size());
    }
}

TrainState<float> load_checkpoint(const std::filesystem::path& dir, TrainingConfig* config_out) {
    const std::filesystem::path manifest_path = dir / "manifest.json";
    json manifest;
    try {
        manifest = json::parse(read_text_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(manifest_path.string() + ": JSON parse error: " + e.what());
    }

    TrainingConfig config;
    int epoch = 0, in_channels = 3;
    int64_t adam_step = 0;
    try {
        if (manifest.at("format").get<std::string>() != "estimator-checkpoint")
            throw std::runtime_error(manifest_path.string() + ": not an estimator checkpoint");
        config = training_config_from_json(manifest.at("config"));
        epoch = manifest.at("epoch").get<int>();
        in_channels = manifest.at("in_channels").get<int>();
        adam_step = manifest.at("adam_step").get<int64_t>();
    } catch (const json::exception& e) {
        throw std::runtime_error(manifest_path.string() + ": bad manifest: " + e.what());
    }

    TrainState<float> state(EstimatorNet<float>(config.seed, in_channels));
    state.completed_epochs = epoch;
    std::vector<ParamRef<float>> params = state.model.parameters();
    std::vector<ParamRef<float>> buffers = state.model.buffers();
    read_ref_blobs(dir, params);
    read_ref_blobs(dir, buffers);
    for (size_t i = 0; i < params.size(); ++i) {
        state.adam[i].m = read_blob_f32(dir / (params[i].name + ".adam_m.bin"), state.adam[i].m.size());
        state.adam[i].v = read_blob_f32(dir / (params[i].name + ".adam_v.bin"), state.adam[i].v.size());
        state.adam[i].step = adam_step;
    }
    if (config_out) *config_out = config;
    return state;
}

}  // namespace holo
