#include "commands.hpp"
#include "options.hpp"

#include "holo/convergence.hpp"
#include "holo/dataset.hpp"
#include "holo/hologram.hpp"
#include "holo/optimize.hpp"
#include "holo/png_io.hpp"
#include "holo/procedural.hpp"
#include "holo/serialize.hpp"
#include "holo/train.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>

namespace holo::cli {

namespace po = boost::program_options;
using nlohmann::json;

namespace {

json powers_to_json(const LaserPowerMatrix<float>& m) {
    json rows = json::array();
    for (int f = 0; f < m.subframes; ++f) {
        json row = json::array();
        for (int p = 0; p < m.primaries; ++p) row.push_back(m.at(f, p));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Grid2<float>> load_target_channels(const std::filesystem::path& path) {
    require_exists(path, "target image");
    try {
        return read_png_rgb8(path);
    } catch (const std::exception& e) {
        throw CliError(kExitData, e.what());
    }
}

EstimatorNet<float> load_model(const std::filesystem::path& checkpoint) {
    require_exists(checkpoint / "manifest.json", "checkpoint manifest");
    try {
        return std::move(load_checkpoint(checkpoint).model);
    } catch (const std::exception& e) {
        throw CliError(kExitData, e.what());
    }
}

/// Display mapping for reconstructions: intensity / scale, clamped to [0,1].
void write_recon_png(const std::filesystem::path& path, std::vector<Grid2<float>> channels, double scale) {
    for (auto& ch : channels)
        for (float& v : ch.data) v = std::min(1.0f, std::max(0.0f, v / static_cast<float>(scale)));
    if (channels.size() == 3) {
        write_png_rgb8(path, channels);
    } else {
        for (size_t c = 0; c < channels.size(); ++c) {
            std::filesystem::path p = path;
            p.replace_extension();
            p += "_p" + std::to_string(c) + ".png";
            write_png_gray8(p, channels[c], 0.0f, 1.0f);
        }
    }
}

}  // namespace

int cmd_optimize(const std::vector<std::string>& args) {
    po::options_description desc("optimize options");
    // clang-format off
    desc.add_options()
        ("config", po::value<std::string>(), "flat JSON config file")
        ("target", po::value<std::string>(), "RGB target PNG (required)")
        ("depth", po::value<std::string>(), "16-bit depth PNG; omitted = single plane at 0 m")
        ("out", po::value<std::string>(), "output directory (required)")
        ("steps", po::value<std::string>(), "optimization steps")
        ("lr-start", po::value<std::string>(), "initial learning rate")
        ("lr-end", po::value<std::string>(), "final learning rate")
        ("scale", po::value<std::string>(), "target brightness scale")
        ("seed", po::value<std::string>(), "phase-init seed")
        ("subframes", po::value<std::string>(), "hologram subframes")
        ("wavelengths", po::value<std::string>(), "comma-separated wavelengths in meters")
        ("anchor-wavelength", po::value<std::string>(), "phase-calibration wavelength in meters")
        ("pitch", po::value<std::string>(), "pixel pitch in meters")
        ("planes", po::value<std::string>(), "comma-separated plane distances in meters")
        ("warm-start", po::value<std::string>(), "estimator checkpoint; powers start from its prediction")
        ("single-color", po::bool_switch(), "identity powers, one subframe per primary")
        ("export-grating", po::bool_switch(), "also write odd-row pi-shifted phases")
        ("jobs", po::value<std::string>(), "worker thread cap");
    // clang-format on
    Options options("optimize", desc, args);
    apply_jobs(options);

    if (options.get_flag("single-color") && options.has("warm-start"))
        throw CliError(kExitUsage, "--single-color and --warm-start are mutually exclusive");

    // Parse every flag before touching the filesystem so value errors (64)
    // surface ahead of missing-input errors (66).
    const std::filesystem::path target_path = options.require("target");
    const std::filesystem::path out = options.require("out");

    OptimizationConfig opt;
    opt.steps = options.get("steps", opt.steps);
    opt.lr_start = options.get("lr-start", opt.lr_start);
    opt.lr_end = options.get("lr-end", opt.lr_end);
    opt.scale = options.get("scale", opt.scale);
    opt.seed = options.get("seed", opt.seed);
    const int subframes = options.get("subframes", 3);
    const std::vector<double> wavelengths =
        options.get("wavelengths", std::vector<double>{473e-9, 515e-9, 639e-9});
    const double anchor = options.get("anchor-wavelength", 515e-9);
    const double pitch = options.get("pitch", 8e-6);

    std::vector<double> plane_distances;
    if (options.has("depth")) {
        plane_distances = options.get("planes", std::vector<double>{-0.005, 0.0, 0.005});
    } else {
        plane_distances = options.get("planes", std::vector<double>{0.0});
        if (plane_distances.size() != 1)
            throw CliError(kExitUsage, "multiple --planes need a --depth image");
    }

    const std::vector<Grid2<float>> channels = load_target_channels(target_path);
    std::vector<Grid2<uint8_t>> masks;
    if (options.has("depth")) {
        const std::filesystem::path depth_path = options.get("depth", std::string());
        require_exists(depth_path, "depth image");
        try {
            const Grid2<float> depth = read_png_gray_any(depth_path);
            masks = quantize_depth(depth, static_cast<int>(plane_distances.size()));
        } catch (const std::exception& e) {
            throw CliError(kExitData, e.what());
        }
    } else {
        masks.emplace_back(channels[0].height, channels[0].width, uint8_t{1});
    }

    TargetScene<float> scene;
    try {
        scene = make_scene(channels, std::move(masks), plane_distances, pitch);
    } catch (const std::exception& e) {
        throw CliError(kExitData, e.what());
    }

    ensure_out_dir(out);
    options.echo["target"] = target_path.string();
    if (options.has("depth")) options.echo["depth"] = options.get("depth", std::string());
    options.echo["out"] = out.string();
    options.echo["steps"] = opt.steps;
    options.echo["lr-start"] = opt.lr_start;
    options.echo["lr-end"] = opt.lr_end;
    options.echo["scale"] = opt.scale;
    options.echo["seed"] = opt.seed;
    options.echo["subframes"] = subframes;
    options.echo["wavelengths"] = wavelengths;
    options.echo["anchor-wavelength"] = anchor;
    options.echo["pitch"] = pitch;
    options.echo["planes"] = plane_distances;
    options.echo["single-color"] = options.get_flag("single-color");
    options.echo["export-grating"] = options.get_flag("export-grating");
    if (options.has("warm-start")) options.echo["warm-start"] = options.get("warm-start", std::string());
    options.write_echo(out);

    const auto t0 = std::chrono::steady_clock::now();
    OptimizeResult<float> result;
    if (options.get_flag("single-color")) {
        result = optimize_single_color<float>(scene, wavelengths, anchor, opt);
    } else if (options.has("warm-start")) {
        const EstimatorNet<float> model = load_model(options.get("warm-start", std::string()));
        const LaserPowerMatrix<float> predicted = estimate_powers(model, channels);
        result = optimize_multicolor<float>(scene, wavelengths, anchor, opt, &predicted,
                                            PowerMode::co_optimize, subframes);
    } else {
        result = optimize_multicolor<float>(scene, wavelengths, anchor, opt, nullptr,
                                            PowerMode::co_optimize, subframes);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    try {
        for (int f = 0; f < result.phases.count(); ++f) {
            const std::string stem = "phase_f" + std::to_string(f);
            save_phase(out / stem, result.phases.phases[f], pitch);
            if (options.get_flag("export-grating"))
                save_phase(out / ("phase_grating_f" + std::to_string(f)),
                           apply_linear_grating(result.phases.phases[f]), pitch);
        }
        write_text_file(out / "powers.json", powers_to_json(result.powers).dump(2) + "\n");
        write_text_file(out / "powers_step0.json", powers_to_json(result.initial_powers).dump(2) + "\n");
        write_text_file(out / "history.json", json(result.history).dump(2) + "\n");

        json opt_json;
        opt_json["steps"] = opt.steps;
        opt_json["lr_start"] = opt.lr_start;
        opt_json["lr_end"] = opt.lr_end;
        opt_json["scale"] = opt.scale;
        opt_json["beta1"] = opt.beta1;
        opt_json["beta2"] = opt.beta2;
        opt_json["epsilon"] = opt.epsilon;
        opt_json["seed"] = opt.seed;
        write_text_file(out / "config.json", opt_json.dump(2) + "\n");

        json summary;
        summary["final_loss"] = result.final_loss;
        summary["initial_loss"] = result.history.front();
        summary["steps"] = opt.steps;
        summary["subframes"] = result.phases.count();
        summary["primaries"] = static_cast<int>(wavelengths.size());
        summary["initial_phase_hash"] = hex64(result.initial_phase_hash);
        write_text_file(out / "summary.json", summary.dump(2) + "\n");

        write_recon_png(out / "recon.png",
                        composite_reconstruction(result.phases, result.powers, scene, wavelengths),
                        opt.scale);
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError(kExitIo, e.what());
    }

    std::printf("final loss %.6g after %d steps (%.1f s); phase init %s\n", result.final_loss, opt.steps,
                wall, hex64(result.initial_phase_hash).c_str());
    return kExitOk;
}

int cmd_estimate(const std::vector<std::string>& args) {
    po::options_description desc("estimate options");
    // clang-format off
    desc.add_options()
        ("config", po::value<std::string>(), "flat JSON config file")
        ("checkpoint", po::value<std::string>(), "estimator checkpoint directory (required)")
        ("target", po::value<std::string>(), "RGB target PNG (required)")
        ("out", po::value<std::string>(), "output directory (required)")
        ("jobs", po::value<std::string>(), "worker thread cap");
    // clang-format on
    Options options("estimate", desc, args);
    apply_jobs(options);

    const std::filesystem::path checkpoint = options.require("checkpoint");
    const std::filesystem::path target_path = options.require("target");
    const std::filesystem::path out = options.require("out");

    const std::vector<Grid2<float>> channels = load_target_channels(target_path);
    const EstimatorNet<float> model = load_model(checkpoint);
    const LaserPowerMatrix<float> powers = estimate_powers(model, channels);

    ensure_out_dir(out);
    options.echo["checkpoint"] = checkpoint.string();
    options.echo["target"] = target_path.string();
    options.echo["out"] = out.string();
    options.write_echo(out);
    try {
        write_text_file(out / "powers.json", powers_to_json(powers).dump(2) + "\n");
    } catch (const std::exception& e) {
        throw CliError(kExitIo, e.what());
    }

    for (int f = 0; f < powers.subframes; ++f) {
        for (int p = 0; p < powers.primaries; ++p) std::printf("%s%.6f", p ? "  " : "", powers.at(f, p));
        std::printf("\n");
    }
    return kExitOk;
}

}  // namespace holo::cli
