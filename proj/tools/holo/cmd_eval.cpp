#include "commands.hpp"
#include "options.hpp"

#include "holo/convergence.hpp"
#include "holo/dataset.hpp"
#include "holo/png_io.hpp"
#include "holo/serialize.hpp"
#include "holo/train.hpp"

#include <algorithm>
#include <cstdio>

namespace holo::cli {

namespace po = boost::program_options;

namespace {

std::vector<std::string> split_ids(const std::string& text) {
    std::vector<std::string> ids;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t comma = text.find(',', start);
        const std::string part =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        if (!part.empty()) ids.push_back(part);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return ids;
}

}  // namespace

int cmd_eval(const std::vector<std::string>& args) {
    po::options_description desc("eval options");
    // clang-format off
    desc.add_options()
        ("config", po::value<std::string>(), "flat JSON config file")
        ("checkpoint", po::value<std::string>(), "estimator checkpoint directory (required)")
        ("corpus", po::value<std::string>(), "corpus directory with evaluation targets (required)")
        ("out", po::value<std::string>(), "output directory (required)")
        ("ids", po::value<std::string>(), "comma-separated record ids; default = whole corpus")
        ("targets", po::value<std::string>(), "cap on the number of targets")
        ("steps", po::value<std::string>(), "optimization steps per arm")
        ("checkpoints", po::value<std::string>(), "comma-separated step checkpoints")
        ("scale", po::value<std::string>(), "target brightness scale")
        ("lr-start", po::value<std::string>(), "initial learning rate")
        ("lr-end", po::value<std::string>(), "final learning rate")
        ("seed", po::value<std::string>(), "base phase-init seed; target i uses seed+i")
        ("jobs", po::value<std::string>(), "worker thread cap");
    // clang-format on
    Options options("eval", desc, args);
    apply_jobs(options);

    // Parse every flag before touching the filesystem so value errors (64)
    // surface ahead of missing-input errors (66).
    const std::filesystem::path checkpoint = options.require("checkpoint");
    const std::filesystem::path corpus = options.require("corpus");
    const std::filesystem::path out = options.require("out");

    ConvergenceConfig config;
    config.opt.steps = options.get("steps", config.opt.steps);
    config.opt.scale = options.get("scale", config.opt.scale);
    config.opt.lr_start = options.get("lr-start", config.opt.lr_start);
    config.opt.lr_end = options.get("lr-end", config.opt.lr_end);
    config.opt.seed = options.get("seed", config.opt.seed);
    config.checkpoints = options.get("checkpoints", config.checkpoints);
    const int cap = options.get("targets", -1);
    const std::string ids_flag = options.get("ids", std::string());
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitUsage, e.what());
    }

    require_exists(checkpoint / "manifest.json", "checkpoint manifest");
    require_exists(corpus / "manifest.json", "corpus manifest");

    EstimatorNet<float> model = [&] {
        try {
            return std::move(load_checkpoint(checkpoint).model);
        } catch (const std::exception& e) {
            throw CliError(kExitData, e.what());
        }
    }();

    std::vector<std::string> ids;
    std::vector<ConvergenceTarget> targets;
    try {
        ids = options.has("ids") ? split_ids(ids_flag) : corpus_record_ids(corpus);
        if (options.has("targets") && cap < static_cast<int>(ids.size()))
            ids.resize(static_cast<size_t>(std::max(cap, 0)));
        if (ids.empty()) throw std::runtime_error("eval: no targets selected");
        for (const std::string& id : ids) {
            const DatasetRecord record = load_record(corpus / id);
            if (targets.empty()) {
                config.wavelengths = record.wavelengths;
                config.anchor_wavelength = record.anchor_wavelength;
                config.subframes = record.powers.subframes;
            }
            targets.push_back({id, record_to_scene(record)});
        }
    } catch (const std::exception& e) {
        throw CliError(kExitData, e.what());
    }

    ensure_out_dir(out / "snapshots");
    options.echo["checkpoint"] = checkpoint.string();
    options.echo["corpus"] = corpus.string();
    options.echo["out"] = out.string();
    options.echo["ids"] = ids;
    options.echo["steps"] = config.opt.steps;
    options.echo["checkpoints"] = config.checkpoints;
    options.echo["scale"] = config.opt.scale;
    options.echo["lr-start"] = config.opt.lr_start;
    options.echo["lr-end"] = config.opt.lr_end;
    options.echo["seed"] = config.opt.seed;
    options.write_echo(out);

    const double scale = config.opt.scale;
    const ConvergenceSnapshotSink sink = [&](const std::string& id, const std::string& arm, int step,
                                             const std::vector<Grid2<float>>& composite) {
        std::vector<Grid2<float>> display = composite;
        for (auto& ch : display)
            for (float& v : ch.data) v = std::min(1.0f, std::max(0.0f, v / static_cast<float>(scale)));
        const std::filesystem::path path =
            out / "snapshots" / (id + "_" + arm + "_step" + std::to_string(step) + ".png");
        if (display.size() == 3)
            write_png_rgb8(path, display);
        else
            write_png_gray8(path, display[0], 0.0f, 1.0f);
    };

    const ConvergenceReport report = run_convergence_experiment(targets, model, config, sink);

    try {
        write_text_file(out / "report.json", report_to_json(report));
        write_text_file(out / "report.csv", report_to_csv(report));
    } catch (const std::exception& e) {
        throw CliError(kExitIo, e.what());
    }

    for (size_t c = 0; c < report.checkpoints.size(); ++c)
        std::printf("step %d: mean loss cold %.6g  warm %.6g\n", report.checkpoints[c],
                    report.mean_cold_loss_at[c], report.mean_warm_loss_at[c]);
    for (const std::string& failure : report.failures) std::fprintf(stderr, "failed %s\n", failure.c_str());
    return report.failures.empty() ? kExitOk : kExitPartial;
}

}  // namespace holo::cli
