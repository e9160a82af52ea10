#include "commands.hpp"
#include "options.hpp"

#include "holo/dataset.hpp"

#include <cstdio>

namespace holo::cli {

namespace po = boost::program_options;

int cmd_dataset_gen(const std::vector<std::string>& args) {
    po::options_description desc("dataset-gen options");
    // clang-format off
    desc.add_options()
        ("config", po::value<std::string>(), "flat JSON config file")
        ("out", po::value<std::string>(), "output corpus directory (required)")
        ("count", po::value<std::string>(), "number of records")
        ("resolution", po::value<std::string>(), "square target resolution")
        ("steps", po::value<std::string>(), "optimization steps per record")
        ("seed", po::value<std::string>(), "base seed; record i uses seed+i")
        ("lr-start", po::value<std::string>(), "initial learning rate")
        ("lr-end", po::value<std::string>(), "final learning rate")
        ("scale", po::value<std::string>(), "target brightness scale")
        ("jobs", po::value<std::string>(), "worker thread cap");
    // clang-format on
    Options options("dataset-gen", desc, args);
    apply_jobs(options);

    CorpusConfig config;
    config.count = options.get("count", config.count);
    config.resolution = options.get("resolution", config.resolution);
    config.base_seed = options.get("seed", config.base_seed);
    config.opt.steps = options.get("steps", config.opt.steps);
    config.opt.lr_start = options.get("lr-start", config.opt.lr_start);
    config.opt.lr_end = options.get("lr-end", config.opt.lr_end);
    config.opt.scale = options.get("scale", config.opt.scale);

    const std::filesystem::path out = options.require("out");
    ensure_out_dir(out);

    options.echo["out"] = out.string();
    options.echo["count"] = config.count;
    options.echo["resolution"] = config.resolution;
    options.echo["seed"] = config.base_seed;
    options.echo["steps"] = config.opt.steps;
    options.echo["lr-start"] = config.opt.lr_start;
    options.echo["lr-end"] = config.opt.lr_end;
    options.echo["scale"] = config.opt.scale;
    options.write_echo(out);

    CorpusSummary summary;
    try {
        summary = build_dataset(config, out);
    } catch (const std::filesystem::filesystem_error& e) {
        throw CliError(kExitIo, e.what());
    }

    std::printf("built %zu/%d records in %.1f s, mean final loss %.6g\n", summary.built.size(),
                summary.requested, summary.wall_seconds, summary.mean_final_loss);
    for (const std::string& failure : summary.failed) std::fprintf(stderr, "failed %s\n", failure.c_str());
    return summary.failed.empty() ? kExitOk : kExitPartial;
}

}  // namespace holo::cli
