#include "commands.hpp"
#include "options.hpp"

#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

namespace {

void print_usage(std::FILE* stream) {
    std::fputs(
        "usage: holo <command> [options]\n"
        "\n"
        "commands:\n"
        "  dataset-gen  build a procedural RGBD corpus with reference power matrices\n"
        "  train        train the power-matrix estimator on a corpus\n"
        "  optimize     optimize subframe phases (and powers) for one target image\n"
        "  estimate     predict a power matrix for a target with a trained estimator\n"
        "  eval         cold- vs warm-start convergence report on held-out targets\n"
        "  render       write a stored phase map or complex field as a PNG\n"
        "\n"
        "Run 'holo <command> --help' for the command's options. Options may also\n"
        "come from --config <file>, a flat JSON object whose keys are option names\n"
        "(optionally prefixed '<command>.'); flags override the file, and the\n"
        "HOLO_SEED environment variable overrides the file's seed.\n",
        stream);
}

}  // namespace

int main(int argc, char** argv) {
    using holo::cli::CliError;

    if (argc < 2) {
        print_usage(stderr);
        return holo::cli::kExitUsage;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        print_usage(stdout);
        return holo::cli::kExitOk;
    }

    const std::vector<std::string> args(argv + 2, argv + argc);
    using Handler = std::function<int(const std::vector<std::string>&)>;
    const std::pair<const char*, Handler> handlers[] = {
        {"dataset-gen", holo::cli::cmd_dataset_gen}, {"train", holo::cli::cmd_train},
        {"optimize", holo::cli::cmd_optimize},       {"estimate", holo::cli::cmd_estimate},
        {"eval", holo::cli::cmd_eval},               {"render", holo::cli::cmd_render},
    };

    for (const auto& [name, handler] : handlers) {
        if (command != name) continue;
        try {
            return handler(args);
        } catch (const CliError& e) {
            if (e.code != holo::cli::kExitOk) std::fprintf(stderr, "holo %s: %s\n", name, e.what());
            return e.code;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "holo %s: %s\n", name, e.what());
            return holo::cli::kExitData;
        }
    }

    std::fprintf(stderr, "holo: unknown command '%s'\n\n", command.c_str());
    print_usage(stderr);
    return holo::cli::kExitUsage;
}
