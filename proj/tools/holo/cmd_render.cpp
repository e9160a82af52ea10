#include "commands.hpp"
#include "options.hpp"

#include "holo/png_io.hpp"
#include "holo/serialize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace holo::cli {

namespace po = boost::program_options;

int cmd_render(const std::vector<std::string>& args) {
    po::options_description desc("render options");
    // clang-format off
    desc.add_options()
        ("config", po::value<std::string>(), "flat JSON config file")
        ("input", po::value<std::string>(), "stored phase/field base path, without .bin/.json (required)")
        ("out", po::value<std::string>(), "output PNG path (required)")
        ("lo", po::value<std::string>(), "black point; default = data minimum")
        ("hi", po::value<std::string>(), "white point; default = data maximum");
    // clang-format on
    Options options("render", desc, args);

    // Parse every flag before touching the filesystem so value errors (64)
    // surface ahead of missing-input errors (66).
    const std::filesystem::path input = options.require("input");
    const std::filesystem::path out = options.require("out");
    const double lo_flag = options.get("lo", 0.0);
    const double hi_flag = options.get("hi", 0.0);
    std::filesystem::path sidecar = input;
    sidecar += ".json";
    require_exists(sidecar, "input sidecar");

    std::string kind;
    Grid2<float> image(1, 1);
    try {
        kind = nlohmann::json::parse(read_text_file(sidecar)).at("kind").get<std::string>();
        if (kind == "phase") {
            image = load_phase(input);
        } else if (kind == "complex") {
            const ComplexField<float> field = load_complex_field(input);
            image = Grid2<float>(field.height(), field.width());
            for (size_t i = 0; i < image.size(); ++i) image.data[i] = std::abs(field.grid.data[i]);
        } else {
            throw std::runtime_error(sidecar.string() + ": cannot render kind '" + kind + "'");
        }
    } catch (const std::exception& e) {
        throw CliError(kExitData, e.what());
    }

    const auto [min_it, max_it] = std::minmax_element(image.data.begin(), image.data.end());
    float lo = options.has("lo") ? static_cast<float>(lo_flag) : *min_it;
    float hi = options.has("hi") ? static_cast<float>(hi_flag) : *max_it;
    if (!(hi > lo)) hi = lo + 1.0f;

    if (out.has_parent_path()) ensure_out_dir(out.parent_path());
    options.echo["input"] = input.string();
    options.echo["out"] = out.string();
    options.echo["lo"] = lo;
    options.echo["hi"] = hi;
    options.write_echo(out.has_parent_path() ? out.parent_path() : std::filesystem::path("."));
    try {
        write_png_gray8(out, image, lo, hi);
    } catch (const std::exception& e) {
        throw CliError(kExitIo, e.what());
    }

    std::printf("%s (%s, %dx%d) -> %s [%g, %g]\n", input.string().c_str(), kind.c_str(), image.height,
                image.width, out.string().c_str(), lo, hi);
    return kExitOk;
}

}  // namespace holo::cli
